"""Time the numba and numpy paths of each hot kernel and check they agree.

    python3 benchmarks/bench_kernels.py [--runs N] [--repeat R]

Also times a full ``simulate`` call with each tally backend.
"""
import argparse
import time

import numpy as np

from qgames import kernels
from qgames.game import StrategyProfile
from qgames.montecarlo import SimConfig, outcome_cdf, simulate
from qgames.params import CERECEDA, build_embedding
from qgames.presets import PD


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_tally(runs, repeat):
    table = build_embedding(CERECEDA)
    cdf = outcome_cdf(table)
    u = np.random.default_rng(0).random((runs, 3))
    out = {}
    for name, fn in (("numba", kernels.tally_runs_numba), ("numpy", kernels.tally_runs_numpy)):
        if fn is None:
            continue
        fn(u[:10], 0.5, 0.5, cdf, np.zeros((4, 4), dtype=np.int64))  # compile / warm up
        out[name] = best_of(lambda: fn(u, 0.4, 0.7, cdf, np.zeros((4, 4), dtype=np.int64)), repeat)
    return out


def bench_embedding(n, repeat):
    params = np.random.default_rng(1).random((n, 5)) * 0.5
    out = {}
    for name, fn in (("numba", kernels.embedding_batch_numba), ("numpy", kernels.embedding_batch_numpy)):
        if fn is None:
            continue
        kernels.embedding_batch(params[:10], impl=fn)
        out[name] = best_of(lambda: kernels.embedding_batch(params, impl=fn), repeat)
    if kernels.embedding_batch_numba is not None:
        a = kernels.embedding_batch(params, impl=kernels.embedding_batch_numba)
        b = kernels.embedding_batch(params, impl=kernels.embedding_batch_numpy)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    return out


def bench_simulate(runs, repeat):
    table = build_embedding(CERECEDA)
    cfg = SimConfig(runs, 42, StrategyProfile(1, 1))
    out, results = {}, {}
    for name, fn in (("numba", kernels.tally_runs_numba), ("numpy", kernels.tally_runs_numpy)):
        if fn is None:
            continue
        results[name] = simulate(table, PD, cfg, tally=fn)
        out[name] = best_of(lambda: simulate(table, PD, cfg, tally=fn), repeat)
    if len(results) == 2:
        assert results["numba"] == results["numpy"]
    return out


def report(label, timings):
    line = f"{label:34s}" + "".join(f"  {k} {v * 1e3:9.2f} ms" for k, v in timings.items())
    if len(timings) == 2:
        line += f"  speedup x{timings['numpy'] / timings['numba']:.2f}"
    print(line)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=2_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"default backend: {kernels.BACKEND}")
    report(f"tally ({args.runs} runs)", bench_tally(args.runs, args.repeat))
    report(f"embedding_batch ({args.runs // 4} rows)", bench_embedding(args.runs // 4, args.repeat))
    report(f"simulate ({args.runs} runs)", bench_simulate(args.runs, args.repeat))


if __name__ == "__main__":
    main()
