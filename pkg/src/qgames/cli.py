"""Command-line entry point: ``qgames <command> ...``.

Exit status: 0 success, 1 validation or self-check failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import params as P
from . import reproduce as R
from .chsh import chsh_delta, chsh_delta_embedding, chsh_result, cirelson_ok, classify, max_chsh
from .equilibrium import classify_game, find_equilibria, payoff_direct
from .errors import QGameError
from .formats import FormatError, read_game, read_table
from .game import DEFAULT_TOL, StrategyProfile, validate
from .kernels import BACKEND
from .montecarlo import SimConfig, simulate, signaling_zscores
from .presets import PRESETS
from .scan import scan, write_csv

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _floats(text, n, what):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise InputError(f"{what}: expected {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n or not all(math.isfinite(v) for v in vals):
        raise InputError(f"{what}: expected {n} finite comma-separated numbers, got {text!r}")
    return vals


def _game(choice):
    if choice in PRESETS:
        return PRESETS[choice].matrix
    path = Path(choice)
    if not path.exists():
        raise InputError(f"--game must be one of {sorted(PRESETS)} or a game file, got {choice!r}")
    return read_game(path)


def _table_and_params(args):
    np_ = P.NonFactParams(*_floats(args.params, 5, "--params"))
    if args.rs is None:
        fp = P.CLASSICAL
        table = P.build_embedding(np_)
    else:
        fp = P.FactorParams(*_floats(args.rs, 2, "--rs"))
        table = P.build_nonfact_general(fp, np_)
    return fp, np_, table


def _print_table(table):
    q = table.p.reshape(4, 4)
    print("table (S1,S1') | (S1,S2') | (S2,S1') | (S2,S2'), outcomes ++ +- -+ --:")
    for label, row in zip(("S1,S1'", "S1,S2'", "S2,S1'", "S2,S2'"), q):
        print(f"  {label:7s} " + "  ".join(f"{v:.6f}" for v in row))


def _domain_text(table, tol):
    try:
        return str(classify(table, tol))
    except QGameError as exc:
        return f"n/a ({exc})"


def cmd_validate(args):
    table = read_table(args.file)
    rep = validate(table, args.tol)
    for key in ("normalization", "symmetry", "causality"):
        ok = getattr(rep, f"{key}_ok")
        print(f"{key:14s} {'ok' if ok else 'FAIL'}  residual {rep.residuals[key]:.3e}")
    if rep.factorization is None:
        print(f"factorization  none (residual {rep.residuals['factorization']:.3e})")
    else:
        print("factorization  r={:.6g} s={:.6g} r'={:.6g} s'={:.6g}".format(*rep.factorization))
    delta = chsh_delta(table)
    print(f"CHSH delta     {delta:.6f}  (max over sign choices {max_chsh(table):.6f})")
    print(f"domain         {_domain_text(table, args.tol)}, delta={delta:.6g}")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_analyze(args):
    m = _game(args.game)
    fp, np_, table = _table_and_params(args)
    eps = P.epsilons(np_)
    vt = P.vtriple_from_table(table, args.tol)
    gc = classify_game(m)
    print(f"game           {gc.name.value}  a=({m.a1:g}, {m.a2:g}, {m.a3:g}, {m.a4:g})  "
          f"D1={gc.d1:g} D2={gc.d2:g} D3={gc.d3:g}")
    print(f"params         r={fp.r:g} s={fp.s:g}  a,b,c,d,e = " + ", ".join(f"{v:.6g}" for v in np_))
    _print_table(table)
    print("epsilons       e1={:.6g} e2={:.6g} e3={:.6g}".format(*eps))
    print("v-triple       v1={:.6g} v2={:.6g} v3={:.6g}".format(*vt.as_v()))
    delta = chsh_delta(table)
    print(f"CHSH delta     {delta:.6f}  domain {_domain_text(table, args.tol)}")
    eqs = find_equilibria(m, vt, (table.entry(13), table.entry(14)), args.tol)
    if eqs.continuum:
        print(f"continuum      {eqs.description}")
    print(f"equilibria     {len(eqs)}")
    for ne in eqs:
        print(f"  (x*, y*) = ({ne.profile.x:.6g}, {ne.profile.y:.6g})  {ne.kind.value:6s}"
              f"  payoffs ({ne.payoff_a:.6f}, {ne.payoff_b:.6f})")
    for note in eqs.notes:
        print(f"  note: {note}")
    if m == PRESETS["pd"].matrix and fp == P.CLASSICAL and np.allclose(tuple(np_), tuple(P.CERECEDA), atol=1e-9):
        p11 = payoff_direct(table, m, StrategyProfile(1, 1))[0]
        p00 = payoff_direct(table, m, StrategyProfile(0, 0))[0]
        print(f"note: the value 2.42678 = (18+sqrt(2))/8 sometimes quoted for Pi(1,1) at this point is Pi(0,0) "
              f"= {p00:.6f}; direct table evaluation gives Pi(1,1) = (18-sqrt(2))/8 = {p11:.6f}")
    return EXIT_OK


def cmd_chsh(args):
    fp, np_, table = _table_and_params(args)
    delta = chsh_delta(table)
    res = chsh_result(delta, args.tol)
    print(f"CHSH delta         {delta:.6f}")
    if args.rs is None:
        print(f"closed form        {chsh_delta_embedding(np_):.6f}")
        print(f"Cirel'son ok       {cirelson_ok(np_, args.tol)}")
    print(f"violates local     {res.violates_local}")
    print(f"saturates bound    {res.saturates_cirelson}")
    print(f"super-quantum      {res.super_quantum}")
    print(f"max over signs     {max_chsh(table):.6f}")
    print(f"domain             {_domain_text(table, args.tol)}")
    return EXIT_OK


def cmd_scan(args):
    m = _game(args.game)
    if not 0 < args.step <= 0.5:
        raise InputError("--step must be in (0, 0.5]")
    rows = scan(m, args.step, workers=args.workers, tol=args.tol)
    write_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def cmd_simulate(args):
    m = _game(args.game)
    _, _, table = _table_and_params(args)
    prof = StrategyProfile(args.x, args.y)
    res = simulate(table, m, SimConfig(args.runs, args.seed, prof), workers=args.workers)
    ea, eb = payoff_direct(table, m, prof)
    print(f"backend   {BACKEND}")
    print(f"runs      {res.runs}  seed {args.seed}")
    for who, mean, se, exact in (("Alice", res.mean_a, res.stderr_a, ea), ("Bob", res.mean_b, res.stderr_b, eb)):
        z = (mean - exact) / se if se > 0 else (0.0 if mean == exact else math.inf)
        print(f"{who:6s}    empirical {mean:.6f} +- {se:.6f}   analytic {exact:.6f}   z = {z:+.3f}")
    z = signaling_zscores(res)
    print("no-signaling z-scores (A|S1, A|S2, B|S1', B|S2'): " + ", ".join(f"{v:+.2f}" for v in z))
    return EXIT_OK


def cmd_reproduce(args):
    outcomes = R.run_all(scan_out=args.scan_out)
    for o in outcomes:
        print(f"[{'PASS' if o.ok else 'FAIL'}] {o.name}: {o.detail}")
    failed = sum(not o.ok for o in outcomes)
    print(f"{len(outcomes) - failed}/{len(outcomes)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def build_parser():
    parser = argparse.ArgumentParser(prog="qgames", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, game=True, table=True):
        if game:
            p.add_argument("--game", default="pd", help="pd, sh, chicken, or a JSON game file")
        if table:
            p.add_argument("--params", default="0,0,0,0,0", help="a,b,c,d,e")
            p.add_argument("--rs", default=None, help="r,s for the general table (default: embedding r=1, s=0)")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = sub.add_parser("validate", help="check a table file")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_validate)

    for name in ("analyze", "equilibria"):
        p = sub.add_parser(name, help="table, epsilons, CHSH and Nash equilibria for a parameter set")
        common(p)
        p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("chsh", help="CHSH sum and domain for a parameter set")
    common(p, game=False)
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("scan", help="grid scan of embedding parameters to CSV")
    common(p, table=False)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("simulate", help="Monte Carlo referee simulation")
    common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--runs", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reproduce", help="run the self-check suite")
    p.add_argument("--scan-out", default=None, help="where the scan check writes its CSV (default: temp dir)")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FormatError, QGameError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
