"""Monte Carlo simulation of the four-coin referee protocol.

Each run: Alice picks S1 with probability x, Bob picks S1' with probability y,
then the referee draws the joint outcome from the selected quadrant.  Runs are
split into fixed-size chunks; chunk i draws from ``default_rng(seed ^ i)`` so
the result does not depend on how many workers process the chunks.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .game import DEFAULT_TOL, JointProbabilityTable, PayoffMatrix, StrategyProfile, validate_normalization

CHUNK_RUNS = 1 << 16
UINT64_MAX = (1 << 64) - 1


@dataclass(frozen=True)
class SimConfig:
    runs: int
    seed: int
    profile: StrategyProfile

    def __post_init__(self):
        if int(self.runs) < 1:
            raise ValueError("runs must be >= 1")
        if not 0 <= int(self.seed) <= UINT64_MAX:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True, eq=False)
class SimResult:
    mean_a: float
    mean_b: float
    stderr_a: float
    stderr_b: float
    counts: np.ndarray  # (strategy pair q = 2i + j, outcome k)

    @property
    def runs(self) -> int:
        return int(self.counts.sum())

    def __eq__(self, other):
        if not isinstance(other, SimResult):
            return NotImplemented
        return (
            (self.mean_a, self.mean_b, self.stderr_a, self.stderr_b)
            == (other.mean_a, other.mean_b, other.stderr_a, other.stderr_b)
            and np.array_equal(self.counts, other.counts)
        )


def outcome_cdf(table: JointProbabilityTable) -> np.ndarray:
    q = table.quadrants
    cdf = np.cumsum(q, axis=1) / q.sum(axis=1, keepdims=True)
    cdf[:, 3] = 1.0
    return cdf


def _chunk(seed, index, n, x, y, cdf, tally):
    rng = np.random.default_rng(seed ^ index)
    u = rng.random((n, 3))
    counts = np.zeros((4, 4), dtype=np.int64)
    tally(u, x, y, cdf, counts)
    return counts


def _moments(weights: np.ndarray, payoffs: np.ndarray, n: int) -> tuple[float, float]:
    mean = float(weights @ payoffs) / n
    if n < 2:
        return mean, 0.0
    var = float(weights @ (payoffs - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def simulate(
    table: JointProbabilityTable,
    m: PayoffMatrix,
    cfg: SimConfig,
    workers: int = 1,
    tally=None,
    tol: float = DEFAULT_TOL,
) -> SimResult:
    norm = validate_normalization(table, tol)
    if not norm.ok:
        raise ValueError(f"table is not normalized (residual {norm.residual:.3g})")
    tally = tally or kernels.tally_runs
    runs, seed = int(cfg.runs), int(cfg.seed)
    x, y = cfg.profile.x, cfg.profile.y
    cdf = outcome_cdf(table)
    sizes = [min(CHUNK_RUNS, runs - start) for start in range(0, runs, CHUNK_RUNS)]
    jobs = [(seed, i, n, x, y, cdf, tally) for i, n in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _chunk(*job), jobs))
    else:
        parts = [_chunk(*job) for job in jobs]
    counts = np.sum(parts, axis=0)
    # Payoff depends only on the outcome: a_k for Alice, b_k for Bob.
    by_outcome = counts.sum(axis=0)
    mean_a, se_a = _moments(by_outcome, m.alice, runs)
    mean_b, se_b = _moments(by_outcome, m.bob, runs)
    return SimResult(mean_a, mean_b, se_a, se_b, counts)


def signaling_zscores(result: SimResult) -> np.ndarray:
    """z-scores comparing each player's P(+1 | own coin) across the other's coin choice.

    Order: Alice with S1, Alice with S2, Bob with S1', Bob with S2'.
    Entries are 0 when either split has no samples.
    """
    c = result.counts.reshape(2, 2, 4)  # (alice coin, bob coin, outcome)
    plus_alice = c[:, :, 0] + c[:, :, 1]
    plus_bob = c[:, :, 0] + c[:, :, 2]
    totals = c.sum(axis=2)
    z = []
    for plus, n in ((plus_alice, totals), (plus_bob.T, totals.T)):
        for own in (0, 1):
            n1, n2 = n[own]
            if n1 == 0 or n2 == 0:
                z.append(0.0)
                continue
            p1, p2 = plus[own][0] / n1, plus[own][1] / n2
            pooled = (plus[own][0] + plus[own][1]) / (n1 + n2)
            var = pooled * (1 - pooled) * (1 / n1 + 1 / n2)
            z.append(0.0 if var == 0 else (p1 - p2) / math.sqrt(var))
    return np.array(z)
