"""Grid scan over the classical-embedding parameters (a, b, c, d, e)."""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .chsh import chsh_delta, classify
from .equilibrium import find_equilibria
from .formats import fmt
from .game import DEFAULT_TOL, JointProbabilityTable, PayoffMatrix
from .kernels import embedding_batch
from .params import VTriple

COLUMNS = (
    "a", "b", "c", "d", "e", "eps1", "eps2", "eps3",
    "delta", "domain", "ne_count", "ne_list", "payoff_list",
)


@dataclass(frozen=True)
class ScanRow:
    params: tuple[float, float, float, float, float]
    eps: tuple[float, float, float]
    delta: float
    domain: str
    ne: tuple[tuple[float, float, str], ...]
    payoffs: tuple[tuple[float, float], ...]

    def as_record(self) -> list[str]:
        return [
            *(fmt(v) for v in self.params),
            *(fmt(v) for v in self.eps),
            fmt(self.delta),
            self.domain,
            str(len(self.ne)),
            ";".join(f"{fmt(x)}:{fmt(y)}:{kind}" for x, y, kind in self.ne),
            ";".join(f"{fmt(pa)}:{fmt(pb)}" for pa, pb in self.payoffs),
        ]


def grid_values(step: float) -> list[float]:
    if not 0 < step <= 0.5:
        raise ValueError(f"grid step must be in (0, 0.5], got {step!r}")
    n = int(math.floor(1.0 / step + 1e-9))
    return [round(k * step, 12) for k in range(n + 1)]


def grid_points(step: float) -> np.ndarray:
    vals = np.array(grid_values(step))
    # 'ij' indexing with C-order reshape gives lexicographic order in (a, b, c, d, e)
    mesh = np.meshgrid(vals, vals, vals, vals, vals, indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def valid_points(step: float) -> tuple[np.ndarray, np.ndarray]:
    """Grid points (lexicographic order) whose embedding table is valid, with their tables."""
    pts = grid_points(step)
    tables, valid = embedding_batch(pts)
    return pts[valid], tables[valid]


def scan_row(params, table_p, m: PayoffMatrix, tol: float = DEFAULT_TOL) -> ScanRow:
    a, b, c, d, e = (float(v) for v in params)
    table = JointProbabilityTable(table_p)
    p = table.p
    vt = VTriple(u=float(p[0] - p[4]), v=float(p[1] - p[13]), w=float(p[12] - p[4]))
    eqs = find_equilibria(m, vt, (float(p[12]), float(p[13])), tol)
    return ScanRow(
        params=(a, b, c, d, e),
        eps=(e - c, a + b + d + e, a + 2 * b - c + 2 * e),
        delta=chsh_delta(table),
        domain=classify(table, tol).domain.value,
        ne=tuple((ne.profile.x, ne.profile.y, ne.kind.value) for ne in eqs),
        payoffs=tuple((ne.payoff_a, ne.payoff_b) for ne in eqs),
    )


def _rows_for(args):
    pts, tables, m, tol = args
    return [scan_row(pt, tb, m, tol) for pt, tb in zip(pts, tables)]


def scan(m: PayoffMatrix, step: float, workers: int = 1, tol: float = DEFAULT_TOL) -> list[ScanRow]:
    pts, tables = valid_points(step)
    if workers <= 1 or len(pts) < 2:
        return _rows_for((pts, tables, m, tol))
    bounds = np.linspace(0, len(pts), 4 * workers + 1).astype(int)
    jobs = [(pts[lo:hi], tables[lo:hi], m, tol) for lo, hi in zip(bounds[:-1], bounds[1:])]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map() yields in submission order, which keeps row order deterministic
        return [row for part in pool.map(_rows_for, jobs) for row in part]


def write_csv(rows, out) -> None:
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow(row.as_record())
