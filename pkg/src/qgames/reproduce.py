"""Self-check suite behind ``qgames reproduce``.

Each check returns a ``CheckOutcome``; a check that raises is reported as a
failure with the exception text, so one broken item never hides the others.
"""
from __future__ import annotations

import math
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import params as P
from .chsh import DomainClass, chsh_delta, chsh_delta_embedding, cirelson_ok, classify
from .equilibrium import (
    NEKind,
    find_equilibria,
    factorizable_equilibria,
    payoff_closed_embedding,
    payoff_closed_general,
    payoff_direct,
    response_bracket,
    sh_classical_s,
)
from .formats import read_table, write_table
from .game import (
    JointProbabilityTable,
    StrategyProfile,
    causality_residuals,
    validate_normalization,
    validate_symmetry,
)
from .kernels import embedding_batch
from .montecarlo import SimConfig, simulate
from .presets import CHICKEN, PD, SH
from .scan import scan, write_csv

SQRT2 = math.sqrt(2.0)
PI_11 = (18 - SQRT2) / 8
PI_00 = (18 + SQRT2) / 8
# Value printed in the literature for the Cereceda point; it is the (0, 0) payoff.
QUOTED_PAYOFF = 2.42678


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    ok: bool
    detail: str = ""


def _same_profiles(found, expected, tol):
    found = sorted(found)
    expected = sorted(expected)
    return len(found) == len(expected) and all(
        abs(fx - ex) <= tol and abs(fy - ey) <= tol for (fx, fy), (ex, ey) in zip(found, expected)
    )


def check_classical_embedding():
    table = P.build_embedding(P.ZERO)
    expected = np.zeros(16)
    expected[[0, 5, 10, 15]] = 1.0
    eqs = find_equilibria(PD, P.vtriple_from_table(table), (table.entry(13), table.entry(14)))
    ok = (
        np.array_equal(table.p, expected)
        and eqs.profiles() == [(0.0, 0.0)]
        and abs(eqs.equilibria[0].payoff_a - 1) <= 1e-12
        and abs(eqs.equilibria[0].payoff_b - 1) <= 1e-12
    )
    return ok, f"NE {eqs.profiles()}"


def check_cereceda_pd():
    eps = P.epsilons(P.CERECEDA)
    table = P.build_embedding(P.CERECEDA)
    vt = P.vtriple_from_table(table)
    eqs = find_equilibria(PD, vt, (table.entry(13), table.entry(14)))
    weak11 = any(ne.xy == (1.0, 1.0) and ne.kind is NEKind.WEAK for ne in eqs)
    p11 = payoff_direct(table, PD, StrategyProfile(1, 1))
    p00 = payoff_direct(table, PD, StrategyProfile(0, 0))
    ok = (
        abs(1 - eps.e3 + eps.e1) <= 1e-12
        and abs(1 + eps.e1 - eps.e2) <= 1e-12
        and weak11
        and abs(chsh_delta(table) - 2 * SQRT2) <= 1e-12
        and all(abs(v - PI_11) <= 1e-12 for v in p11)
        and all(abs(v - PI_00) <= 1e-12 for v in p00)
        and min(p11 + p00) > 1
        and round(PI_00, 5) == QUOTED_PAYOFF
    )
    detail = (
        f"Pi(1,1)={p11[0]:.6f} Pi(0,0)={p00[0]:.6f}; quoted {QUOTED_PAYOFF} is Pi(0,0), not Pi(1,1)"
    )
    return ok, detail


def check_chsh_examples():
    box = P.NonFactParams(0.5, 0, 0, 0.5, 0.5)
    d_box = chsh_delta_embedding(box)
    cls = classify(P.build_embedding(box))
    d_zero = chsh_delta_embedding(P.ZERO)
    ok = d_box == 4.0 and cls.domain is DomainClass.SUPER_QUANTUM and not cirelson_ok(box) and d_zero == -2.0
    return ok, f"delta(box)={d_box}, class={cls}, delta(0)={d_zero}"


def _embedding_grid(step):
    vals = np.arange(0, 1 + 1e-9, step)
    pts = np.stack([g.ravel() for g in np.meshgrid(*[vals] * 5, indexing="ij")], axis=1)
    _, valid = embedding_batch(pts)
    return [P.NonFactParams(*row) for row in pts[valid]]


def _general_grid():
    vals = np.arange(-4, 5) / 4
    pts = np.stack([g.ravel() for g in np.meshgrid(*[vals] * 5, indexing="ij")], axis=1)
    out = []
    for r in (0.0, 0.5, 1.0):
        for s in (0.0, 0.5, 1.0):
            raw = P.nonfact_general_entries(r, s, *pts.T)
            ok = np.all((raw >= -P.BUILD_TOL) & (raw <= 1 + P.BUILD_TOL), axis=0)
            out.extend((P.FactorParams(r, s), P.NonFactParams(*row)) for row in pts[ok])
    return out


def check_oracle_equivalence():
    xs = np.arange(5) / 4
    worst_emb = worst_gen = 0.0
    for np_ in _embedding_grid(0.25):
        table = P.build_embedding(np_)
        for x in xs:
            for y in xs:
                prof = StrategyProfile(x, y)
                d = np.subtract(payoff_closed_embedding(PD, np_, prof), payoff_direct(table, PD, prof))
                worst_emb = max(worst_emb, float(np.abs(d).max()))
    for fp, np_ in _general_grid():
        table = P.build_nonfact_general(fp, np_)
        vt = P.vtriple_from_table(table)
        for x in xs:
            for y in xs:
                prof = StrategyProfile(x, y)
                closed = payoff_closed_general(PD, vt, table.entry(13), table.entry(14), prof)
                d = np.subtract(closed, payoff_direct(table, PD, prof))
                worst_gen = max(worst_gen, float(np.abs(d).max()))
    return worst_emb <= 1e-12 and worst_gen <= 1e-12, f"max |diff| embedding {worst_emb:.2e}, general {worst_gen:.2e}"


def check_factorizable_classics():
    s_sh = sh_classical_s(SH, 5 / 6)
    sh = factorizable_equilibria(SH, P.FactorParams(5 / 6, s_sh))
    ok_sh = abs(s_sh - 1 / 3) <= 1e-12 and _same_profiles(sh.profiles(), [(0, 0), (2 / 3, 2 / 3), (1, 1)], 1e-9)
    s_ch = sh_classical_s(CHICKEN, 0.75)
    ch = factorizable_equilibria(CHICKEN, P.FactorParams(0.75, s_ch))
    ok_ch = _same_profiles(ch.profiles(), [(1, 0), (0.5, 0.5), (0, 1)], 1e-9)
    grid = np.arange(21) / 20
    ok_pd = all(
        (0.0, 0.0) in factorizable_equilibria(PD, P.FactorParams(r, s)).profiles()
        for r in grid
        for s in grid
        if r > s
    )
    return ok_sh and ok_ch and ok_pd, f"SH {sh.profiles()}, Chicken {ch.profiles()}, PD r>s ok={ok_pd}"


SH_WITNESS = P.NonFactParams(0, 0.5, 0, 0.5, 0.2)
SH_FLAT = P.NonFactParams(0, 0.5, 0, 0.5, 0)


def check_sh_nonclassical():
    witness_table = P.build_embedding(SH_WITNESS)
    strict = find_equilibria(
        SH, P.vtriple_closed_form(P.CLASSICAL, SH_WITNESS), (witness_table.entry(13), witness_table.entry(14))
    )
    ok_strict = not strict.continuum and _same_profiles(strict.profiles(), [(1, 0), (0, 1), (0.5, 0.5)], 1e-9)
    flat_table = P.build_embedding(SH_FLAT)
    flat = find_equilibria(SH, P.vtriple_from_table(flat_table), (flat_table.entry(13), flat_table.entry(14)))
    xs = np.arange(5) / 4
    payoffs = [payoff_direct(flat_table, SH, StrategyProfile(x, y)) for x in xs for y in xs]
    ok_flat = flat.continuum and all(abs(v - 2) <= 1e-12 for pair in payoffs for v in pair)
    return ok_strict and ok_flat, f"witness NE {strict.profiles()}, flat continuum={flat.continuum}"


def _corners(profiles):
    return sorted(p for p in profiles if p[0] in (0.0, 1.0) and p[1] in (0.0, 1.0))


def check_chicken_inversion():
    vt = P.vtriple_closed_form(P.CLASSICAL, SH_WITNESS)
    flips = all(
        response_bracket(SH, vt, t) * response_bracket(CHICKEN, vt, t) < 0 for t in (0.0, 1.0)
    )
    sh_eq = find_equilibria(SH, vt).profiles()
    ch_eq = find_equilibria(CHICKEN, vt).profiles()
    ok = flips and _corners(sh_eq) == [(0, 1), (1, 0)] and _corners(ch_eq) == [(0, 0), (1, 1)]
    return ok, f"SH corners {_corners(sh_eq)}, Chicken corners {_corners(ch_eq)}"


def sample_valid_embedding(n, rng):
    """Rejection-sample ``n`` parameter points with a valid embedding table."""
    chunks, have = [], 0
    while have < n:
        cand = rng.random((8 * n, 5))
        _, valid = embedding_batch(cand)
        chunks.append(cand[valid])
        have += int(valid.sum())
    return np.concatenate(chunks)[:n]


def check_constraint_invariants(n=10_000, seed=20240601):
    pts = sample_valid_embedding(n, np.random.default_rng(seed))
    worst = 0.0
    deltas = []
    for row in pts:
        table = P.build_embedding(P.NonFactParams(*row))
        worst = max(
            worst,
            validate_normalization(table).residual,
            validate_symmetry(table).residual,
            float(causality_residuals(table).max()),
        )
        deltas.append(chsh_delta(table))
    deltas = np.array(deltas)
    ok = len(pts) == n and worst <= 1e-12 and deltas.min() >= -4 and deltas.max() <= 4
    return ok, f"{len(pts)} points, worst residual {worst:.2e}, delta in [{deltas.min():.3f}, {deltas.max():.3f}]"


def mc_scenarios():
    """(label, table, matrix, profile, analytic Alice/Bob payoff, runs)."""
    return [
        ("classical PD (0,0)", P.build_embedding(P.ZERO), PD, StrategyProfile(0, 0), (1.0, 1.0)),
        ("Cereceda PD (1,1)", P.build_embedding(P.CERECEDA), PD, StrategyProfile(1, 1), (PI_11, PI_11)),
        ("flat SH (0.3,0.8)", P.build_embedding(SH_FLAT), SH, StrategyProfile(0.3, 0.8), (2.0, 2.0)),
    ]


def check_monte_carlo(runs=1_000_000, seed=12345):
    lines, ok = [], True
    for label, table, m, prof, (ea, eb) in mc_scenarios():
        cfg = SimConfig(runs, seed, prof)
        r1 = simulate(table, m, cfg)
        r2 = simulate(table, m, cfg)
        r4 = simulate(table, m, cfg, workers=4)
        za = abs(r1.mean_a - ea) / r1.stderr_a if r1.stderr_a else (0.0 if r1.mean_a == ea else math.inf)
        zb = abs(r1.mean_b - eb) / r1.stderr_b if r1.stderr_b else (0.0 if r1.mean_b == eb else math.inf)
        item = za <= 4 and zb <= 4 and r1 == r2 and r1 == r4
        ok &= item
        lines.append(f"{label}: z=({za:.2f},{zb:.2f}) reproducible={r1 == r2 and r1 == r4}")
    return ok, "; ".join(lines)


def round_trip_worst(eps_fn=None):
    """Largest |closed-form v - table v| over a grid of (r, s, a..e)."""
    fps = [P.FactorParams(r, s) for r in (0.0, 0.5, 1.0) for s in (0.0, 0.5, 1.0)]
    vals = np.arange(-4, 5) / 8
    grid = np.stack([g.ravel() for g in np.meshgrid(*[vals] * 5, indexing="ij")], axis=1)
    offsets = [P.NonFactParams(*row) for row in grid[::7]]
    original = P.epsilons
    if eps_fn is not None:
        P.epsilons = eps_fn
    try:
        worst = 0.0
        for fp in fps:
            for np_ in offsets:
                raw = P.nonfact_general_entries(fp.r, fp.s, *np_)
                if np.any(raw < -P.BUILD_TOL) or np.any(raw > 1 + P.BUILD_TOL):
                    continue
                closed = P.vtriple_closed_form(fp, np_).as_v()
                direct = P.vtriple_from_table(JointProbabilityTable(raw)).as_v()
                worst = max(worst, max(abs(u - v) for u, v in zip(closed, direct)))
        return worst
    finally:
        P.epsilons = original


def check_round_trip():
    worst = round_trip_worst()
    return worst <= 1e-12, f"max |closed - table| = {worst:.2e}"


def check_mutation_detected():
    base = P.epsilons

    def perturbed(np_):
        e1, e2, e3 = base(np_)
        return P.EpsilonTriple(e1, e2, e3 + 0.01)

    worst = round_trip_worst(perturbed)
    return worst > 1e-12, f"perturbed e3 by 0.01 -> round-trip error {worst:.2e}"


def check_scan(out=None):
    if out is None:
        tmp = tempfile.TemporaryDirectory()
        out_path = Path(tmp.name) / "scan.csv"
    else:
        tmp, out_path = None, Path(out)
    try:
        rows = scan(PD, 0.5)
        write_csv(rows, out_path)
        by_params = {r.params: r for r in rows}
        zero, box = by_params[(0.0,) * 5], by_params[(0.5, 0.0, 0.0, 0.5, 0.5)]
        ok = (zero.domain == "Factorizable" and zero.delta == -2.0 and box.domain == "SuperQuantum" and box.delta == 4.0)
        with tempfile.TemporaryDirectory() as d:
            path = Path(d) / "row.json"
            for r in rows:
                write_table(path, P.build_embedding(P.NonFactParams(*r.params)))
                t = read_table(path)
                ok &= validate_normalization(t).ok and validate_symmetry(t).ok
                ok &= float(causality_residuals(t).max()) <= 1e-9
        return ok, f"{len(rows)} rows written to {out_path}"
    finally:
        if tmp is not None:
            tmp.cleanup()


CHECKS = [
    ("1 classical embedding recovery", check_classical_embedding),
    ("2 Cereceda PD", check_cereceda_pd),
    ("3 CHSH examples", check_chsh_examples),
    ("4 closed-form/direct payoff equivalence", check_oracle_equivalence),
    ("5 factorizable classics", check_factorizable_classics),
    ("6 SH non-classical NE", check_sh_nonclassical),
    ("7 Chicken inversion", check_chicken_inversion),
    ("8 constraint invariants", check_constraint_invariants),
    ("9 Monte Carlo", check_monte_carlo),
    ("10a v-triple round trip", check_round_trip),
    ("10b mutation detected", check_mutation_detected),
]


def run_all(scan_out=None, checks=None) -> list[CheckOutcome]:
    outcomes = []
    items = list(checks or CHECKS) + [("scan output", lambda: check_scan(scan_out))]
    for name, fn in items:
        try:
            ok, detail = fn()
        except Exception as exc:  # noqa: BLE001 - every failure is reported, never raised
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        outcomes.append(CheckOutcome(name, bool(ok), detail))
    return outcomes
