import itertools

import numpy as np
import pytest

from qgames import (
    CLASSICAL,
    ZERO,
    EpsilonTriple,
    FactorParams,
    GameName,
    NEKind,
    NonFactParams,
    PayoffMatrix,
    StrategyProfile,
    VTriple,
    build_embedding,
    build_nonfact_general,
    classify_game,
    embedded_mixed_ne,
    factorizable_equilibria,
    find_equilibria,
    payoff_closed_embedding,
    payoff_closed_general,
    payoff_direct,
    quadrant_payoffs,
    response_bracket,
    sh_classical_s,
    vtriple_closed_form,
    vtriple_from_table,
)
from qgames.errors import DegenerateDenominatorError, PreconditionError
from qgames.kernels import embedding_batch
from qgames.params import nonfact_general_entries
from qgames.presets import CHICKEN, PD, SH

from conftest import SQRT2, grid

PRESET_MATRICES = [PD, SH, CHICKEN]


def embedding_points(step):
    vals = np.array(grid(step))
    pts = np.stack([g.ravel() for g in np.meshgrid(*[vals] * 5, indexing="ij")], axis=1)
    return [NonFactParams(*row) for row in pts[embedding_batch(pts)[1]]]


def bimatrix_equilibria(A, B, tol=1e-9):
    """Reference NE solver for a 2x2 bimatrix game (rows: Alice S1/S2, cols: Bob S1'/S2').

    Pure profiles by best-response checks, the mixed one by the indifference
    conditions.  Returns None for degenerate games where a player can be
    indifferent between pure strategies (then the set can be a continuum).
    """
    out = []
    for i, j in itertools.product((0, 1), repeat=2):
        if A[i, j] >= A[1 - i, j] - tol and B[i, j] >= B[i, 1 - j] - tol:
            out.append((1.0 - i, 1.0 - j))
    # Bob's y makes Alice indifferent, Alice's x makes Bob indifferent.
    da = A[0, 0] - A[0, 1] - A[1, 0] + A[1, 1]
    db = B[0, 0] - B[0, 1] - B[1, 0] + B[1, 1]
    if abs(da) <= tol or abs(db) <= tol:
        return None
    y = (A[1, 1] - A[0, 1]) / da
    x = (B[1, 1] - B[1, 0]) / db
    if tol < x < 1 - tol and tol < y < 1 - tol:
        out.append((x, y))
    elif -tol <= x <= 1 + tol and -tol <= y <= 1 + tol:
        return None  # mixed point lands on the boundary: degenerate
    return sorted(out)


def matched(found, expected, tol=1e-9):
    found, expected = sorted(found), sorted(expected)
    return len(found) == len(expected) and all(
        abs(a - c) <= tol and abs(b - d) <= tol for (a, b), (c, d) in zip(found, expected)
    )


def eq_for_table(m, table, tol=1e-9):
    return find_equilibria(m, vtriple_from_table(table), (table.entry(13), table.entry(14)), tol)


class TestPayoffDirect:
    def test_classical_pd(self, deterministic):
        assert payoff_direct(deterministic, PD, StrategyProfile(0, 0)) == (1, 1)

    def test_cereceda(self, cereceda_table):
        k, j = (2 + SQRT2) / 8, (2 - SQRT2) / 8
        at11 = 3 * k + 0 * j + 5 * j + 1 * k
        at00 = 3 * j + 0 * k + 5 * k + 1 * j
        pa, pb = payoff_direct(cereceda_table, PD, StrategyProfile(1, 1))
        assert pa == pytest.approx(at11, abs=1e-12) and pb == pytest.approx(at11, abs=1e-12)
        assert pa == pytest.approx((18 - SQRT2) / 8, abs=1e-12) == pytest.approx(2.073223, abs=1e-6)
        pa, pb = payoff_direct(cereceda_table, PD, StrategyProfile(0, 0))
        assert pa == pytest.approx((18 + SQRT2) / 8, abs=1e-12) and pb == pytest.approx(at00, abs=1e-12)

    def test_bilinear(self, cereceda_table):
        # Payoff at (x, y) is the weighted average of the four pure-pair payoffs.
        x, y = 0.3, 0.6
        qp = quadrant_payoffs(cereceda_table, SH)[:, :, 0]
        expected = x * y * qp[0, 0] + x * (1 - y) * qp[0, 1] + (1 - x) * y * qp[1, 0] + (1 - x) * (1 - y) * qp[1, 1]
        assert payoff_direct(cereceda_table, SH, StrategyProfile(x, y))[0] == pytest.approx(expected, abs=1e-14)


class TestClosedForms:
    def test_general_random_tables(self):
        rng = np.random.default_rng(7)
        done = 0
        while done < 100:
            r, s = rng.random(2)
            offs = rng.uniform(-0.1, 0.1, 5)
            raw = nonfact_general_entries(r, s, *offs)
            if np.any(raw < 0) or np.any(raw > 1):
                continue
            table = build_nonfact_general(FactorParams(r, s), NonFactParams(*offs))
            prof = StrategyProfile(*rng.random(2))
            m = PayoffMatrix(*rng.uniform(-5, 5, 4))
            closed = payoff_closed_general(m, vtriple_from_table(table), table.entry(13), table.entry(14), prof)
            assert np.allclose(closed, payoff_direct(table, m, prof), atol=1e-12, rtol=0)
            done += 1

    def test_general_classical_limit(self):
        vt = VTriple.from_v(0, 1, 1)
        for x, y in itertools.product(grid(0.25), repeat=2):
            pa, _ = payoff_closed_general(PD, vt, 0, 0, StrategyProfile(x, y))
            assert pa == pytest.approx(1 + x * (0 - 1) + y * (5 - 1) + x * y * (3 - 0 - 5 + 1), abs=1e-14)

    def test_general_zero_vtriple_is_constant(self):
        vt = VTriple(0, 0, 0)
        vals = {payoff_closed_general(SH, vt, 0.2, 0.3, StrategyProfile(x, y)) for x in (0, 0.4, 1) for y in (0, 0.7, 1)}
        assert len(vals) == 1

    def test_embedding_examples(self, cereceda):
        assert payoff_closed_embedding(PD, ZERO, StrategyProfile(1, 1)) == (3, 3)
        pa, pb = payoff_closed_embedding(PD, cereceda, StrategyProfile(1, 1))
        assert pa == pytest.approx((18 - SQRT2) / 8, abs=1e-12) and pb == pytest.approx(pa, abs=1e-15)
        flat = NonFactParams(0, 0.5, 0, 0.5, 0)
        for x, y in itertools.product(grid(0.1), repeat=2):
            assert payoff_closed_embedding(SH, flat, StrategyProfile(x, y)) == pytest.approx((2, 2), abs=1e-12)

    @pytest.mark.parametrize("m", PRESET_MATRICES, ids=["pd", "sh", "chicken"])
    def test_oracle_equivalence_grid(self, m):
        profiles = [StrategyProfile(x, y) for x, y in itertools.product(grid(0.05), repeat=2)]
        worst = 0.0
        for np_ in embedding_points(0.25)[::3]:
            table = build_embedding(np_)
            vt = vtriple_closed_form(CLASSICAL, np_)
            for prof in profiles:
                direct = payoff_direct(table, m, prof)
                worst = max(
                    worst,
                    *np.abs(np.subtract(payoff_closed_embedding(m, np_, prof), direct)),
                    *np.abs(np.subtract(payoff_closed_general(m, vt, np_.c, np_.d, prof), direct)),
                )
        assert worst <= 1e-12


class TestBracket:
    def test_pd_classical(self):
        vt = VTriple.from_v(0, 1, 1)
        for y in grid(0.1):
            assert response_bracket(PD, vt, y) == pytest.approx(-y - 1, abs=1e-15)

    def test_pd_cereceda(self):
        vt = VTriple.from_v(*(-SQRT2 / 4,) * 3)
        for y in grid(0.1):
            assert response_bracket(PD, vt, y) == pytest.approx(SQRT2 / 4 * (y - 1), abs=1e-15)

    def test_sh_classical(self):
        vt = VTriple.from_v(0, 1, 1)
        assert response_bracket(SH, vt, 2 / 3) == pytest.approx(0, abs=1e-15)
        assert response_bracket(SH, vt, 0.5) == pytest.approx(3 * 0.5 - 2)

    def test_matches_deviation_gain(self, cereceda_table):
        # Pi_A(x*, y) - Pi_A(x, y) = (x* - x) B(y)
        vt = vtriple_from_table(cereceda_table)
        for y in (0.0, 0.3, 1.0):
            gain = payoff_direct(cereceda_table, SH, StrategyProfile(1, y))[0] - payoff_direct(
                cereceda_table, SH, StrategyProfile(0, y)
            )[0]
            assert gain == pytest.approx(response_bracket(SH, vt, y), abs=1e-12)


class TestFindEquilibria:
    def test_pd_classical(self):
        eqs = find_equilibria(PD, VTriple.from_v(0, 1, 1))
        assert eqs.profiles() == [(0, 0)]
        ne = eqs.equilibria[0]
        assert ne.kind is NEKind.STRICT and (ne.payoff_a, ne.payoff_b) == (1, 1)

    def test_sh_classical(self):
        eqs = find_equilibria(SH, VTriple.from_v(0, 1, 1))
        assert matched(eqs.profiles(), [(0, 0), (2 / 3, 2 / 3), (1, 1)])
        kinds = {ne.xy: ne.kind for ne in eqs}
        assert kinds[(0, 0)] is NEKind.STRICT and kinds[(1, 1)] is NEKind.STRICT

    def test_pd_cereceda(self, cereceda_table):
        eqs = eq_for_table(PD, cereceda_table)
        kinds = {ne.xy: ne.kind for ne in eqs}
        assert kinds == {(0.0, 0.0): NEKind.STRICT, (1.0, 1.0): NEKind.WEAK}
        assert not eqs.notes

    def test_sh_witness(self):
        table = build_embedding(NonFactParams(0, 0.5, 0, 0.5, 0.2))
        eqs = eq_for_table(SH, table)
        assert not eqs.continuum
        assert matched(eqs.profiles(), [(1, 0), (0, 1), (0.5, 0.5)])
        assert {ne.xy: ne.kind for ne in eqs}[(1.0, 0.0)] is NEKind.STRICT

    def test_continuum(self):
        table = build_embedding(NonFactParams(0, 0.5, 0, 0.5, 0))
        eqs = eq_for_table(SH, table)
        assert eqs.continuum and eqs.description
        assert len(eqs) == 4 and all(ne.kind is NEKind.WEAK for ne in eqs)
        assert all(ne.payoff_a == pytest.approx(2, abs=1e-12) for ne in eqs)

    def test_root_on_corner_reports_edge(self):
        # B(t) = 0.3 (1 - t): vanishes at 1 and is positive below
        vt = VTriple.from_v(-0.3, 0.0, -0.1)
        assert response_bracket(SH, vt, 0) == pytest.approx(0.3)
        eqs = find_equilibria(SH, vt)
        assert sorted(eqs.profiles()) == [(0, 1), (1, 0), (1, 1)]
        assert all(ne.kind is NEKind.WEAK for ne in eqs)
        assert eqs.notes
        # spot-check one edge point with the direct deviation test
        gain_a = [(0.4 - x) * response_bracket(SH, vt, 1.0) for x in (0, 1)]
        gain_b = [(1 - y) * response_bracket(SH, vt, 0.4) for y in (0, 0.5)]
        assert min(gain_a) >= -1e-12 and min(gain_b) >= -1e-12

    @pytest.mark.parametrize("m", PRESET_MATRICES, ids=["pd", "sh", "chicken"])
    def test_classical_limit_matches_bimatrix(self, m):
        A = np.array([[m.a1, m.a2], [m.a3, m.a4]])
        ref = bimatrix_equilibria(A, A.T)
        assert matched(find_equilibria(m, VTriple.from_v(0, 1, 1)).profiles(), ref)

    def test_zero_epsilons_reproduce_factorizable_classical(self):
        for m in PRESET_MATRICES:
            a = find_equilibria(m, vtriple_closed_form(CLASSICAL, ZERO))
            b = factorizable_equilibria(m, CLASSICAL)
            assert a == b


def _deviation_margins(table, m, ne, tstar_extra):
    devs = set(grid(0.25)) | {min(1.0, max(0.0, t)) for t in tstar_extra}
    pa, pb = payoff_direct(table, m, ne.profile)
    worst = np.inf
    for d in devs:
        worst = min(
            worst,
            pa - payoff_direct(table, m, StrategyProfile(d, ne.profile.y))[0],
            pb - payoff_direct(table, m, StrategyProfile(ne.profile.x, d))[1],
        )
    return worst


@pytest.mark.parametrize("m", PRESET_MATRICES, ids=["pd", "sh", "chicken"])
def test_equilibria_satisfy_ne_inequalities(m):
    tol = 1e-9
    for np_ in embedding_points(0.25):
        table = build_embedding(np_)
        eqs = eq_for_table(m, table, tol)
        for ne in eqs:
            extra = [ne.profile.x - 0.01, ne.profile.x + 0.01]
            assert _deviation_margins(table, m, ne, extra) >= -tol, (np_, ne)


@pytest.mark.parametrize("m", PRESET_MATRICES, ids=["pd", "sh", "chicken"])
def test_best_response_by_direct_maximization(m):
    tol = 1e-9
    xs = np.arange(101) / 100
    for np_ in embedding_points(0.25)[::4]:
        table = build_embedding(np_)
        for ne in eq_for_table(m, table, tol):
            best_a = max(payoff_direct(table, m, StrategyProfile(x, ne.profile.y))[0] for x in xs)
            best_b = max(payoff_direct(table, m, StrategyProfile(ne.profile.x, y))[1] for y in xs)
            pa, pb = payoff_direct(table, m, ne.profile)
            assert pa >= best_a - tol and pb >= best_b - tol


@pytest.mark.parametrize("m", PRESET_MATRICES, ids=["pd", "sh", "chicken"])
def test_enumeration_complete_against_bimatrix_oracle(m):
    compared = 0
    for np_ in embedding_points(0.25):
        table = build_embedding(np_)
        qp = quadrant_payoffs(table, m)
        ref = bimatrix_equilibria(qp[:, :, 0], qp[:, :, 1])
        if ref is None:
            continue
        compared += 1
        eqs = eq_for_table(m, table)
        assert not eqs.continuum
        assert matched(eqs.profiles(), ref), (np_, eqs.profiles(), ref)
    assert compared > 50


class TestFactorizable:
    def test_pd_needs_r_gt_s(self):
        for r, s in itertools.product(grid(0.05), repeat=2):
            if r > s:
                assert (0.0, 0.0) in factorizable_equilibria(PD, FactorParams(r, s)).profiles()

    def test_sh_three_ne(self):
        for r in (5 / 6, 0.9, 1.0, 0.7):
            s = sh_classical_s(SH, r)
            eqs = factorizable_equilibria(SH, FactorParams(r, s))
            assert matched(eqs.profiles(), [(0, 0), (2 / 3, 2 / 3), (1, 1)])

    def test_chicken(self):
        s = sh_classical_s(CHICKEN, 0.75)
        assert s == pytest.approx(0.25)
        eqs = factorizable_equilibria(CHICKEN, FactorParams(0.75, s))
        assert matched(eqs.profiles(), [(1, 0), (0.5, 0.5), (0, 1)])


class TestShClassicalS:
    def test_values(self):
        assert sh_classical_s(SH, 1.0) == 0
        assert sh_classical_s(SH, 5 / 6) == pytest.approx(1 / 3, abs=1e-15)

    def test_pd_rejected(self):
        with pytest.raises(PreconditionError):
            sh_classical_s(PD, 0.9)

    def test_r_below_bound(self):
        with pytest.raises(PreconditionError):
            sh_classical_s(SH, 0.5)


class TestEmbeddedMixed:
    def test_classical(self):
        assert embedded_mixed_ne(SH, EpsilonTriple(0, 0, 0)) == pytest.approx(2 / 3)

    def test_witness(self):
        assert embedded_mixed_ne(SH, EpsilonTriple(0.2, 1.2, 1.4)) == pytest.approx(0.5, abs=1e-12)

    def test_degenerate(self):
        with pytest.raises(DegenerateDenominatorError):
            embedded_mixed_ne(SH, EpsilonTriple(0, 1, 1))
        with pytest.raises(DegenerateDenominatorError):
            embedded_mixed_ne(PayoffMatrix(1, 1, 2, 2), EpsilonTriple(0, 0, 0))

    def test_agrees_with_bracket_root(self):
        # e3 != 0 and e1 != 0 so the division must cover both terms
        eps = EpsilonTriple(0.1, 0.5, 0.5)
        y = embedded_mixed_ne(SH, eps)
        assert y == pytest.approx(0.6, abs=1e-12)
        vt = VTriple.from_v(-eps.e1, 1 - eps.e2, 1 - eps.e3)
        assert response_bracket(SH, vt, y) == pytest.approx(0, abs=1e-12)
        interior = [p for p in find_equilibria(SH, vt).profiles() if 0 < p[0] < 1]
        assert interior == [pytest.approx((0.6, 0.6))]

    def test_outside_unit_interval(self):
        assert embedded_mixed_ne(PD, EpsilonTriple(0, 0, 0)) is None


class TestClassifyGame:
    def test_pd(self):
        gc = classify_game(PD)
        assert gc.name is GameName.PRISONERS_DILEMMA and gc.abs_d3_le_d2

    def test_sh(self):
        gc = classify_game(SH)
        assert gc.name is GameName.STAG_HUNT and (gc.d1, gc.d2, gc.d3) == (-1, 2, 3)

    def test_chicken(self):
        gc = classify_game(CHICKEN)
        assert gc.name is GameName.CHICKEN and (gc.alpha, gc.beta) == (1, 1)

    def test_other(self):
        assert classify_game(PayoffMatrix(1, 1, 1, 1)).name is GameName.OTHER
