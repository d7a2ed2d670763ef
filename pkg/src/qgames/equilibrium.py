"""Expected payoffs and Nash-equilibrium enumeration for the symmetric game.

Everything hinges on the response bracket

    B(t) = t * D3 * v3 + D1 * v1 - D2 * v2

Alice's deviation gain at (x*, y*) is (x* - x) * B(y*) and Bob's is
(y* - y) * B(x*), so her best reply to y is x = 1 when B(y) > 0, x = 0 when
B(y) < 0 and anything when B(y) = 0.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDenominatorError, PreconditionError
from .game import DEFAULT_TOL, JointProbabilityTable, PayoffMatrix, StrategyProfile, quadrant_payoffs
from .params import EpsilonTriple, FactorParams, NonFactParams, VTriple, epsilons


class NEKind(str, enum.Enum):
    STRICT = "strict"
    WEAK = "weak"


@dataclass(frozen=True)
class NashEquilibrium:
    profile: StrategyProfile
    payoff_a: float
    payoff_b: float
    kind: NEKind

    @property
    def xy(self) -> tuple[float, float]:
        return (self.profile.x, self.profile.y)


@dataclass(frozen=True)
class EquilibriumSet:
    equilibria: tuple[NashEquilibrium, ...]
    continuum: bool = False
    description: str = ""
    # Edge segments of equilibria that appear when the bracket root sits on a corner.
    notes: tuple[str, ...] = field(default=())

    def profiles(self) -> list[tuple[float, float]]:
        return [ne.xy for ne in self.equilibria]

    def __len__(self):
        return len(self.equilibria)

    def __iter__(self):
        return iter(self.equilibria)


class GameName(str, enum.Enum):
    PRISONERS_DILEMMA = "PrisonersDilemma"
    STAG_HUNT = "StagHunt"
    CHICKEN = "Chicken"
    OTHER = "Other"


@dataclass(frozen=True)
class GameClass:
    name: GameName
    d1: float
    d2: float
    d3: float
    conditions: tuple[str, ...] = ()
    # PD only: whether |D3| <= D2
    abs_d3_le_d2: bool | None = None

    @property
    def alpha(self) -> float:
        return -self.d2

    @property
    def beta(self) -> float:
        return self.d1


def classify_game(m: PayoffMatrix) -> GameClass:
    dt = m.deltas
    d1, d2, d3 = dt.d1, dt.d2, dt.d3
    if d1 > 0 and d2 > 0:
        return GameClass(GameName.PRISONERS_DILEMMA, d1, d2, d3, ("D1>0", "D2>0"), abs(d3) <= d2)
    if d3 > d2 > 0 and d1 + d2 > 0 and d3 > d1 + d2:
        return GameClass(GameName.STAG_HUNT, d1, d2, d3, ("D3>D2>0", "D1+D2>0", "D3>D1+D2"))
    if d3 < 0 and d2 < 0 and d1 > 0:
        return GameClass(GameName.CHICKEN, d1, d2, d3, ("D3<0", "D2<0", "D1>0"))
    return GameClass(GameName.OTHER, d1, d2, d3)


def payoff_direct(table: JointProbabilityTable, m: PayoffMatrix, s: StrategyProfile) -> tuple[float, float]:
    qp = quadrant_payoffs(table, m)
    xv = np.array([s.x, 1 - s.x])
    yv = np.array([s.y, 1 - s.y])
    return float(xv @ qp[:, :, 0] @ yv), float(xv @ qp[:, :, 1] @ yv)


def payoff_closed_general(
    m: PayoffMatrix, vt: VTriple, p13: float, p14: float, s: StrategyProfile
) -> tuple[float, float]:
    a1, a2, a3, a4 = m
    dt = m.deltas
    const = a1 * p13 + (a2 + a3) * p14 + a4 * (1 - p13 - 2 * p14)
    own = dt.d1 * vt.v1 - dt.d2 * vt.v2
    other = (a2 - a1) * vt.v1 + (a3 - a4) * vt.v2
    cross = s.x * s.y * dt.d3 * vt.v3
    return (
        cross + s.x * own + s.y * other + const,
        cross + s.y * own + s.x * other + const,
    )


def payoff_closed_embedding(m: PayoffMatrix, np_: NonFactParams, s: StrategyProfile) -> tuple[float, float]:
    a1, a2, a3, a4 = m
    e1, e2, e3 = epsilons(np_)
    const = a4 + np_.c * (a1 - a4) - np_.d * (2 * a4 - a2 - a3)
    own = (a2 - a4) * (1 - e2) + e1 * (a1 - a3)
    other = (a3 - a4) * (1 - e2) + e1 * (a1 - a2)
    cross = s.x * s.y * m.deltas.d3 * (1 - e3)
    return (
        const + cross + s.x * own + s.y * other,
        const + cross + s.y * own + s.x * other,
    )


def bracket_coefficients(m: PayoffMatrix, vt: VTriple) -> tuple[float, float]:
    """(slope, intercept) of B(t)."""
    dt = m.deltas
    return dt.d3 * vt.v3, dt.d1 * vt.v1 - dt.d2 * vt.v2


def response_bracket(m: PayoffMatrix, vt: VTriple, t: float) -> float:
    slope, intercept = bracket_coefficients(m, vt)
    return t * slope + intercept


def _is_best(choice: float, bracket: float, tol: float) -> bool:
    # choice is 0 or 1
    return bracket >= -tol if choice == 1.0 else bracket <= tol


def find_equilibria(
    m: PayoffMatrix,
    vt: VTriple,
    constant_inputs: tuple[float, float] = (0.0, 0.0),
    tol: float = DEFAULT_TOL,
) -> EquilibriumSet:
    """All Nash equilibria of the symmetric bilinear game defined by ``vt``.

    ``constant_inputs`` is (p13, p14), which only shifts payoffs.
    """
    p13, p14 = constant_inputs
    slope, intercept = bracket_coefficients(m, vt)

    def bracket(t):
        return t * slope + intercept

    def make(x, y, kind):
        prof = StrategyProfile(x, y)
        pa, pb = payoff_closed_general(m, vt, p13, p14, prof)
        return NashEquilibrium(prof, pa, pb, kind)

    if abs(slope) <= tol and abs(intercept) <= tol:
        corners = tuple(make(x, y, NEKind.WEAK) for x in (1.0, 0.0) for y in (1.0, 0.0))
        return EquilibriumSet(
            corners,
            continuum=True,
            description="response bracket vanishes: every profile is a weak equilibrium with constant payoffs",
        )

    found = []
    for x in (1.0, 0.0):
        for y in (1.0, 0.0):
            by, bx = bracket(y), bracket(x)
            if _is_best(x, by, tol) and _is_best(y, bx, tol):
                strict = abs(by) > tol and abs(bx) > tol
                found.append(make(x, y, NEKind.STRICT if strict else NEKind.WEAK))

    notes = []
    if abs(slope) > tol:
        root = -intercept / slope
        if tol < root < 1 - tol:
            found.append(make(root, root, NEKind.WEAK))
        else:
            # Root on a corner t0: the player facing t0 is indifferent, so the
            # whole edge is an equilibrium if the other side keeps choosing t0.
            for t0 in (0.0, 1.0):
                if abs(root - t0) <= tol and all(_is_best(t0, bracket(t), tol) for t in (0.0, 0.5, 1.0)):
                    notes.append(f"edge segments x in [0,1], y={t0:g} and x={t0:g}, y in [0,1] are weak equilibria")
    return EquilibriumSet(tuple(found), notes=tuple(notes))


def factorizable_vtriple(fp: FactorParams) -> VTriple:
    r, s = fp.r, fp.s
    return VTriple.from_v(-s * (r - s), (1 - s) * (r - s), (r - s) ** 2)


def factorizable_equilibria(m: PayoffMatrix, fp: FactorParams, tol: float = DEFAULT_TOL) -> EquilibriumSet:
    s = fp.s
    return find_equilibria(m, factorizable_vtriple(fp), (s * s, s * (1 - s)), tol)


def sh_classical_s(m: PayoffMatrix, r: float, tol: float = DEFAULT_TOL) -> float:
    """The s that keeps the classical mixed equilibrium D2/D3 for a given r.

    Valid for Stag Hunt and Chicken, and only for r >= D2/D3.
    """
    gc = classify_game(m)
    if gc.name not in (GameName.STAG_HUNT, GameName.CHICKEN):
        raise PreconditionError(f"s-calibration needs a Stag Hunt or Chicken matrix, got {gc.name.value}")
    if gc.d3 == gc.d2:
        raise PreconditionError("D3 == D2: the mixed equilibrium sits at 1 and s is undefined")
    bound = gc.d2 / gc.d3
    if r < bound - tol or r > 1 + tol:
        raise PreconditionError(f"r = {r!r} must lie in [D2/D3, 1] = [{bound!r}, 1]")
    return (1 - r) / (gc.d3 / gc.d2 - 1)


def embedded_mixed_ne(m: PayoffMatrix, eps: EpsilonTriple):
    """Root of the bracket for the classical embedding, or None if outside [0, 1].

    Solves D3 * (y * (1 - e3) + e1) = D2 * (1 + e1 - e2) for y.
    """
    d3 = m.deltas.d3
    if d3 == 0:
        raise DegenerateDenominatorError("D3 = 0: bracket has no slope")
    if eps.e3 == 1:
        raise DegenerateDenominatorError("e3 = 1: bracket has no slope")
    y = (m.deltas.d2 * (1 + eps.e1 - eps.e2) / d3 - eps.e1) / (1 - eps.e3)
    return y if 0.0 <= y <= 1.0 else None
