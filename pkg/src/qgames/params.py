"""Builders from (r, s) and the offsets (a, b, c, d, e) to probability tables."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidProbabilityError, NegativeParameterError
from .game import DEFAULT_TOL, JointProbabilityTable, validate_causality, validate_symmetry

# Entries may undershoot 0 or overshoot 1 by this much before a builder rejects them.
BUILD_TOL = 1e-12


class AsymmetryWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FactorParams:
    r: float
    s: float

    def __post_init__(self):
        for name in ("r", "s"):
            v = float(getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} = {v!r} must lie in [0, 1]")
            object.__setattr__(self, name, v)


# The classical embedding point.
CLASSICAL = FactorParams(1.0, 0.0)


@dataclass(frozen=True)
class NonFactParams:
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    e: float = 0.0

    def __post_init__(self):
        for name in "abcde":
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def eta(self) -> float:
        return self.a + self.b + self.e - self.c - self.d

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.a, self.b, self.c, self.d, self.e)

    def __iter__(self):
        return iter(self.as_tuple())


ZERO = NonFactParams()

_K = (2 + math.sqrt(2)) / 8
# Maximal CHSH violation for this table family; saturates the Cirel'son bound.
CERECEDA = NonFactParams(a=_K, b=0.5 - _K, c=0.5 - _K, d=_K, e=_K)


@dataclass(frozen=True)
class EpsilonTriple:
    e1: float
    e2: float
    e3: float

    def __iter__(self):
        return iter((self.e1, self.e2, self.e3))


@dataclass(frozen=True)
class VTriple:
    """u = p1 - p5, v = p2 - p14, w = p13 - p5; v1..v3 are derived."""

    u: float
    v: float
    w: float

    @property
    def v1(self) -> float:
        return self.w

    @property
    def v2(self) -> float:
        return self.u + self.v

    @property
    def v3(self) -> float:
        return self.u + self.w

    @classmethod
    def from_v(cls, v1: float, v2: float, v3: float) -> VTriple:
        u = v3 - v1
        return cls(u=u, v=v2 - u, w=v1)

    def as_v(self) -> tuple[float, float, float]:
        return (self.v1, self.v2, self.v3)


def _checked(p: np.ndarray, tol: float = BUILD_TOL) -> JointProbabilityTable:
    bad = np.flatnonzero((p < -tol) | (p > 1 + tol))
    if bad.size:
        k = int(bad[0])
        raise InvalidProbabilityError(k + 1, float(p[k]))
    return JointProbabilityTable(p)


def build_factorizable(fp: FactorParams) -> JointProbabilityTable:
    r, s = fp.r, fp.s
    m = (np.array([r, 1 - r]), np.array([s, 1 - s]))
    quads = [np.outer(m[i], m[j]).ravel() for i in (0, 1) for j in (0, 1)]
    return JointProbabilityTable(np.concatenate(quads))


def nonfact_general_entries(r, s, a, b, c, d, e) -> np.ndarray:
    """Raw product table plus offsets, no range check. Works elementwise on arrays."""
    eta = a + b + e - c - d
    return np.array([
        r * r - a - 2 * b, r * (1 - r) + b, r * (1 - r) + b, (1 - r) ** 2 + a,
        r * s + e, r * (1 - s) - a - b - e, s * (1 - r) + d + c - e, (1 - r) * (1 - s) + eta,
        s * r + e, s * (1 - r) + c + d - e, r * (1 - s) - a - b - e, (1 - s) * (1 - r) + eta,
        s * s + c, s * (1 - s) + d, s * (1 - s) + d, (1 - s) ** 2 - c - 2 * d,
    ])


def build_nonfact_general(fp: FactorParams, np_: NonFactParams) -> JointProbabilityTable:
    return _checked(nonfact_general_entries(fp.r, fp.s, *np_))


def embedding_entries(a, b, c, d, e) -> np.ndarray:
    eta = a + b + e - c - d
    return np.array([
        1 - a - 2 * b, b, b, a,
        e, 1 - a - b - e, d + c - e, eta,
        e, c + d - e, 1 - a - b - e, eta,
        c, d, d, 1 - c - 2 * d,
    ])


def build_embedding(np_: NonFactParams) -> JointProbabilityTable:
    for name, v in zip("abcde", np_):
        if v < 0:
            raise NegativeParameterError(name, v)
    return _checked(embedding_entries(*np_))


def is_valid_embedding(np_: NonFactParams) -> bool:
    try:
        build_embedding(np_)
    except (InvalidProbabilityError, NegativeParameterError):
        return False
    return True


def epsilons(np_: NonFactParams) -> EpsilonTriple:
    a, b, c, d, e = np_
    return EpsilonTriple(e - c, a + b + d + e, a + 2 * b - c + 2 * e)


def vtriple_from_table(table: JointProbabilityTable, tol: float = DEFAULT_TOL) -> VTriple:
    sym, caus = validate_symmetry(table, tol), validate_causality(table, tol)
    if not (sym.ok and caus.ok):
        warnings.warn(
            f"table is not symmetric/causal (residuals {sym.residual:.3g}, {caus.residual:.3g});"
            " v-triple reduction is approximate",
            AsymmetryWarning,
            stacklevel=2,
        )
    p = table.p
    return VTriple(u=float(p[0] - p[4]), v=float(p[1] - p[13]), w=float(p[12] - p[4]))


def vtriple_closed_form(fp: FactorParams, np_: NonFactParams) -> VTriple:
    r, s = fp.r, fp.s
    eps = epsilons(np_)
    v1 = -s * (r - s) - eps.e1
    v2 = (1 - s) * (r - s) - eps.e2
    v3 = (r - s) ** 2 - eps.e3
    return VTriple.from_v(v1, v2, v3)
