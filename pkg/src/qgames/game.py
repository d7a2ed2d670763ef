"""Payoff matrices, 16-entry joint-probability tables and their validators.

Table layout (0-based index k holds p_{k+1})::

                 Bob S1'          Bob S2'
                 +1     -1        +1     -1
    Alice S1 +1  p1     p2        p5     p6
             -1  p3     p4        p7     p8
    Alice S2 +1  p9     p10       p13    p14
             -1  p11    p12       p15    p16

so quadrant (i, j) = strategy pair (S_i, S_j') occupies ``p[4*q:4*q+4]`` with
q = 2*i + j and outcome order (+,+), (+,-), (-,+), (-,-).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-9

# 1-based index pairs that must agree under player interchange.
SYMMETRY_PAIRS = ((2, 3), (5, 9), (6, 11), (7, 10), (8, 12), (14, 15))

# No-signaling: each row is (lhs indices, rhs indices), 1-based.
CAUSALITY_EQUATIONS = (
    ((1, 2), (5, 6)),
    ((1, 3), (9, 11)),
    ((9, 10), (13, 14)),
    ((5, 7), (13, 15)),
    ((3, 4), (7, 8)),
    ((11, 12), (15, 16)),
    ((2, 4), (10, 12)),
    ((6, 8), (14, 16)),
)


@dataclass(frozen=True)
class PayoffMatrix:
    """Alice's payoffs ``[[a1, a2], [a3, a4]]``; Bob's matrix is the transpose."""

    a1: float
    a2: float
    a3: float
    a4: float

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"payoff {name} must be finite, got {v!r}")
            object.__setattr__(self, name, float(v))

    @property
    def alice(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.a3, self.a4])

    @property
    def bob(self) -> np.ndarray:
        # b1=a1, b2=a3, b3=a2, b4=a4
        return np.array([self.a1, self.a3, self.a2, self.a4])

    @property
    def deltas(self) -> DeltaTriple:
        return DeltaTriple.from_matrix(self)

    def __iter__(self):
        return iter((self.a1, self.a2, self.a3, self.a4))


@dataclass(frozen=True)
class DeltaTriple:
    d1: float
    d2: float

    @property
    def d3(self) -> float:
        return self.d2 - self.d1

    @classmethod
    def from_matrix(cls, m: PayoffMatrix) -> DeltaTriple:
        return cls(m.a3 - m.a1, m.a4 - m.a2)


@dataclass(frozen=True)
class StrategyProfile:
    """x: Alice's probability of picking S1, y: Bob's of picking S1'."""

    x: float
    y: float

    def __post_init__(self):
        for name in ("x", "y"):
            v = float(getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} = {v!r} is not a probability")
            object.__setattr__(self, name, v)


@dataclass(frozen=True, eq=False)
class JointProbabilityTable:
    p: np.ndarray

    def __post_init__(self):
        arr = np.array(self.p, dtype=np.float64).reshape(-1)
        if arr.shape != (16,):
            raise ValueError(f"a table needs 16 entries, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("table entries must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "p", arr)

    @classmethod
    def from_quadrants(cls, q11, q12, q21, q22) -> JointProbabilityTable:
        return cls(np.concatenate([q11, q12, q21, q22]))

    def entry(self, k: int) -> float:
        """1-based access: ``entry(13)`` is p13."""
        return float(self.p[k - 1])

    @property
    def quadrants(self) -> np.ndarray:
        """Shape (4, 4): row q is the outcome distribution of strategy pair q."""
        return self.p.reshape(4, 4)

    def __eq__(self, other):
        if not isinstance(other, JointProbabilityTable):
            return NotImplemented
        return bool(np.array_equal(self.p, other.p))

    def __hash__(self):
        return hash(self.p.tobytes())

    def __repr__(self):
        return f"JointProbabilityTable({self.p.tolist()})"


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    residual: float


@dataclass(frozen=True)
class ValidationReport:
    normalization_ok: bool
    symmetry_ok: bool
    causality_ok: bool
    residuals: dict = field(default_factory=dict)
    factorization: tuple[float, float, float, float] | None = None

    @property
    def ok(self) -> bool:
        return self.normalization_ok and self.symmetry_ok and self.causality_ok


def validate_normalization(table: JointProbabilityTable, tol: float = DEFAULT_TOL) -> CheckResult:
    p = table.p
    sums = np.abs(table.quadrants.sum(axis=1) - 1.0)
    out_of_range = np.maximum(np.maximum(-p, p - 1.0), 0.0)
    residual = float(max(sums.max(), out_of_range.max()))
    return CheckResult(residual <= tol, residual)


def validate_symmetry(table: JointProbabilityTable, tol: float = DEFAULT_TOL) -> CheckResult:
    p = table.p
    residual = max(abs(p[i - 1] - p[j - 1]) for i, j in SYMMETRY_PAIRS)
    return CheckResult(residual <= tol, float(residual))


def causality_residuals(table: JointProbabilityTable) -> np.ndarray:
    p = table.p
    return np.array(
        [abs(sum(p[i - 1] for i in lhs) - sum(p[i - 1] for i in rhs)) for lhs, rhs in CAUSALITY_EQUATIONS]
    )


def validate_causality(table: JointProbabilityTable, tol: float = DEFAULT_TOL) -> CheckResult:
    residual = float(causality_residuals(table).max())
    return CheckResult(residual <= tol, residual)


def factorized_table(r: float, s: float, r2: float, s2: float) -> np.ndarray:
    """The general product table built from Alice's (r, s) and Bob's (r', s')."""
    alice = (np.array([r, 1 - r]), np.array([s, 1 - s]))
    bob = (np.array([r2, 1 - r2]), np.array([s2, 1 - s2]))
    return np.concatenate([np.outer(alice[i], bob[j]).ravel() for i in (0, 1) for j in (0, 1)])


def factorization_residual(table: JointProbabilityTable) -> tuple[tuple[float, float, float, float], float]:
    p = table.p
    r, r2 = p[0] + p[1], p[0] + p[2]
    s, s2 = p[12] + p[13], p[12] + p[14]
    marginals = (float(r), float(s), float(r2), float(s2))
    return marginals, float(np.abs(factorized_table(*marginals) - p).max())


def factorize(table: JointProbabilityTable, tol: float = DEFAULT_TOL):
    """Return the marginals ``(r, s, r', s')`` if the table is a product table, else None.

    The marginals are read off p1+p2, p13+p14, p1+p3 and p13+p15; every one of
    the 16 product equations is then checked against them.
    """
    marginals, residual = factorization_residual(table)
    return marginals if residual <= tol else None


def validate(table: JointProbabilityTable, tol: float = DEFAULT_TOL) -> ValidationReport:
    norm = validate_normalization(table, tol)
    sym = validate_symmetry(table, tol)
    caus = validate_causality(table, tol)
    marginals, fact_res = factorization_residual(table)
    return ValidationReport(
        normalization_ok=norm.ok,
        symmetry_ok=sym.ok,
        causality_ok=caus.ok,
        residuals={
            "normalization": norm.residual,
            "symmetry": sym.residual,
            "causality": caus.residual,
            "factorization": fact_res,
        },
        factorization=marginals if norm.ok and fact_res <= tol else None,
    )


def quadrant_payoffs(table: JointProbabilityTable, m: PayoffMatrix) -> np.ndarray:
    """Payoffs for the four pure strategy pairs.

    Returns shape (2, 2, 2): ``out[i, j] = (Pi_A(S_i, S_j'), Pi_B(S_i, S_j'))``.
    """
    q = table.quadrants
    pa = q @ m.alice
    pb = q @ m.bob
    return np.stack([pa, pb], axis=-1).reshape(2, 2, 2)
