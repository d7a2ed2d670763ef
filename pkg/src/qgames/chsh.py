"""CHSH sums, the Cirel'son bound and domain classification of tables."""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolationError
from .game import (
    DEFAULT_TOL,
    JointProbabilityTable,
    factorize,
    validate_causality,
    validate_normalization,
    validate_symmetry,
)
from .params import NonFactParams

LOCAL_BOUND = 2.0
CIRELSON_BOUND = 2.0 * math.sqrt(2.0)

# 0-based positions of p1, p4, p5, p8, p9, p12, p14, p15
_CHSH_INDICES = np.array([1, 4, 5, 8, 9, 12, 14, 15]) - 1


class DomainClass(str, enum.Enum):
    FACTORIZABLE = "Factorizable"
    LOCAL_NON_FACTORIZABLE = "LocalNonFactorizable"
    QUANTUM = "Quantum"
    SUPER_QUANTUM = "SuperQuantum"


@dataclass(frozen=True)
class ChshResult:
    delta: float
    saturates_cirelson: bool
    violates_local: bool
    super_quantum: bool


@dataclass(frozen=True)
class Classification:
    domain: DomainClass
    delta: float
    # |delta| within tol of 2 or 2*sqrt(2) for a non-factorizable table
    boundary: bool = False

    def __str__(self):
        return self.domain.value + (" (boundary)" if self.boundary else "")


def chsh_delta(table: JointProbabilityTable) -> float:
    return float(2.0 * (table.p[_CHSH_INDICES].sum() - 2.0))


def chsh_delta_embedding(np_: NonFactParams) -> float:
    return 4.0 * (np_.a - np_.c + 2.0 * np_.e - 0.5)


def chsh_result(delta: float, tol: float = DEFAULT_TOL) -> ChshResult:
    mag = abs(delta)
    return ChshResult(
        delta=delta,
        saturates_cirelson=abs(mag - CIRELSON_BOUND) <= tol,
        violates_local=mag > LOCAL_BOUND + tol,
        super_quantum=mag > CIRELSON_BOUND + tol,
    )


def cirelson_ok(np_: NonFactParams, tol: float = DEFAULT_TOL) -> bool:
    return abs(np_.a - np_.c + 2.0 * np_.e - 0.5) <= 1.0 / math.sqrt(2.0) + tol


def correlators(table: JointProbabilityTable) -> np.ndarray:
    """E(S_i, S_j') = P(same) - P(different), ordered E11, E12, E21, E22."""
    return table.quadrants @ np.array([1.0, -1.0, -1.0, 1.0])


def max_chsh(table: JointProbabilityTable) -> float:
    """Largest |CHSH sum| over the eight sign combinations.

    Informational only; ``classify`` uses the single combination of
    ``chsh_delta`` (which equals E11 + E12 + E21 - E22 for normalized tables).
    """
    e = correlators(table)
    best = 0.0
    for flip, overall in itertools.product(range(4), (1.0, -1.0)):
        signs = np.ones(4)
        signs[flip] = -1.0
        best = max(best, overall * float(signs @ e))
    return best


def classify(table: JointProbabilityTable, tol: float = DEFAULT_TOL) -> Classification:
    checks = {
        "normalization": validate_normalization(table, tol),
        "symmetry": validate_symmetry(table, tol),
        "causality": validate_causality(table, tol),
    }
    failed = [f"{k} (residual {c.residual:.3g})" for k, c in checks.items() if not c.ok]
    if failed:
        raise ConstraintViolationError("table violates " + ", ".join(failed))
    delta = chsh_delta(table)
    if factorize(table, tol) is not None:
        return Classification(DomainClass.FACTORIZABLE, delta)
    mag = abs(delta)
    on_edge = abs(mag - LOCAL_BOUND) <= tol or abs(mag - CIRELSON_BOUND) <= tol
    if mag <= LOCAL_BOUND + tol:
        domain = DomainClass.LOCAL_NON_FACTORIZABLE
    elif mag <= CIRELSON_BOUND + tol:
        domain = DomainClass.QUANTUM
    else:
        domain = DomainClass.SUPER_QUANTUM
    return Classification(domain, delta, on_edge)
