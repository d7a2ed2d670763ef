"""Symmetric 2x2 games built from (non-)factorizable joint probability tables."""
from .chsh import (
    ChshResult,
    Classification,
    DomainClass,
    chsh_delta,
    chsh_delta_embedding,
    chsh_result,
    cirelson_ok,
    classify,
    max_chsh,
)
from .equilibrium import (
    EquilibriumSet,
    GameClass,
    GameName,
    NashEquilibrium,
    NEKind,
    classify_game,
    embedded_mixed_ne,
    factorizable_equilibria,
    find_equilibria,
    payoff_closed_embedding,
    payoff_closed_general,
    payoff_direct,
    response_bracket,
    sh_classical_s,
)
from .game import (
    DeltaTriple,
    JointProbabilityTable,
    PayoffMatrix,
    StrategyProfile,
    ValidationReport,
    factorize,
    quadrant_payoffs,
    validate,
    validate_causality,
    validate_normalization,
    validate_symmetry,
)
from .montecarlo import SimConfig, SimResult, simulate
from .params import (
    CERECEDA,
    CLASSICAL,
    ZERO,
    EpsilonTriple,
    FactorParams,
    NonFactParams,
    VTriple,
    build_embedding,
    build_factorizable,
    build_nonfact_general,
    epsilons,
    vtriple_closed_form,
    vtriple_from_table,
)
from .presets import PRESETS

__version__ = "0.1.0"
