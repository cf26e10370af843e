"""Solvers for budgeted, capacitated preference allocation and its Monroe
and Chamberlin-Courant committee-selection specializations."""

from .core import (
    Assignment,
    Instance,
    Profile,
    ScoringFunction,
    SolveReport,
    ValidationError,
    Violation,
    assignment_cost,
    metric_extreme,
    metric_l1,
    metric_min_delta,
    score,
    validate_assignment,
)
from .instances import (
    ParseError,
    ParsedDocument,
    gen_identical,
    gen_impartial_culture,
    general_instance,
    make_cc,
    make_monroe,
    parse_instance,
    write_instance,
)
from .matching import (
    CapacityRegime,
    InfeasibleMatchingError,
    match_cc,
    match_egalitarian,
    match_monroe_l1,
)
from .rng import SplitMix64, derive_seed
from .solvers import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapExceeded,
    SolverConfig,
    UnsupportedInstanceError,
    combined_monroe,
    exact_enumeration,
    greedy_cc,
    greedy_cc_bound,
    greedy_cc_majority,
    greedy_monroe,
    greedy_monroe_bound,
    harmonic,
    lambert_w,
    maxcover_cc_baseline,
    sample_once_monroe,
    sampling_run_count,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "CapacityRegime",
    "DEFAULT_ENUMERATION_CAP",
    "EnumerationCapExceeded",
    "InfeasibleMatchingError",
    "Instance",
    "ParseError",
    "ParsedDocument",
    "Profile",
    "ScoringFunction",
    "SolveReport",
    "SolverConfig",
    "SplitMix64",
    "UnsupportedInstanceError",
    "ValidationError",
    "Violation",
    "assignment_cost",
    "combined_monroe",
    "derive_seed",
    "exact_enumeration",
    "gen_identical",
    "gen_impartial_culture",
    "general_instance",
    "greedy_cc",
    "greedy_cc_bound",
    "greedy_cc_majority",
    "greedy_monroe",
    "greedy_monroe_bound",
    "harmonic",
    "lambert_w",
    "make_cc",
    "make_monroe",
    "match_cc",
    "match_egalitarian",
    "match_monroe_l1",
    "maxcover_cc_baseline",
    "metric_extreme",
    "metric_l1",
    "metric_min_delta",
    "parse_instance",
    "sample_once_monroe",
    "sampling_run_count",
    "score",
    "validate_assignment",
    "write_instance",
]
