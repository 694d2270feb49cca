"""Signed local-hidden-variable analysis of 2x2x2 Bell-CHSH experiments.

The library models a two-party, two-setting, two-outcome correlation
experiment through signed weight vectors over the 16 deterministic local
strategies.  It validates probability sets, computes every CHSH sign
variant, constructs the full 7-parameter family of weight vectors
reproducing a consistent box, and minimizes total negativity over that
family, exhibiting constructively that negative weights are required
exactly when CHSH is violated.
"""

from .model import (
    CANONICAL_VARIANT,
    CHSH_VARIANTS,
    DEFAULT_EPS,
    DEPENDENT_INDICES,
    FORWARD_MATRIX,
    INDEPENDENT_INDICES,
    MINUS,
    PLUS,
    PROB_LABELS,
    SIGMA1_STRATEGIES,
    SIGMA2_STRATEGIES,
    STRATEGY_PATTERNS,
    BlockViolation,
    ChshReport,
    ChshVariant,
    ConsistencyError,
    MarginalViolation,
    NecessityVerdict,
    RangeViolation,
    RelationViolation,
    Sigmas,
    as_measure_vector,
    as_probability_set,
    check_consistency,
    check_derived_relations,
    check_no_signaling,
    check_normalization,
    check_range,
    chsh,
    chsh_from_measures,
    chsh_report,
    chsh_report_from_measures,
    correlation,
    deterministic_box,
    forward_map,
    is_consistent,
    max_abs_chsh,
    negativity_necessity_verdict,
    pattern_index,
    pr_box,
    prob_index,
    prob_label,
    require_consistent,
    sigmas,
    strategy_index,
    strategy_outcomes,
    strategy_pattern,
    total_negativity,
    tsirelson_box,
    uniform_box,
)
from .solver import (
    FREE_INDICES,
    SOLVED_INDICES,
    FreeParameters,
    IndependentProbabilities,
    InfeasibleIndependentSetError,
    general_solution,
    independent_probs,
    perfect_correlation_solution,
    reconstruct_probs,
    solution_affine_map,
    solve,
)
from .negativity import (
    DegenerateSystemError,
    LinearProgram,
    LpSolution,
    NegativityResult,
    build_negativity_lp,
    chsh_lower_bound,
    min_negativity,
    solve_lp,
)
from .quantum import (
    ChshSearchResult,
    MeasurementDirection,
    QubitScenario,
    TwoQubitState,
    born_probability,
    flip_outcomes,
    generate_probability_set,
    maximize_chsh,
    singlet,
)
from .fileio import (
    ParseError,
    box_object,
    fixture_path,
    format_box,
    format_measures,
    measures_object,
    parse_box,
    parse_measures,
)

__version__ = "0.1.0"
