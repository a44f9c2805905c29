"""Critical transitions in scalar concave equations driven by a transition
term: attractor-repeller pairs, saddle-node thresholds, and machine-checked
tracking and tipping certificates."""

from .fields import (
    ForcingProfile,
    MODEL_REGISTRY,
    ScalarField,
    Transition,
    arctan_transition,
    bench_forcing,
    build_model,
    climate_constants,
    climate_equilibria,
    climate_field,
    constant_forcing,
    constant_transition,
    discretize_transition,
    fig_phase_forcing,
    hopfield_field,
    make_quadratic,
    polygonal_transition,
    rate_transition,
    shift_parameter,
    step_transition,
    time_shift_forcing,
    translate_by_transition,
)
from .integrate import (
    BlowUp,
    BlowUpError,
    IntegrationError,
    IntegratorConfig,
    Trajectory,
    flow,
    integrate_span,
)
from .pullback import (
    HyperbolicPair,
    NoPairError,
    PairConvergenceError,
    SpecialSolutions,
    attractor_repeller,
    convex_combination,
    default_repeller_seed,
    dichotomy_estimate,
    entry_exit_times,
    lower_solution_test,
    perturbation_radius,
    special_solutions,
    transfer_time,
)
from .bifurcation import (
    BracketError,
    CASE_A,
    CASE_B,
    CASE_C,
    LambdaStar,
    Verdict,
    classify,
    lambda_star,
    refine_size_flip,
    scan_phase,
    scan_rate_step,
    scan_size,
    write_scan_csv,
)
from .criteria import (
    CRITERIA_IDS,
    Certificate,
    Inequality,
    SoundnessError,
    certificate_to_dict,
    certify_continuous,
    certify_piecewise,
    certify_polygonal,
    check_continuous_tipping,
    check_continuous_tracking,
    check_piecewise_tipping,
    check_piecewise_tracking,
    check_polygonal,
    check_step_limit,
)

__version__ = "0.1.0"
