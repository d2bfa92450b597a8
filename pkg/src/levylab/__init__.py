"""Monte Carlo laboratory for empirical-moment scaling of self-similar Levy processes."""

from .stable import (
    DEGENERATE,
    MOMENT_DOES_NOT_EXIST,
    StableParams,
    TailAsymptote,
    abs_tail_asymptote,
    cauchy_tail_exact,
    char_exponent,
    empirical_nu,
    one_sided_tail_asymptote,
    tail_constant,
    theoretical_nu,
    validate_params,
)
from .sampler import (
    IncrementSeries,
    RngStream,
    aggregate,
    draw_stable,
    generate_increments,
    levels,
    sample_stable,
)
from .moments import (
    HorizonScheme,
    MomentGrid,
    NormingKind,
    NormingSpec,
    ScalingFit,
    SeriesVerdict,
    default_q_grid,
    empirical_moment,
    feller_classifier,
    fit_scaling,
    horizon_scheme,
    lcm_first,
    moment_grid,
    norming_spec,
    normed_statistic,
    ratio_normalized,
)
from .extremes import (
    BlockExtremes,
    LambdaSequence,
    block_extremes,
    check_sandwich_inequality,
    check_scalar_inequalities,
    estimate_tail_exponent,
    exp_moment_bound,
    lambda_constants,
    lambda_sequence,
    sandwich_sweep,
    ratio_RN,
    sandwich_constants,
)
from .limits import (
    ConvergenceReport,
    DivergenceDemo,
    KsResult,
    McConfig,
    divergence_demo,
    equality_in_law_test,
    ks_two_sample,
    centered_sine_curve,
    mc_normed_sample,
    ratio_convergence_study,
    rn_study,
    tau_invariance_test,
)
from .estimator import ScalingFunctionEstimator, TailIndexEstimator, TruncationWarning

__version__ = "0.1.0"
