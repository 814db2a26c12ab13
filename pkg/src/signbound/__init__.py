"""Sign-disagreement error assessment with exact Chernoff-Cramer tail bounds."""

from .errors import (
    DegenerateAverage,
    DegenerateScores,
    EmptySubset,
    InsufficientReplicates,
    InvalidFaithfulness,
    MissingScores,
    OptimizerDidNotConverge,
    SchemaError,
    SignboundError,
)
from .tail_bounds import (
    BoundProblem,
    BoundResult,
    dual_objective,
    hoeffding_exponent,
    improvement_ratio,
    mgf_coeff,
    tight_exponent,
)
from .sdr_core import (
    AgreementSummary,
    SignStudy,
    sdp,
    split_enumeration,
    split_replicates,
    summarize,
    type_s_bound,
)
from .confidence import (
    Interval,
    mean_lower_bound,
    reject_mean_at_most,
    sdr_two_sided_ci,
    sdr_upper_ci,
)
from .simultaneous import (
    ConfidenceRegion,
    NestedSummaries,
    critical_sum,
    merged_region,
    simultaneous_region,
    worst_slack,
)
from .error_control import (
    ControlConfig,
    ControlResult,
    Preprocess,
    false_sign_exceedance,
    nested_subsets,
    select,
)
from .baselines_sim import (
    SimConfig,
    SimOutcome,
    bh_directional,
    generate,
    run_comparison,
    score_selection,
    variance_pool,
)

__version__ = "0.1.0"
