"""Classification and verification engine for rotation-invariant csck metrics."""

from .errors import (
    BadAnchorError,
    ConstraintViolationError,
    CsckError,
    EndpointSampleError,
    IllConditionedError,
    NotClassifiedError,
    NotCsckError,
    NotKahlerError,
    NotNormalizableError,
    OutOfDomainError,
    StageError,
    UnsupportedMultiplicityError,
    ZeroPolyError,
)
from .polynomials import Poly, RootProfile, real_root_profile
from .reduction import (
    FunctionHandle,
    OdeData,
    RadialProblem,
    RecoveredConstants,
    build_ode,
    f_of,
    ode_residual,
    recover_constants,
)
from .branches import (
    Branch,
    BranchKind,
    CaseReport,
    Verdict,
    admissible_branches,
    classify,
    lelong_number,
    smooth_origin_test,
)
from .cases import CaseFixture, canonical_label, get_case, labels_for, match_label
from .quadrature import (
    AntiderivativeF,
    ArcTan,
    LogLinear,
    LogQuadratic,
    RadialSolution,
    RecipPower,
    ShootResult,
    ball_normalize,
    eval_F,
    gauge_from_anchor,
    partial_fractions,
    shoot_ode,
    solve_g,
)
from .geometry import (
    MetricSample,
    VerificationReport,
    curvature_fd,
    metric_sample,
    metric_tensor,
    potential_u,
    scalar_curvature,
    verify_solution,
)
from .inequalities import ConstraintSample, I_value, J_value, certify_negative
from .catalog import (
    CrossCheckReport,
    ExpectedBranch,
    cross_check,
    enumerate_cases,
    instantiate,
)

__version__ = "0.1.0"
