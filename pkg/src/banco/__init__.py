"""Parameter-free online convex optimization under sub-exponential gradient noise.

The package combines a scalar coin-betting learner whose potential discount
absorbs the noise variance, a ball-constrained direction learner, their
black-box composition for vector problems, noise oracles and loss
environments, baselines, anytime concentration utilities, and a Monte-Carlo
experiment harness with a CLI.
"""

from .betting import (
    BettingConfig,
    BettingState,
    LILPrior,
    NoiseSpec,
    TruncatedGaussian,
    UniformSymmetric,
    compute_bet,
    conjugate_bound,
    potential_value,
    regret_ceiling,
    update,
)
from .direction import (
    NormSpec,
    DirectionState,
    direction_predict,
    direction_update,
    project_unit_ball,
)
from .environments import (
    Absolute1D,
    RampHardInstance,
    GradientSample,
    LinearFixed,
    PrivateConvex,
    env_query,
    lipschitz_audit,
    online_to_batch,
)
from .errors import (
    BancoError,
    ConfigError,
    DomainError,
    EmptySequence,
    InsufficientTrials,
    LengthMismatch,
    NonConvergence,
)
from .harness import ExperimentSpec, TrialRecord, estimate_expected_regret, run_experiment
from .noise import (
    BoundedUniform,
    GaussianIso,
    LaplaceMechanism,
    NoneNoise,
    noise_spec,
    sample_noise,
)
from .numerics import QuadratureSpec, erf, erfcx, integrate, solve_k1
from .reduction import BanachLearnerState, banach_predict, banach_update

__version__ = "0.1.0"
