"""Schmidt number of type-II PDC light from kernel traces and singular spectra."""

from .errors import (
    AccuracyError,
    ConfigError,
    ConvergenceError,
    CostGuardError,
    InvalidInputError,
    PdcError,
    ResolutionError,
    SingularFormError,
    UndefinedBiphotonError,
)
from .estimator import SchmidtEstimate, estimate, estimate_config, f_curves
from .kernels import FULL_SINC, THIN_CRYSTAL, KernelSpec
from .params import BASELINE, DerivedParams, ExperimentConfig, derive, retarget

__version__ = "0.1.0"
