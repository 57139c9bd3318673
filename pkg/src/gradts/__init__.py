"""Thompson sampling for high-dimensional Bayesian optimization with
gradient-guided adaptive candidate sets."""

__version__ = "0.1.0"

from . import acquire, benchmarks, candidates, gp, harness, kernel, turbo  # noqa: E402,F401
from .acquire import AcquisitionConfig, AcquisitionResult, acquire as acquire_points  # noqa: F401
from .candidates import CandidateSet, MaskVariant, SearchRegion  # noqa: F401
from .gp import Dataset, GpModel, GradientSample, fit  # noqa: F401
from .harness import RunConfig, RunTrace, run  # noqa: F401
from .kernel import KernelParams  # noqa: F401
