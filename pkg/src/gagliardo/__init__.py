"""Full and boundary-truncated Gagliardo seminorms for radial jump kernels.

Submodules
----------
kernels      kernel profiles, the kernel assumptions and index estimates
domains      intervals, boxes, strips and unions of boxes
whitney      Whitney decompositions, chains, shadows and cube-sum lemmas
functions    explicit test functions
seminorm     singular quadrature of full and truncated seminorms on boxes
strip        exact 1-D reduction of seminorms on strips
harmonic     maximal function and Fourier-side checks
experiments  named experiments with verdicts
cli          command-line entry point
"""

__version__ = "0.1.0"

from .domains import Box, BoxUnion, Interval, Strip, l_shape, unit_square  # noqa: E402
from .functions import TestFunction  # noqa: E402
from .kernels import ExponentPair, FlatKernel, Kernel, KernelProfile, audit_kernel  # noqa: E402
from .seminorm import (QuadratureConfig, comparability_ratio, full_seminorm, seminorm_set,  # noqa: E402
                       truncated_seminorm)
from .whitney import verify_whitney, whitney_decompose  # noqa: E402

__all__ = [
    "__version__",
    "Box",
    "BoxUnion",
    "Interval",
    "Strip",
    "l_shape",
    "unit_square",
    "TestFunction",
    "ExponentPair",
    "FlatKernel",
    "Kernel",
    "KernelProfile",
    "audit_kernel",
    "QuadratureConfig",
    "comparability_ratio",
    "full_seminorm",
    "seminorm_set",
    "truncated_seminorm",
    "verify_whitney",
    "whitney_decompose",
]
