"""Entropy-gap bounds for sums of independent integer-valued random variables.

Set ``DISCRETE_EPI_DISABLE_NUMBA=1`` before import to run the pure-numpy
kernels instead of the numba ones.
"""

from .bounds import (
    LIMIT,
    BoundCurve,
    BoundValue,
    g_cond,
    g_cond_curve,
    g_iid,
    g_iid_curve,
    g_niid,
    g_niid_curve,
    l_xy,
)
from .dist import (
    ConditionalPair,
    GeneratorFamily,
    Pmf,
    SplitError,
    SplitResult,
    SupportSizeError,
    conditional_entropy,
    convolve,
    entropy,
    find_split_point,
    l1_dist,
    linf,
    random_pmf,
    spread,
    split_at,
)
from .explorer import (
    DeficiencyRecord,
    EntropyPoint,
    boundary_construction,
    check_theorem4_conditional,
    probe_convexity,
    sample_entropy_set,
)
from .kernels import BACKEND
from .verify import InvalidTrialError, SuiteConfig, SuiteReport, TrialReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "LIMIT",
    "BoundCurve",
    "BoundValue",
    "ConditionalPair",
    "DeficiencyRecord",
    "EntropyPoint",
    "GeneratorFamily",
    "InvalidTrialError",
    "Pmf",
    "SplitError",
    "SplitResult",
    "SuiteConfig",
    "SuiteReport",
    "SupportSizeError",
    "TrialReport",
    "boundary_construction",
    "check_theorem4_conditional",
    "conditional_entropy",
    "convolve",
    "entropy",
    "find_split_point",
    "g_cond",
    "g_cond_curve",
    "g_iid",
    "g_iid_curve",
    "g_niid",
    "g_niid_curve",
    "l1_dist",
    "l_xy",
    "linf",
    "probe_convexity",
    "random_pmf",
    "run_suite",
    "sample_entropy_set",
    "split_at",
    "spread",
]
