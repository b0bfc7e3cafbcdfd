"""Hot numeric kernels, dispatched to numba or numpy.

The numba path is used when numba imports and ``DISCRETE_EPI_DISABLE_NUMBA``
is unset. Both backends stay importable so they can be compared directly.
"""

from . import _kernels_numpy
from ._accel import HAVE_NUMBA, USE_NUMBA

if USE_NUMBA:
    from . import _kernels_numba as _impl
else:
    _impl = _kernels_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"

convolve = _impl.convolve
entropy_bits = _impl.entropy_bits
binary_entropy = _impl.binary_entropy
nonspiky = _impl.nonspiky
iid_grid_min = _impl.iid_grid_min
lxy_array = _impl.lxy_array
lxy_table = _impl.lxy_table
lxy_grid_oracle = _impl.lxy_grid_oracle
niid_table = _impl.niid_table
niid_grid_min = _impl.niid_grid_min
cond_grid_min = _impl.cond_grid_min
niid_profile = _impl.niid_profile
niid_inner = _impl.niid_inner


def backend(name):
    """Return the kernel module for ``"numpy"`` or ``"numba"``."""
    if name == "numpy":
        return _kernels_numpy
    if name == "numba":
        if not HAVE_NUMBA:
            raise ImportError("numba is not installed")
        from . import _kernels_numba

        return _kernels_numba
    raise ValueError(f"unknown backend {name!r}")
