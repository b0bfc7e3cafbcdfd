"""Backend selection for the numeric kernels.

Set ``DISCRETE_EPI_DISABLE_NUMBA=1`` to force the pure-numpy kernels even
when numba is importable.
"""

import os

DISABLE_ENV = "DISCRETE_EPI_DISABLE_NUMBA"


def _have_numba():
    try:
        import numba  # noqa: F401

        return True
    except ImportError:
        return False


def _numba_disabled():
    return os.environ.get(DISABLE_ENV, "").strip().lower() in ("1", "true", "yes", "on")


HAVE_NUMBA = _have_numba()
USE_NUMBA = HAVE_NUMBA and not _numba_disabled()
