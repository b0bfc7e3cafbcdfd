import os
from collections import defaultdict

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from discrete_epi import Pmf

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def brute_convolve(p: Pmf, q: Pmf) -> dict:
    """Law of the sum by enumerating outcome pairs."""
    out = defaultdict(float)
    for i, a in enumerate(p.weights):
        for j, b in enumerate(q.weights):
            out[p.offset + i + q.offset + j] += a * b
    return dict(out)


def brute_entropy(masses) -> float:
    m = np.asarray([v for v in masses if v > 0.0], dtype=float)
    return float(-(m * np.log(m)).sum() / np.log(2.0))


@st.composite
def pmfs(draw, max_size=24, min_size=1, min_offset=-20, max_offset=20):
    n = draw(st.integers(min_size, max_size))
    raw = draw(st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=n, max_size=n))
    raw[0] = max(raw[0], 1e-3)
    raw[-1] = max(raw[-1], 1e-3)
    w = np.array(raw)
    off = draw(st.integers(min_offset, max_offset))
    return Pmf.from_masses(w / w.sum(), off, normalize=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
