"""Lower-bound functions for the entropy gap of integer-valued sums.

Every bound is a min of a max-composition over a box. Each is evaluated by
a deterministic coarse grid followed by local refinement, and can be
cross-checked against a finer pure-grid oracle (``BoundValue.oracle_gap``).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels

LN2 = math.log(2.0)
LIMIT = 1.0 / (8.0 * LN2)  # log2(e)/8, the large-entropy limit of g
NEG_CLAMP = 1e-12

IID_GRID_STEP = 1e-4
IID_ORACLE_STEP = 1e-6
IID_TOL = 1e-10
NIID_GRID_STEP = 1e-3
NIID_ORACLE_STEP = 1e-4
NIID_TOL = 1e-10
NIID_INNER_TOL = 1e-12
COND_GRID_STEP = 1e-5
COND_ORACLE_STEP = 1e-7
COND_TOL = 1e-12
LXY_ORACLE_STEP = 1e-4
LXY_ORACLE_BOX = 4.0

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_MAX_STARTS = 4


@dataclass(frozen=True)
class BoundValue:
    value: float
    minimizer_x: float
    minimizer_y: float | None = None
    minimizer_delta: float | None = None
    oracle_gap: float | None = None
    oracle_value: float | None = None

    def __post_init__(self):
        for name in ("value", "minimizer_x", "minimizer_y", "minimizer_delta", "oracle_gap", "oracle_value"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, float(v))


@dataclass
class BoundCurve:
    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)

    def values(self) -> np.ndarray:
        return np.array([b.value for b in self.outputs])

    def is_nondecreasing(self, slack: float = 1e-9) -> bool:
        v = self.values()
        return bool(np.all(np.diff(v) >= -slack))


def _check_unit(x, name="x"):
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"{name}={x!r} outside [0, 1]")


def _check_rate(c, name="c"):
    if not (math.isfinite(c) and c >= 0.0):
        raise ValueError(f"{name}={c!r} must be finite and >= 0")


def _clamp(v: float) -> float:
    if -NEG_CLAMP < v < 0.0:
        return 0.0
    return v + 0.0  # normalizes -0.0


def h2(x: float) -> float:
    """Binary entropy in bits."""
    _check_unit(x)
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def nonspiky_term(x: float) -> float:
    """(1-x)^2 ((1-x) v (4x-2)^+)^2 / (8 ln 2)."""
    _check_unit(x)
    u = 1.0 - x
    r = max(u, max(4.0 * x - 2.0, 0.0))
    return u * u * r * r / (8.0 * LN2)


def golden_section(f, lo: float, hi: float, tol: float):
    """Minimize a unimodal ``f`` on [lo, hi]; returns (x, f(x))."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    best = min((fc, c), (fd, d), (f(a), a), (f(b), b))
    return best[1], best[0]


def _grid_points(step: float, lo: float = 0.0, hi: float = 1.0) -> int:
    return int(round((hi - lo) / step)) + 1


@functools.lru_cache(maxsize=8)
def _iid_tables(n: int):
    xs = np.linspace(0.0, 1.0, n)
    return xs, kernels.binary_entropy(xs), kernels.nonspiky(xs)


@functools.lru_cache(maxsize=4)
def _niid_tables(n: int):
    xs = np.linspace(0.0, 1.0, n)
    return xs, kernels.binary_entropy(xs), kernels.lxy_table(xs, xs)


@functools.lru_cache(maxsize=4)
def _cond_tables(n: int):
    ds = np.linspace(0.0, 0.5, n)
    return ds, kernels.binary_entropy(ds)


def _local_minima_1d(vals: np.ndarray) -> np.ndarray:
    left = np.r_[np.inf, vals[:-1]]
    right = np.r_[vals[1:], np.inf]
    idx = np.flatnonzero((vals <= left) & (vals <= right))
    return idx[np.argsort(vals[idx], kind="stable")][:_MAX_STARTS]


# -- i.i.d. bound ------------------------------------------------------------


def _iid_objective(c: float, x: float) -> float:
    return max(c * x - h2(x), nonspiky_term(x))


def g_iid_oracle(c: float, step: float = IID_ORACLE_STEP, lo: float = 0.0):
    """Pure dense-grid minimum of the i.i.d. objective; returns (value, x)."""
    n = _grid_points(step, lo)
    if lo == 0.0:
        xs, h2s, nsp = _iid_tables(n)
    else:
        xs = np.linspace(lo, 1.0, n)
        h2s, nsp = kernels.binary_entropy(xs), kernels.nonspiky(xs)
    v, k = kernels.iid_grid_min(float(c), xs, h2s, nsp)
    return float(v), float(xs[k])


def g_iid(
    c: float,
    *,
    relaxed: bool = True,
    oracle: bool = True,
    grid_step: float = IID_GRID_STEP,
    oracle_step: float = IID_ORACLE_STEP,
    tol: float = IID_TOL,
) -> BoundValue:
    """Lower bound on H(p*p) - H(p) given H(p) = c.

    ``relaxed=False`` restricts the minimization to [2^-c, 1], the tighter
    bound that holds because ||p||_inf >= 2^-H(p).
    """
    _check_rate(c)
    lo = 0.0 if relaxed else 2.0 ** (-c)
    n = _grid_points(grid_step, lo)
    if lo == 0.0:
        xs, h2s, nsp = _iid_tables(n)
    else:
        xs = np.linspace(lo, 1.0, n)
        h2s, nsp = kernels.binary_entropy(xs), kernels.nonspiky(xs)
    vals = np.maximum(c * xs - h2s, nsp)

    best_v, best_x = np.inf, 1.0
    for i in _local_minima_1d(vals):
        a, b = xs[max(i - 1, 0)], xs[min(i + 1, n - 1)]
        x, v = golden_section(lambda t: _iid_objective(c, t), a, b, tol)
        if vals[i] <= v:
            x, v = float(xs[i]), float(vals[i])
        if v < best_v:
            best_v, best_x = v, x
    value = _clamp(best_v)

    gap = ov = None
    if oracle:
        ov, _ = g_iid_oracle(c, oracle_step, lo)
        ov = _clamp(ov)
        gap = abs(value - ov)
    return BoundValue(value, best_x, oracle_gap=gap, oracle_value=ov)


# -- l(x, y) -----------------------------------------------------------------


def l_xy(x: float, y: float) -> float:
    """Minimum of ((1-x)^2 a^2 + (1-y)^2 b^2) / (8 ln 2) over
    a >= (4y-2)^+, b >= (4x-2)^+, a + b >= 2 - x - y.

    If the box corner is feasible it is optimal. Otherwise the sum constraint
    is active and the minimum on the line a + b = 2 - x - y is the
    weight-proportional split, clamped to the box.
    """
    _check_unit(x)
    _check_unit(y)
    wa, wb = (1.0 - x) ** 2, (1.0 - y) ** 2
    lo_a, lo_b = max(4.0 * y - 2.0, 0.0), max(4.0 * x - 2.0, 0.0)
    s = 2.0 - x - y
    if lo_a + lo_b >= s or wa + wb == 0.0:
        a, b = lo_a, lo_b
    else:
        a = min(max(s * wb / (wa + wb), lo_a), s - lo_b)
        b = s - a
    return _clamp((wa * a * a + wb * b * b) / (8.0 * LN2))


def l_xy_oracle(x: float, y: float, step: float = LXY_ORACLE_STEP, box: float = LXY_ORACLE_BOX) -> float:
    """Minimum of the same objective over the grid (step*Z)^2 within [0, box]^2.

    For each grid ``a`` the best grid ``b`` is the smallest feasible one,
    since the objective is nondecreasing in ``b``. This is the exact 2-D grid
    minimum at the cost of a 1-D scan.
    """
    _check_unit(x)
    _check_unit(y)
    return _clamp(float(kernels.lxy_grid_oracle(float(x), float(y), float(step), float(box))))


# -- non-i.i.d. bound --------------------------------------------------------


def g_niid_oracle(c: float, d: float, step: float = NIID_ORACLE_STEP):
    """Pure dense-grid value of g(c, d); returns (value, x, y)."""
    n = _grid_points(step)
    xs = np.linspace(0.0, 1.0, n)
    h2s = kernels.binary_entropy(xs)
    v, i, j = kernels.niid_grid_min(d * xs - h2s, c * xs - h2s, xs, xs)
    return 0.5 * float(v), float(xs[i]), float(xs[j])


def g_niid(
    c: float,
    d: float,
    *,
    oracle: bool = False,
    grid_step: float = NIID_GRID_STEP,
    oracle_step: float = NIID_ORACLE_STEP,
    tol: float = NIID_TOL,
) -> BoundValue:
    """Lower bound on H(p*q) - (H(p) + H(q))/2 given H(p) = c, H(q) = d.

    The x coordinate is ||p||_inf and y is ||q||_inf. The minimum over the
    square is taken as a nested 1-D problem: the inner minimum over y is
    solved per x (grid row plus golden section), then the resulting profile
    is minimized over x. The dense oracle costs about 1e8 objective
    evaluations at the default step, so it is opt-in.
    """
    _check_rate(c)
    _check_rate(d, "d")
    n = _grid_points(grid_step)
    xs, h2s, table = _niid_tables(n)
    phi, _ = kernels.niid_profile(float(c), float(d), xs, h2s, xs, h2s, table, NIID_INNER_TOL)

    def profile(x):
        return kernels.niid_inner(float(c), float(d), x, xs, h2s, NIID_INNER_TOL)[0]

    best = (np.inf, 1.0)
    for i in _local_minima_1d(phi):
        x, v = golden_section(profile, xs[max(i - 1, 0)], xs[min(i + 1, n - 1)], tol)
        if phi[i] <= v:
            x, v = float(xs[i]), float(phi[i])
        if v < best[0]:
            best = (v, x)
    y = kernels.niid_inner(float(c), float(d), best[1], xs, h2s, NIID_INNER_TOL)[1]
    best = (best[0], best[1], float(y))
    value = _clamp(0.5 * best[0])

    gap = ov = None
    if oracle:
        ov, _, _ = g_niid_oracle(c, d, oracle_step)
        ov = _clamp(ov)
        gap = abs(value - ov)
    return BoundValue(value, best[1], best[2], oracle_gap=gap, oracle_value=ov)


# -- conditional bound -------------------------------------------------------


def g_cond_oracle(g_cc: float, step: float = COND_ORACLE_STEP):
    """Dense-grid min over delta in [0, 1/2] for a given g(c, c)."""
    ds, h2d = _cond_tables(_grid_points(step, 0.0, 0.5))
    v, k = kernels.cond_grid_min(float(g_cc), ds, h2d)
    return float(v), float(ds[k])


def g_cond(
    c: float,
    *,
    oracle: bool = True,
    grid_step: float = COND_GRID_STEP,
    oracle_step: float = COND_ORACLE_STEP,
    tol: float = COND_TOL,
) -> BoundValue:
    """Lower bound on H(X+X'|Y,Y') - H(X|Y) given H(X|Y) = c."""
    _check_rate(c)
    inner = g_niid(c, c)
    g = inner.value
    ds, h2d = _cond_tables(_grid_points(grid_step, 0.0, 0.5))
    vals = np.maximum(g - h2d, ds * ds * g)
    i = int(np.argmin(vals))

    def f(t):
        return max(g - h2(t), t * t * g)

    lo, hi = ds[max(i - 1, 0)], ds[min(i + 1, ds.size - 1)]
    delta, v = golden_section(f, lo, hi, tol)
    if vals[i] <= v:
        delta, v = float(ds[i]), float(vals[i])
    value = _clamp(v)

    gap = ov = None
    if oracle:
        ov, _ = g_cond_oracle(g, oracle_step)
        ov = _clamp(ov)
        gap = abs(value - ov)
    return BoundValue(value, inner.minimizer_x, inner.minimizer_y, delta, gap, ov)


# -- curves ------------------------------------------------------------------


def c_grid(c_max: float, step: float, c_min: float = 0.0) -> np.ndarray:
    """Evenly spaced c values from c_min to c_max inclusive."""
    if step <= 0.0:
        raise ValueError("step must be positive")
    n = int(math.floor((c_max - c_min) / step + 1e-9)) + 1
    return c_min + step * np.arange(n)


def g_iid_curve(cs: Iterable[float], **kw) -> BoundCurve:
    cs = [float(c) for c in cs]
    return BoundCurve(cs, [g_iid(c, **kw) for c in cs])


def g_niid_curve(pairs: Sequence[tuple], **kw) -> BoundCurve:
    pairs = [(float(c), float(d)) for c, d in pairs]
    return BoundCurve(pairs, [g_niid(c, d, **kw) for c, d in pairs])


def g_cond_curve(cs: Iterable[float], **kw) -> BoundCurve:
    cs = [float(c) for c in cs]
    return BoundCurve(cs, [g_cond(c, **kw) for c in cs])
