"""Pure-numpy kernels. Same signatures as ``_kernels_numba``."""

import math

import numpy as np

INV_8LN2 = 1.0 / (8.0 * math.log(2.0))

# rows per chunk in the dense 2-D oracle; keeps temporaries near 1e6 entries
_CHUNK_ELEMS = 1 << 20


def convolve(a, b):
    return np.convolve(a, b)


def entropy_bits(w):
    nz = w[w > 0.0]
    return float(-np.dot(nz, np.log2(nz)))


def binary_entropy(xs):
    xs = np.asarray(xs, dtype=np.float64)
    out = np.zeros_like(xs)
    inner = (xs > 0.0) & (xs < 1.0)
    x = xs[inner]
    out[inner] = -x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x)
    return out


def nonspiky(xs):
    xs = np.asarray(xs, dtype=np.float64)
    u = 1.0 - xs
    return u * u * np.maximum(u, np.maximum(4.0 * xs - 2.0, 0.0)) ** 2 * INV_8LN2


def iid_grid_min(c, xs, h2s, nsp):
    vals = np.maximum(c * xs - h2s, nsp)
    k = int(np.argmin(vals))
    return float(vals[k]), k


def lxy_array(x, y):
    """Closed-form l(x, y), elementwise over broadcastable arrays."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    wa = (1.0 - x) ** 2
    wb = (1.0 - y) ** 2
    lo_a = np.maximum(4.0 * y - 2.0, 0.0)
    lo_b = np.maximum(4.0 * x - 2.0, 0.0)
    s = 2.0 - x - y
    wsum = wa + wb
    safe = np.where(wsum > 0.0, wsum, 1.0)
    a_line = np.clip(s * wb / safe, lo_a, np.maximum(s - lo_b, lo_a))
    corner = (lo_a + lo_b >= s) | (wsum == 0.0)
    a = np.where(corner, lo_a, a_line)
    b = np.where(corner, lo_b, s - a_line)
    return (wa * a * a + wb * b * b) * INV_8LN2


def lxy_table(xs, ys):
    return lxy_array(xs[:, None], ys[None, :])


def lxy_grid_oracle(x, y, step, amax):
    n = int(round(amax / step)) + 1
    grid = np.arange(n) * step
    wa = (1.0 - x) ** 2
    wb = (1.0 - y) ** 2
    lo_a = max(4.0 * y - 2.0, 0.0)
    lo_b = max(4.0 * x - 2.0, 0.0)
    s = 2.0 - x - y
    a = grid[grid >= lo_a - 1e-9]
    need = np.maximum(lo_b, s - a)
    j = np.ceil(need / step - 1e-7).astype(np.int64)
    j = np.maximum(j, 0)
    ok = j < n
    a = a[ok]
    b = grid[j[ok]]
    return float(np.min(wa * a * a + wb * b * b) * INV_8LN2)


def niid_table(fx, gy, table):
    return np.maximum(fx[:, None] + gy[None, :], table)


def niid_grid_min(fx, gy, xs, ys):
    rows = max(1, _CHUNK_ELEMS // ys.size)
    best, bi, bj = np.inf, 0, 0
    for i0 in range(0, xs.size, rows):
        i1 = min(i0 + rows, xs.size)
        vals = np.maximum(fx[i0:i1, None] + gy[None, :], lxy_table(xs[i0:i1], ys))
        k = int(np.argmin(vals))
        v = vals.flat[k]
        if v < best:
            best = float(v)
            bi, bj = i0 + k // ys.size, k % ys.size
    return best, bi, bj


def cond_grid_min(g, ds, h2d):
    vals = np.maximum(g - h2d, ds * ds * g)
    k = int(np.argmin(vals))
    return float(vals[k]), k


INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _psi(c, fxv, x, y):
    return np.maximum(fxv + c * y - binary_entropy(y), lxy_array(x, y))


def _golden_y(c, fxv, x, lo, hi, tol):
    """Elementwise golden section over independent brackets [lo, hi]."""
    a, b = lo.copy(), hi.copy()
    p = b - INVPHI * (b - a)
    q = a + INVPHI * (b - a)
    fp, fq = _psi(c, fxv, x, p), _psi(c, fxv, x, q)
    active = b - a > tol
    while active.any():
        left = active & (fp <= fq)
        right = active & ~(fp <= fq)
        b = np.where(left, q, b)
        q_new = np.where(left, p, q)
        fq_new = np.where(left, fp, fq)
        a = np.where(right, p, a)
        p_new = np.where(right, q, p)
        fp_new = np.where(right, fq, fp)
        p_new = np.where(left, b - INVPHI * (b - a), p_new)
        q_new = np.where(right, a + INVPHI * (b - a), q_new)
        fp = np.where(left, _psi(c, fxv, x, p_new), fp_new)
        fq = np.where(right, _psi(c, fxv, x, q_new), fq_new)
        p, q = p_new, q_new
        active = b - a > tol
    take_q = fq < fp
    return np.where(take_q, q, p), np.where(take_q, fq, fp)


def _rows_inner(c, fxv, x, ys, rows, tol):
    n = ys.size
    left = np.concatenate([np.full((rows.shape[0], 1), np.inf), rows[:, :-1]], axis=1)
    right = np.concatenate([rows[:, 1:], np.full((rows.shape[0], 1), np.inf)], axis=1)
    masked = np.where((rows <= left) & (rows <= right), rows, np.inf)
    # two smallest local minima per row, ties broken by lowest index
    order = np.argsort(masked, axis=1, kind="stable")[:, :2]
    r = np.arange(rows.shape[0])
    best_v = np.full(rows.shape[0], np.inf)
    best_y = np.zeros(rows.shape[0])
    for col in range(order.shape[1]):
        k = order[:, col]
        grid_v = masked[r, k]
        ok = np.isfinite(grid_v)
        y, v = _golden_y(c, fxv, x, ys[np.maximum(k - 1, 0)], ys[np.minimum(k + 1, n - 1)], tol)
        use_grid = grid_v <= v
        y = np.where(use_grid, ys[k], y)
        v = np.where(use_grid, grid_v, v)
        better = ok & (v < best_v)
        best_v = np.where(better, v, best_v)
        best_y = np.where(better, y, best_y)
    return best_v, best_y


def niid_profile(c, d, xs, h2x, ys, h2y, table, tol):
    fx = d * xs - h2x
    rows = np.maximum(fx[:, None] + (c * ys - h2y)[None, :], table)
    return _rows_inner(c, fx, xs, ys, rows, tol)


def niid_inner(c, d, x, ys, h2y, tol):
    fxv = d * x - binary_entropy(np.array([x]))
    row = np.maximum(fxv + c * ys - h2y, lxy_array(x, ys))
    v, y = _rows_inner(c, fxv, np.array([x]), ys, row[None, :], tol)
    return float(v[0]), float(y[0])
