"""numba kernels. Same signatures as ``_kernels_numpy``."""

import math

import numpy as np
from numba import njit

INV_8LN2 = 1.0 / (8.0 * math.log(2.0))


@njit(cache=True)
def convolve(a, b):
    # outer loop over the longer input so zero runs in spread laws are skipped
    if a.size < b.size:
        a, b = b, a
    n, m = a.size, b.size
    out = np.zeros(n + m - 1)
    for i in range(n):
        ai = a[i]
        if ai == 0.0:
            continue
        for j in range(m):
            out[i + j] += ai * b[j]
    return out


@njit(cache=True)
def entropy_bits(w):
    # Neumaier-compensated sum; long supports would otherwise drift ~1e-10
    acc = 0.0
    comp = 0.0
    for v in w:
        if v > 0.0:
            term = -v * math.log2(v)
            t = acc + term
            if abs(acc) >= abs(term):
                comp += (acc - t) + term
            else:
                comp += (term - t) + acc
            acc = t
    return acc + comp


@njit(cache=True)
def _h2(x):
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


@njit(cache=True)
def binary_entropy(xs):
    out = np.empty(xs.size)
    for i in range(xs.size):
        out[i] = _h2(xs[i])
    return out


@njit(cache=True)
def nonspiky(xs):
    out = np.empty(xs.size)
    for i in range(xs.size):
        u = 1.0 - xs[i]
        r = max(u, max(4.0 * xs[i] - 2.0, 0.0))
        out[i] = u * u * r * r * INV_8LN2
    return out


@njit(cache=True)
def iid_grid_min(c, xs, h2s, nsp):
    best = np.inf
    k = 0
    for i in range(xs.size):
        v = max(c * xs[i] - h2s[i], nsp[i])
        if v < best:
            best = v
            k = i
    return best, k


@njit(cache=True)
def _lxy(x, y):
    wa = (1.0 - x) * (1.0 - x)
    wb = (1.0 - y) * (1.0 - y)
    lo_a = max(4.0 * y - 2.0, 0.0)
    lo_b = max(4.0 * x - 2.0, 0.0)
    s = 2.0 - x - y
    wsum = wa + wb
    if lo_a + lo_b >= s or wsum == 0.0:
        a, b = lo_a, lo_b
    else:
        a = min(max(s * wb / wsum, lo_a), s - lo_b)
        b = s - a
    return (wa * a * a + wb * b * b) * INV_8LN2


@njit(cache=True)
def lxy_array(x, y):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = _lxy(x[i], y[i])
    return out


@njit(cache=True)
def lxy_table(xs, ys):
    out = np.empty((xs.size, ys.size))
    for i in range(xs.size):
        for j in range(ys.size):
            out[i, j] = _lxy(xs[i], ys[j])
    return out


@njit(cache=True)
def lxy_grid_oracle(x, y, step, amax):
    n = int(round(amax / step)) + 1
    wa = (1.0 - x) * (1.0 - x)
    wb = (1.0 - y) * (1.0 - y)
    lo_a = max(4.0 * y - 2.0, 0.0)
    lo_b = max(4.0 * x - 2.0, 0.0)
    s = 2.0 - x - y
    best = np.inf
    for i in range(n):
        a = i * step
        if a < lo_a - 1e-9:
            continue
        j = max(int(math.ceil(max(lo_b, s - a) / step - 1e-7)), 0)
        if j >= n:
            continue
        b = j * step
        v = wa * a * a + wb * b * b
        if v < best:
            best = v
    return best * INV_8LN2


@njit(cache=True)
def niid_table(fx, gy, table):
    out = np.empty(table.shape)
    for i in range(fx.size):
        for j in range(gy.size):
            out[i, j] = max(fx[i] + gy[j], table[i, j])
    return out


@njit(cache=True)
def niid_grid_min(fx, gy, xs, ys):
    best = np.inf
    bi = 0
    bj = 0
    for i in range(xs.size):
        for j in range(ys.size):
            f = fx[i] + gy[j]
            if f >= best:
                continue
            v = max(f, _lxy(xs[i], ys[j]))
            if v < best:
                best = v
                bi = i
                bj = j
    return best, bi, bj


@njit(cache=True)
def cond_grid_min(g, ds, h2d):
    best = np.inf
    k = 0
    for i in range(ds.size):
        v = max(g - h2d[i], ds[i] * ds[i] * g)
        if v < best:
            best = v
            k = i
    return best, k


INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@njit(cache=True)
def _psi(c, fxv, x, y):
    return max(fxv + c * y - _h2(y), _lxy(x, y))


@njit(cache=True)
def _golden_y(c, fxv, x, lo, hi, tol):
    a, b = lo, hi
    p = b - INVPHI * (b - a)
    q = a + INVPHI * (b - a)
    fp = _psi(c, fxv, x, p)
    fq = _psi(c, fxv, x, q)
    while b - a > tol:
        if fp <= fq:
            b, q, fq = q, p, fp
            p = b - INVPHI * (b - a)
            fp = _psi(c, fxv, x, p)
        else:
            a, p, fp = p, q, fq
            q = a + INVPHI * (b - a)
            fq = _psi(c, fxv, x, q)
    yb, vb = p, fp
    if fq < vb:
        yb, vb = q, fq
    return yb, vb


@njit(cache=True)
def _row_inner(c, fxv, x, ys, row, tol):
    n = ys.size
    k1, k2 = -1, -1
    v1, v2 = np.inf, np.inf
    for j in range(n):
        v = row[j]
        if (j == 0 or v <= row[j - 1]) and (j == n - 1 or v <= row[j + 1]):
            if v < v1:
                k2, v2 = k1, v1
                k1, v1 = j, v
            elif v < v2:
                k2, v2 = j, v
    best_v, best_y = np.inf, 0.0
    for k in (k1, k2):
        if k < 0:
            continue
        y, v = _golden_y(c, fxv, x, ys[max(k - 1, 0)], ys[min(k + 1, n - 1)], tol)
        if row[k] <= v:
            y, v = ys[k], row[k]
        if v < best_v:
            best_v, best_y = v, y
    return best_v, best_y


@njit(cache=True)
def niid_profile(c, d, xs, h2x, ys, h2y, table, tol):
    phi = np.empty(xs.size)
    yopt = np.empty(xs.size)
    row = np.empty(ys.size)
    for i in range(xs.size):
        fxv = d * xs[i] - h2x[i]
        for j in range(ys.size):
            row[j] = max(fxv + c * ys[j] - h2y[j], table[i, j])
        phi[i], yopt[i] = _row_inner(c, fxv, xs[i], ys, row, tol)
    return phi, yopt


@njit(cache=True)
def niid_inner(c, d, x, ys, h2y, tol):
    fxv = d * x - _h2(x)
    row = np.empty(ys.size)
    for j in range(ys.size):
        row[j] = max(fxv + c * ys[j] - h2y[j], _lxy(x, ys[j]))
    return _row_inner(c, fxv, x, ys, row, tol)
