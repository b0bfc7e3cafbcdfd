"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends are imported directly, so the env flag does not matter here.
Each kernel is checked for agreement before it is timed.
"""

import argparse
import time

import numpy as np

from discrete_epi import bounds, kernels


def _best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    rng = np.random.default_rng(0)
    a = rng.random(4096)
    a /= a.sum()
    b = rng.random(4096)
    b /= b.sum()
    sparse = np.zeros(64 * 255 + 1)
    sparse[::255] = 1.0 / 65
    xs = np.linspace(0.0, 1.0, bounds._grid_points(bounds.IID_GRID_STEP))
    h2s = np.array([bounds.h2(x) for x in xs])
    nsp = np.array([bounds.nonspiky_term(x) for x in xs])
    nx = bounds._grid_points(bounds.NIID_GRID_STEP)
    gx = np.linspace(0.0, 1.0, nx)
    h2g = np.array([bounds.h2(x) for x in gx])
    ox = np.linspace(0.0, 1.0, bounds._grid_points(bounds.NIID_ORACLE_STEP))
    f5 = 5.0 * ox - np.array([bounds.h2(x) for x in ox])
    return {
        "convolve 4096x4096": lambda k: k.convolve(a, b),
        "convolve spread 256x16321": lambda k: k.convolve(a[:256], sparse),
        "entropy_bits 1e6": lambda k: k.entropy_bits(np.full(10**6, 1e-6)),
        "iid_grid_min c=3": lambda k: k.iid_grid_min(3.0, xs, h2s, nsp),
        "lxy_grid_oracle step 1e-4": lambda k: k.lxy_grid_oracle(0.3, 0.7, 1e-4, 4.0),
        "lxy_table 1001^2": lambda k: k.lxy_table(gx, gx),
        "niid_profile c=d=5": lambda k: k.niid_profile(
            5.0, 5.0, gx, h2g, gx, h2g, k.lxy_table(gx, gx), bounds.NIID_INNER_TOL
        ),
        "niid_grid_min 10001^2": lambda k: k.niid_grid_min(f5, f5, ox, ox),
    }


def _same(u, v):
    if isinstance(u, tuple):
        return all(_same(a, b) for a, b in zip(u, v))
    return np.allclose(u, v, rtol=1e-12, atol=1e-14)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    ref = kernels.backend("numpy")
    try:
        fast = kernels.backend("numba")
    except ImportError:
        print("numba not installed; nothing to compare")
        return

    print(f"{'kernel':28s} {'numpy [s]':>11s} {'numba [s]':>11s} {'speedup':>8s}")
    for name, run in cases().items():
        run(fast)  # compile
        if not _same(run(ref), run(fast)):
            raise SystemExit(f"{name}: backends disagree")
        t_np = _best_of(lambda: run(ref), args.repeat)
        t_nb = _best_of(lambda: run(fast), args.repeat)
        print(f"{name:28s} {t_np:11.5f} {t_nb:11.5f} {t_np / t_nb:8.1f}")


if __name__ == "__main__":
    main()
