"""Empirical probing of the set of achievable entropy triples
``(H(p*q), H(p), H(q))``.

Nothing here proves anything. Sampling, boundary constructions and
midpoint searches produce evidence; results of the conjecture-dependent
conditional bound go to a separate report so they are never confused with
implementation failures.
"""

from __future__ import annotations

import math
import time
import zlib
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .dist import (
    DEFAULT_GENERATOR_CAP,
    ConditionalPair,
    GeneratorFamily,
    Pmf,
    conditional_entropy,
    convolve,
    entropy,
    make_rng,
    random_pmf,
    spread,
)
from .verify import SLACK, SuiteConfig, TrialReport, _draw_conditional, _report, conditional_sum_entropy

BOUNDS_TOL = 1e-9
ENTROPY_MATCH_TOL = 1e-12
MAX_MIXTURE_SIZE = 1 << 12

_STREAM_SAMPLE = zlib.crc32(b"sample")
_STREAM_PROBE = zlib.crc32(b"probe")
_STREAM_THEOREM4 = zlib.crc32(b"theorem4")


@dataclass(frozen=True)
class EntropyPoint:
    h_sum: float
    h_p: float
    h_q: float
    generator: str = ""
    seed: int | None = None

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.h_sum, self.h_p, self.h_q)

    def satisfies_trivial_bounds(self, tol: float = BOUNDS_TOL) -> bool:
        s, a, b = self.as_tuple()
        return s >= max(a, b) - tol and s <= a + b + tol and min(a, b) >= -tol

    @classmethod
    def of(cls, p: Pmf, q: Pmf, generator: str = "", seed: int | None = None) -> "EntropyPoint":
        return cls(entropy(convolve(p, q)), entropy(p), entropy(q), generator, seed)


@dataclass(frozen=True)
class DeficiencyRecord:
    point_a: EntropyPoint
    point_b: EntropyPoint
    midpoint: tuple
    best: EntropyPoint
    distance: float


def _distance(u, v) -> float:
    return math.dist(u, v)


# -- sampling ----------------------------------------------------------------


def sample_entropy_set(
    seed: int,
    n: int,
    *,
    families=tuple(f.value for f in GeneratorFamily),
    support_max: int = DEFAULT_GENERATOR_CAP,
    boundary_share: float = 0.25,
) -> list[EntropyPoint]:
    """Draw ``n`` achievable triples.

    Sample ``i`` uses its own generator derived from ``(seed, i)``. A share of
    the pairs spread ``q`` by the window length of ``p`` so the upper face
    ``H(p*q) = H(p) + H(q)`` is populated too.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    for i in range(n):
        rng = make_rng(seed, _STREAM_SAMPLE, i)
        fp = families[int(rng.integers(0, len(families)))]
        fq = families[int(rng.integers(0, len(families)))]
        p = random_pmf(rng, fp, support_max=support_max)
        q = random_pmf(rng, fq, support_max=support_max)
        tag = f"{fp}/{fq}"
        if rng.random() < boundary_share:
            q = spread(q, p.size)
            tag += "/spread"
        out.append(EntropyPoint.of(p, q, tag, seed))
    return out


# -- constructions -----------------------------------------------------------


def mixture_pmf(n: int, t: float) -> Pmf:
    """``t * uniform{0..n-1} + (1 - t) * point(0)``."""
    if n < 1 or not 0.0 <= t <= 1.0:
        raise ValueError("need n >= 1 and t in [0, 1]")
    w = np.full(n, t / n)
    w[0] += 1.0 - t
    return Pmf.from_masses(w, normalize=True)


def pmf_with_entropy(h: float, n: int | None = None, tol: float = ENTROPY_MATCH_TOL) -> Pmf:
    """A mixture on ``{0..n-1}`` with entropy ``h``; ``n`` defaults to
    ``ceil(2^h)``, the shortest window that can reach it.

    Entropy of the mixture is increasing in the uniform weight, so a
    bisection on it hits any target between 0 and ``log2 n``.
    """
    if h < 0.0:
        raise ValueError("entropy target must be nonnegative")
    if h == 0.0:
        return Pmf.point(0)
    n_min = max(2, math.ceil(2.0**h - 1e-12))
    n = n_min if n is None else n
    if n < n_min:
        raise ValueError(f"window {n} cannot reach entropy {h}")
    if n > MAX_MIXTURE_SIZE:
        raise ValueError(f"target {h} needs support {n} > {MAX_MIXTURE_SIZE}")
    if abs(math.log2(n) - h) <= tol:
        return Pmf.uniform(n)
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        e = entropy(mixture_pmf(n, mid))
        if abs(e - h) <= tol:
            break
        lo, hi = (mid, hi) if e < h else (lo, mid)
    return mixture_pmf(n, 0.5 * (lo + hi))


def boundary_construction(h_p: float, h_q: float) -> tuple[Pmf, Pmf]:
    """Pair with entropies ``(h_p, h_q)`` whose sum has entropy ``h_p + h_q``.

    ``p`` lives on ``{0..M-1}`` and ``q`` is spread by ``M``, so every sum
    ``a + M b`` has a unique decomposition.
    """
    p = pmf_with_entropy(h_p)
    q = pmf_with_entropy(h_q)
    return p, spread(q, p.size)


# -- convexity probe ---------------------------------------------------------


@dataclass
class _Params:
    n_p: int
    t_p: float
    n_q: int
    t_q: float
    m: int

    def realize(self) -> tuple[Pmf, Pmf]:
        p = mixture_pmf(self.n_p, self.t_p)
        return p, spread(mixture_pmf(self.n_q, self.t_q), self.m)


def _random_params(rng, n_max) -> _Params:
    n_p = int(rng.integers(1, n_max + 1))
    return _Params(
        n_p,
        float(rng.random()),
        int(rng.integers(1, n_max + 1)),
        float(rng.random()),
        int(rng.integers(1, n_p + 1)),
    )


def _perturb(rng, prm: _Params, scale: float, n_max: int) -> _Params:
    def step_n(n):
        return int(np.clip(n + rng.integers(-2, 3), 1, n_max))

    def step_t(t):
        return float(np.clip(t + scale * rng.normal(), 0.0, 1.0))

    n_p = step_n(prm.n_p)
    m = int(np.clip(prm.m + rng.integers(-1, 2), 1, max(n_p, 1)))
    return _Params(n_p, step_t(prm.t_p), step_n(prm.n_q), step_t(prm.t_q), m)


def _matched_search(target, budget, rng) -> tuple[EntropyPoint | None, float]:
    """Hold H(p), H(q) at the target and vary window lengths and the spread
    factor, which moves only H(p*q)."""
    _, hp, hq = target
    try:
        n0p = len(pmf_with_entropy(hp).weights)
        n0q = len(pmf_with_entropy(hq).weights)
    except ValueError:
        return None, math.inf
    cap = MAX_MIXTURE_SIZE // 16
    best, best_d = None, math.inf
    cache = {}

    def matched(h, n):
        if (h, n) not in cache:
            cache[(h, n)] = pmf_with_entropy(h, n, tol=1e-10)
        return cache[(h, n)]

    for _ in range(budget):
        n_p = int(rng.integers(n0p, max(n0p, min(cap, 4 * n0p)) + 1))
        n_q = int(rng.integers(n0q, max(n0q, min(cap, 4 * n0q)) + 1))
        p, q = matched(hp, n_p), matched(hq, n_q)
        m = int(rng.integers(1, p.size + 1))
        pt = EntropyPoint.of(p, spread(q, m), "matched")
        d = _distance(pt.as_tuple(), target)
        if d < best_d:
            best, best_d = pt, d
    return best, best_d


def _nearest(target, budget, rng, candidates) -> tuple[EntropyPoint, float]:
    best, best_d = None, math.inf
    for pt in candidates:
        d = _distance(pt.as_tuple(), target)
        if d < best_d:
            best, best_d = pt, d
    if best_d == 0.0:
        return best, 0.0

    pt, d = _matched_search(target, budget // 2, rng)
    if d < best_d:
        best, best_d = pt, d

    n_max = min(MAX_MIXTURE_SIZE // 16, max(2, math.ceil(2.0 ** max(target)) + 1))
    evals = budget // 2
    while evals < budget:
        prm = _random_params(rng, n_max)
        cur = EntropyPoint.of(*prm.realize(), "probe")
        cur_d = _distance(cur.as_tuple(), target)
        evals += 1
        scale = 0.25
        stall = 0
        while evals < budget and stall < 20:
            cand = _perturb(rng, prm, scale, n_max)
            pt = EntropyPoint.of(*cand.realize(), "probe")
            d = _distance(pt.as_tuple(), target)
            evals += 1
            if d < cur_d:
                prm, cur, cur_d, stall = cand, pt, d, 0
            else:
                stall += 1
                scale = max(scale * 0.7, 1e-6)
        if cur_d < best_d:
            best, best_d = cur, cur_d
    return best, best_d


def probe_convexity(
    points, budget: int = 2000, seed: int = 0, pairs: int | None = None
) -> list[DeficiencyRecord]:
    """For sampled pairs of points, search for an achievable triple near
    their midpoint and record the smallest Euclidean distance found.

    The search starts from both endpoints and the entropy-matched boundary
    pair. Half of ``budget`` goes to entropy-matched mixtures with random
    window lengths and spread factors; the rest goes to random-restart local
    moves over ``p = mix(uniform{0..n_p-1}, point), q = spread(mix(...), m)``.
    """
    points = list(points)
    if len(points) < 2:
        raise ValueError("need at least two points")
    all_pairs = [(i, j) for i in range(len(points)) for j in range(i + 1, len(points))]
    if pairs is not None and pairs < len(all_pairs):
        pick = make_rng(seed, _STREAM_PROBE).choice(len(all_pairs), size=pairs, replace=False)
        all_pairs = [all_pairs[k] for k in sorted(pick)]

    out = []
    for k, (i, j) in enumerate(all_pairs):
        a, b = points[i], points[j]
        mid = tuple(0.5 * (u + v) for u, v in zip(a.as_tuple(), b.as_tuple()))
        candidates = [a, b]
        try:
            candidates.append(EntropyPoint.of(*boundary_construction(mid[1], mid[2]), "boundary"))
        except ValueError:
            pass
        rng = make_rng(seed, _STREAM_PROBE, k)
        best, d = _nearest(mid, budget, rng, candidates)
        out.append(DeficiencyRecord(a, b, mid, best, d))
    return out


# -- conditional bound under the convexity hypothesis ------------------------


def check_theorem4_conditional(cp_a: ConditionalPair, cp_b: ConditionalPair, *, slack: float = SLACK) -> TrialReport:
    """``H(X+X'|Y,Y') - (c+d)/2`` against ``g_niid(c, d)``.

    The bound is only established if the entropy set has convex closure, so
    a failing margin is evidence about that hypothesis.
    """
    t0 = time.perf_counter()
    c, d = conditional_entropy(cp_a), conditional_entropy(cp_b)
    lhs = conditional_sum_entropy(cp_a, cp_b) - 0.5 * (c + d)
    return _report("theorem4_conditional", lhs, bounds.g_niid(c, d).value, t0, slack, a=cp_a, b=cp_b)


@dataclass
class ConjectureReport:
    """Quarantined channel: failures here are not implementation errors."""

    seed: int
    trials: list = field(default_factory=list)

    @property
    def counterevidence(self) -> list:
        return [t for t in self.trials if not t.passed]

    def to_dict(self) -> dict:
        margins = [t.margin for t in self.trials]
        return {
            "channel": "conjecture-dependent",
            "seed": self.seed,
            "trials": len(self.trials),
            "minMargin": float(f"{min(margins):.12g}") if margins else None,
            "counterevidence": [t.to_dict() for t in self.counterevidence],
        }


def run_theorem4(seed: int, trials: int, support_max: int = DEFAULT_GENERATOR_CAP, slack: float = SLACK):
    cfg = SuiteConfig(seed=seed, trials=trials, support_max=support_max, slack=slack)
    report = ConjectureReport(seed)
    for t in range(trials):
        rng = make_rng(seed, _STREAM_THEOREM4, t)
        r = check_theorem4_conditional(_draw_conditional(rng, cfg), _draw_conditional(rng, cfg), slack=slack)
        report.trials.append(TrialReport(**{**r.__dict__, "seed": seed, "trial": t}))
    return report
