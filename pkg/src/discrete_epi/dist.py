"""Finite-support distributions on the integers.

A :class:`Pmf` stores an integer ``offset`` and a weight vector for the
consecutive integers ``offset, offset + 1, ...``. Instances are kept in
canonical trimmed form (nonzero first and last weight) so that equality is
well defined. All entropies are in bits.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from . import kernels

NORM_TOL = 1e-12
FLUSH_TOL = 1e-15
DEFAULT_SUPPORT_CAP = 1 << 20
DEFAULT_GENERATOR_CAP = 64

# direct convolution below this many multiply-adds, FFT above
FFT_THRESHOLD = 5e7


class SupportSizeError(ValueError):
    """A result would exceed the configured support-size cap."""


class SplitError(ValueError):
    """A split point does not exist or leaves one side empty."""


class Pmf:
    """Probability mass function on ``offset, offset + 1, ...``."""

    __slots__ = ("offset", "weights")

    def __init__(self, offset: int, weights):
        w = np.array(weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(w)) or np.any(w < 0.0):
            raise ValueError("weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        if w[0] <= 0.0 or w[-1] <= 0.0:
            raise ValueError("endpoints must carry positive mass (use Pmf.from_masses)")
        w.flags.writeable = False
        self.offset = int(offset)
        self.weights = w

    @classmethod
    def from_masses(cls, masses, offset: int = 0, normalize: bool = False) -> "Pmf":
        """Flush masses below 1e-15, trim zero ends and optionally renormalize."""
        w = np.array(masses, dtype=np.float64)
        w[w < FLUSH_TOL] = 0.0
        nz = np.flatnonzero(w)
        if nz.size == 0:
            raise ValueError("no positive mass")
        w = w[nz[0] : nz[-1] + 1]
        if normalize:
            w = w / w.sum()
        return cls(offset + int(nz[0]), w)

    @classmethod
    def point(cls, k: int = 0) -> "Pmf":
        return cls(k, [1.0])

    @classmethod
    def uniform(cls, n: int, start: int = 0) -> "Pmf":
        if n < 1:
            raise ValueError("n must be positive")
        return cls(start, np.full(n, 1.0 / n))

    @classmethod
    def from_dict(cls, data: dict) -> "Pmf":
        return cls(data["offset"], data["weights"])

    def to_dict(self) -> dict:
        return {"offset": self.offset, "weights": self.weights.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def last(self) -> int:
        return self.offset + self.weights.size - 1

    def support(self) -> np.ndarray:
        """Integers carrying positive mass."""
        return self.offset + np.flatnonzero(self.weights)

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.weights)

    def allclose(self, other: "Pmf", atol: float = 1e-12) -> bool:
        if self.offset != other.offset or self.size != other.size:
            return False
        return bool(np.allclose(self.weights, other.weights, rtol=0.0, atol=atol))

    def __eq__(self, other):
        if not isinstance(other, Pmf):
            return NotImplemented
        return self.offset == other.offset and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.offset, self.weights.tobytes()))

    def __repr__(self):
        return f"Pmf(offset={self.offset}, weights={self.weights.tolist()!r})"


@dataclass(frozen=True)
class ConditionalPair:
    """Joint law of (X, Y): label distribution plus X | Y=i for each label."""

    label_weights: tuple
    conditionals: tuple

    def __post_init__(self):
        lw = tuple(float(v) for v in self.label_weights)
        conds = tuple(self.conditionals)
        if len(lw) != len(conds) or not lw:
            raise ValueError("need one conditional per label")
        if any(v < 0.0 for v in lw) or abs(sum(lw) - 1.0) > NORM_TOL:
            raise ValueError("label weights must be a probability vector")
        if not all(isinstance(p, Pmf) for p in conds):
            raise TypeError("conditionals must be Pmf instances")
        object.__setattr__(self, "label_weights", lw)
        object.__setattr__(self, "conditionals", conds)

    @classmethod
    def deterministic(cls, p: Pmf) -> "ConditionalPair":
        return cls((1.0,), (p,))

    def to_dict(self) -> dict:
        return {
            "labelWeights": list(self.label_weights),
            "conditionals": [p.to_dict() for p in self.conditionals],
        }


@dataclass(frozen=True)
class SplitResult:
    lower: Pmf
    upper: Pmf
    lower_mass: float


def entropy(p: Pmf) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    h = float(kernels.entropy_bits(p.weights))
    return h if h > 0.0 else 0.0


def linf(p: Pmf) -> float:
    return float(p.weights.max())


def convolve(p: Pmf, q: Pmf, cap: int = DEFAULT_SUPPORT_CAP) -> Pmf:
    """Law of X + X' for independent X ~ p, X' ~ q."""
    n = p.size + q.size - 1
    if n > cap:
        raise SupportSizeError(f"convolution support {n} exceeds cap {cap}")
    if p.size * q.size > FFT_THRESHOLD:
        w = fftconvolve(p.weights, q.weights)
        w[w < 0.0] = 0.0
        return Pmf.from_masses(w, p.offset + q.offset, normalize=True)
    w = kernels.convolve(p.weights, q.weights)
    return Pmf.from_masses(w, p.offset + q.offset)


def _aligned(p: Pmf, q: Pmf):
    lo = min(p.offset, q.offset)
    hi = max(p.last, q.last)
    a = np.zeros(hi - lo + 1)
    b = np.zeros(hi - lo + 1)
    a[p.offset - lo : p.last - lo + 1] = p.weights
    b[q.offset - lo : q.last - lo + 1] = q.weights
    return a, b


def l1_dist(p: Pmf, q: Pmf) -> float:
    a, b = _aligned(p, q)
    return float(np.abs(a - b).sum())


def disjoint(p: Pmf, q: Pmf) -> bool:
    a, b = _aligned(p, q)
    return not np.any((a > 0.0) & (b > 0.0))


def shift(p: Pmf, k: int) -> Pmf:
    return Pmf(p.offset + int(k), p.weights)


def spread(q: Pmf, m: int, cap: int = DEFAULT_SUPPORT_CAP) -> Pmf:
    """Dilate the support by ``m``: mass at k moves to m*k."""
    if m < 1:
        raise ValueError("spread factor must be >= 1")
    n = (q.size - 1) * m + 1
    if n > cap:
        raise SupportSizeError(f"spread support {n} exceeds cap {cap}")
    w = np.zeros(n)
    w[::m] = q.weights
    return Pmf(q.offset * m, w)


def split_at(p: Pmf, n: int) -> SplitResult:
    """Renormalized restrictions of p to (-inf, n] and [n+1, inf)."""
    if n < p.offset or n >= p.last:
        raise SplitError(f"split at {n} leaves a side empty for support [{p.offset}, {p.last}]")
    k = n - p.offset + 1
    lo_w, hi_w = p.weights[:k], p.weights[k:]
    mass = float(lo_w.sum())
    if not 0.0 < mass < 1.0:
        raise SplitError(f"lower mass {mass} not in (0, 1)")
    lower = Pmf.from_masses(lo_w / mass, p.offset)
    upper = Pmf.from_masses(hi_w / hi_w.sum(), p.offset + k)
    return SplitResult(lower, upper, mass)


def find_split_point(p: Pmf, alpha: float) -> int:
    """Smallest n with alpha <= p((-inf, n]) <= 1 - alpha."""
    if not 0.0 < alpha <= 0.5:
        raise ValueError("alpha must lie in (0, 1/2]")
    cdf = p.cdf()
    slack = 1e-12
    for k in range(p.size - 1):
        if alpha - slack <= cdf[k] <= 1.0 - alpha + slack:
            return p.offset + k
    raise SplitError(f"no split point with alpha={alpha}")


def conditional_entropy(cp: ConditionalPair) -> float:
    return float(sum(w * entropy(p) for w, p in zip(cp.label_weights, cp.conditionals) if w > 0.0))


def mix(p: Pmf, q: Pmf, t: float) -> Pmf:
    """The mixture (1 - t) p + t q."""
    a, b = _aligned(p, q)
    return Pmf.from_masses((1.0 - t) * a + t * b, min(p.offset, q.offset), normalize=True)


# -- random generation -------------------------------------------------------


class GeneratorFamily(str, enum.Enum):
    FLAT = "flat"
    SPIKY = "spiky"
    TWO_CLUSTER = "two-cluster"
    SPREAD = "spread"


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Deterministic generator for (seed, stream...)."""
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, *[int(s) for s in stream]])


def _flat_weights(gen, n):
    w = gen.exponential(size=n)
    return w / w.sum()


def random_pmf(
    gen: np.random.Generator,
    family: GeneratorFamily | str = GeneratorFamily.FLAT,
    *,
    support_max: int = DEFAULT_GENERATOR_CAP,
    min_size: int = 1,
    size: int | None = None,
    spike: float | None = None,
) -> Pmf:
    """Draw a random pmf whose window length is at most ``support_max``.

    ``size`` fixes the window length where the family allows it; ``spike``
    fixes the point-mass weight of the spiky family.
    """
    family = GeneratorFamily(family)
    if support_max < 1:
        raise ValueError("support_max must be >= 1")
    if min_size < 1 or min_size > support_max:
        raise ValueError("min_size must be in [1, support_max]")
    if size is not None and not min_size <= size <= support_max:
        raise ValueError("size must be in [min_size, support_max]")
    offset = int(gen.integers(-support_max, support_max + 1))

    if family is GeneratorFamily.FLAT or support_max < 3:
        n = size if size is not None else int(gen.integers(min_size, support_max + 1))
        return Pmf.from_masses(_flat_weights(gen, n), offset, normalize=True)

    if family is GeneratorFamily.SPIKY:
        n = size if size is not None else int(gen.integers(max(2, min_size), support_max + 1))
        x = spike if spike is not None else float(gen.uniform(0.5, 0.999))
        if not 0.0 <= x <= 1.0:
            raise ValueError("spike must be in [0, 1]")
        w = (1.0 - x) * _flat_weights(gen, n)
        w[int(gen.integers(0, n))] += x
        return Pmf.from_masses(w, offset, normalize=True)

    if family is GeneratorFamily.TWO_CLUSTER:
        total = size if size is not None else int(gen.integers(max(3, min_size), support_max + 1))
        total = max(total, 3)
        gap = int(gen.integers(1, total - 1))
        n1 = int(gen.integers(1, total - gap))
        n2 = total - gap - n1
        t = float(gen.uniform(0.05, 0.95))
        w = np.concatenate([t * _flat_weights(gen, n1), np.zeros(gap), (1.0 - t) * _flat_weights(gen, n2)])
        return Pmf.from_masses(w, offset, normalize=True)

    # spread composite: window (m - 1) * factor + 1 <= support_max
    m = int(gen.integers(2, (support_max - 1) // 2 + 2))
    factor = int(gen.integers(2, (support_max - 1) // (m - 1) + 1))
    base = Pmf.from_masses(_flat_weights(gen, m), 0, normalize=True)
    return shift(spread(base, factor), offset)

