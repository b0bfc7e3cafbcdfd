"""Numerical checks of the entropy-gap inequalities and a seeded trial runner.

Every check returns a :class:`TrialReport` oriented so that the inequality
reads ``lhs >= rhs``; a trial passes when ``lhs - rhs >= -slack``.
"""

from __future__ import annotations

import json
import math
import time
import zlib
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import bounds
from .dist import (
    ConditionalPair,
    GeneratorFamily,
    Pmf,
    SplitError,
    SupportSizeError,
    conditional_entropy,
    convolve,
    disjoint,
    entropy,
    find_split_point,
    l1_dist,
    linf,
    make_rng,
    mix,
    random_pmf,
    shift,
    split_at,
    spread,
)

SUITE_VERSION = 1
SLACK = 1e-9
EQUAL_ENTROPY_TOL = 1e-9
LN2 = math.log(2.0)


class InvalidTrialError(ValueError):
    """Inputs violate the preconditions of a check."""


@dataclass(frozen=True)
class TrialReport:
    check_name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    input_digest: str
    seed: int | None = None
    trial: int | None = None
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        # elapsed is wall-clock and would break byte-identical reports
        return {
            "checkName": self.check_name,
            "seed": self.seed,
            "trial": self.trial,
            "inputDigest": self.input_digest,
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "margin": _num(self.margin),
            "pass": self.passed,
        }


def _num(x: float) -> float:
    """Round to 12 significant digits for stable serialized output."""
    return float(f"{x:.12g}")


def _jsonable(v):
    if isinstance(v, Pmf):
        return v.to_dict()
    if isinstance(v, ConditionalPair):
        return v.to_dict()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def digest(**inputs) -> str:
    return json.dumps({k: _jsonable(v) for k, v in inputs.items()}, sort_keys=True, separators=(",", ":"))


def _report(name, lhs, rhs, t0, slack, **inputs) -> TrialReport:
    lhs, rhs = float(lhs), float(rhs)
    margin = lhs - rhs
    return TrialReport(
        check_name=name,
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        passed=margin >= -slack,
        input_digest=digest(**inputs),
        elapsed=time.perf_counter() - t0,
    )


def _split(p: Pmf, alpha: float):
    return split_at(p, find_split_point(p, alpha))


def default_alpha(p: Pmf) -> float:
    return (1.0 - linf(p)) / 2.0


# -- i.i.d. chain ------------------------------------------------------------


def check_theorem1(p: Pmf, *, slack: float = SLACK) -> TrialReport:
    t0 = time.perf_counter()
    c = entropy(p)
    lhs = entropy(convolve(p, p)) - c
    return _report("theorem1", lhs, bounds.g_iid(c, oracle=False).value, t0, slack, p=p)


def check_lemma_spiky_iid(p: Pmf, *, slack: float = SLACK) -> TrialReport:
    t0 = time.perf_counter()
    c, x = entropy(p), linf(p)
    lhs = entropy(convolve(p, p)) - c
    return _report("lemma_spiky_iid", lhs, c * x - bounds.h2(x), t0, slack, p=p)


def check_lemma_l1_gap_iid(p: Pmf, alpha: float | None = None, *, slack: float = SLACK) -> TrialReport:
    t0 = time.perf_counter()
    alpha = default_alpha(p) if alpha is None else alpha
    s = _split(p, alpha)
    lhs = l1_dist(convolve(p, s.lower), convolve(p, s.upper))
    return _report("lemma_l1_gap_iid", lhs, 2.0 * alpha, t0, slack, p=p, alpha=alpha)


def check_lemma_l1_gap_linf(p: Pmf, p1: Pmf, p2: Pmf, *, slack: float = SLACK) -> TrialReport:
    t0 = time.perf_counter()
    if not disjoint(p1, p2):
        raise InvalidTrialError("p1 and p2 must have disjoint supports")
    lhs = l1_dist(convolve(p, p1), convolve(p, p2))
    rhs = 2.0 * max(2.0 * linf(p) - 1.0, 0.0)
    return _report("lemma_l1_gap_linf", lhs, rhs, t0, slack, p=p, p1=p1, p2=p2)


def check_lemma_pinsker_iid(p: Pmf, alpha: float | None = None, *, slack: float = SLACK) -> TrialReport:
    t0 = time.perf_counter()
    alpha = default_alpha(p) if alpha is None else alpha
    s = _split(p, alpha)
    gap = l1_dist(convolve(p, s.lower), convolve(p, s.upper))
    lhs = entropy(convolve(p, p)) - entropy(p)
    rhs = alpha**2 / (2.0 * LN2) * gap**2
    return _report("lemma_pinsker_iid", lhs, rhs, t0, slack, p=p, alpha=alpha)


def check_lemma_nonspiky_iid(p: Pmf, *, slack: float = SLACK) -> TrialReport:
    t0 = time.perf_counter()
    if p.size < 2:
        raise InvalidTrialError("needs support of size >= 2")
    lhs = entropy(convolve(p, p)) - entropy(p)
    return _report("lemma_nonspiky_iid", lhs, bounds.nonspiky_term(linf(p)), t0, slack, p=p)


# -- independent, non-identical chain ----------------------------------------


def check_theorem2(p: Pmf, q: Pmf, *, slack: float = SLACK) -> TrialReport:
    t0 = time.perf_counter()
    c, d = entropy(p), entropy(q)
    lhs = entropy(convolve(p, q)) - (c + d) / 2.0
    return _report("theorem2", lhs, bounds.g_niid(c, d).value, t0, slack, p=p, q=q)


def check_lemma_spiky_niid(p: Pmf, q: Pmf, *, slack: float = SLACK) -> TrialReport:
    t0 = time.perf_counter()
    c, d = entropy(p), entropy(q)
    x, y = linf(p), linf(q)
    lhs = 2.0 * entropy(convolve(p, q)) - c - d
    rhs = d * x - bounds.h2(x) + c * y - bounds.h2(y)
    return _report("lemma_spiky_niid", lhs, rhs, t0, slack, p=p, q=q)


def _cross_gaps(p, q, alpha, beta):
    sp, sq = _split(p, alpha), _split(q, beta)
    a = l1_dist(convolve(q, sp.lower), convolve(q, sp.upper))
    b = l1_dist(convolve(p, sq.lower), convolve(p, sq.upper))
    return a, b


def check_lemma_l1_gap_niid(
    p: Pmf, q: Pmf, alpha: float | None = None, beta: float | None = None, *, slack: float = SLACK
) -> TrialReport:
    t0 = time.perf_counter()
    alpha = default_alpha(p) if alpha is None else alpha
    beta = default_alpha(q) if beta is None else beta
    a, b = _cross_gaps(p, q, alpha, beta)
    return _report("lemma_l1_gap_niid", a + b, 2.0 * (alpha + beta), t0, slack, p=p, q=q, alpha=alpha, beta=beta)


def check_lemma_pinsker_niid(
    p: Pmf, q: Pmf, alpha: float | None = None, beta: float | None = None, *, slack: float = SLACK
) -> TrialReport:
    """Both one-sided Pinsker bounds; the report carries the tighter one."""
    t0 = time.perf_counter()
    alpha = default_alpha(p) if alpha is None else alpha
    beta = default_alpha(q) if beta is None else beta
    a, b = _cross_gaps(p, q, alpha, beta)
    c, d = entropy(p), entropy(q)
    h = entropy(convolve(p, q))
    first = (h - d, alpha**2 / (2.0 * LN2) * a**2)
    second = (h - c, beta**2 / (2.0 * LN2) * b**2)
    lhs, rhs = min(first, second, key=lambda s: s[0] - s[1])
    return _report("lemma_pinsker_niid", lhs, rhs, t0, slack, p=p, q=q, alpha=alpha, beta=beta)


def check_lemma_l_combined(p: Pmf, q: Pmf, *, slack: float = SLACK) -> TrialReport:
    t0 = time.perf_counter()
    lhs = 2.0 * entropy(convolve(p, q)) - entropy(p) - entropy(q)
    return _report("lemma_l_combined", lhs, bounds.l_xy(linf(p), linf(q)), t0, slack, p=p, q=q)


def remark4_pair(m: int, n: int) -> tuple[Pmf, Pmf]:
    """Uniform laws on {1..m} and {1..n*m}."""
    return Pmf.uniform(m, start=1), Pmf.uniform(n * m, start=1)


def check_remark4_counterexample(m: int, n: int, *, slack: float = SLACK) -> TrialReport:
    """Upper-bound check: lhs is log2((n+1)/n), rhs the observed gap
    H(p1*p2) - max(H(p1), H(p2))."""
    t0 = time.perf_counter()
    if m < 1 or n < 2:
        raise InvalidTrialError("need m >= 1 and n >= 2")
    p1, p2 = remark4_pair(m, n)
    gap = entropy(convolve(p1, p2)) - max(entropy(p1), entropy(p2))
    return _report("remark4_counterexample", math.log2((n + 1) / n), gap, t0, slack, m=m, n=n)


# -- conditional -------------------------------------------------------------


def conditional_sum_entropy(a: ConditionalPair, b: ConditionalPair) -> float:
    """H(X + X' | Y, Y') for independent pairs."""
    total = 0.0
    for wi, pi in zip(a.label_weights, a.conditionals):
        for wj, pj in zip(b.label_weights, b.conditionals):
            if wi > 0.0 and wj > 0.0:
                total += wi * wj * entropy(convolve(pi, pj))
    return total


def check_theorem3(cp_a: ConditionalPair, cp_b: ConditionalPair, *, slack: float = SLACK) -> TrialReport:
    t0 = time.perf_counter()
    ca, cb = conditional_entropy(cp_a), conditional_entropy(cp_b)
    if abs(ca - cb) > EQUAL_ENTROPY_TOL:
        raise InvalidTrialError(f"conditional entropies differ: {ca} vs {cb}")
    c = 0.5 * (ca + cb)
    lhs = conditional_sum_entropy(cp_a, cp_b) - c
    return _report("theorem3", lhs, bounds.g_cond(c, oracle=False).value, t0, slack, a=cp_a, b=cp_b)


def _toward_modes(cp: ConditionalPair, t: float) -> ConditionalPair:
    conds = []
    for p in cp.conditionals:
        mode = p.offset + int(np.argmax(p.weights))
        conds.append(mix(p, Pmf.point(mode), t) if t > 0.0 else p)
    return ConditionalPair(cp.label_weights, conds)


def equalize_conditional_entropy(a: ConditionalPair, b: ConditionalPair, tol: float = 1e-12):
    """Lower the larger H(X|Y) by mixing its conditionals with a point mass
    at their modes until both sides match.

    Mixing toward the mode is monotone in the mixing weight because the
    min-entropy never exceeds the Shannon entropy.
    """
    ca, cb = conditional_entropy(a), conditional_entropy(b)
    swap = ca < cb
    hi, target = (b, ca) if swap else (a, cb)
    lo_t, hi_t = 0.0, 1.0
    best = hi
    for _ in range(200):
        cur = conditional_entropy(best)
        if abs(cur - target) <= tol:
            break
        mid = 0.5 * (lo_t + hi_t)
        cand = _toward_modes(hi, mid)
        if conditional_entropy(cand) > target:
            lo_t = mid
        else:
            hi_t = mid
        best = cand
    return (a, best) if swap else (best, b)


# -- trial generation --------------------------------------------------------


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 42
    trials: int = 1000
    support_max: int = 64
    slack: float = SLACK
    families: tuple = tuple(f.value for f in GeneratorFamily)
    include_corpus: bool = True
    checks: tuple | None = None

    def __post_init__(self):
        if self.trials < 0:
            raise ValueError("trials must be >= 0")
        if self.support_max < 2:
            raise ValueError("support_max must be >= 2")
        for f in self.families:
            GeneratorFamily(f)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["families"] = list(self.families)
        d["checks"] = list(self.checks) if self.checks is not None else None
        return d


def _draw(rng, cfg, min_size=1):
    family = cfg.families[int(rng.integers(0, len(cfg.families)))]
    return random_pmf(rng, family, support_max=cfg.support_max, min_size=min_size)


def _draw_alpha(rng, p):
    top = default_alpha(p)
    if rng.random() < 0.5:
        return top
    return top * (1.0 - rng.random())


def _draw_disjoint(rng, cfg):
    mode = int(rng.integers(0, 3))
    half = max(2, cfg.support_max // 2)
    if mode == 0:
        r = random_pmf(rng, "flat", support_max=cfg.support_max, min_size=2)
        s = split_at(r, find_split_point(r, default_alpha(r)))
        return s.lower, s.upper
    r1 = random_pmf(rng, "flat", support_max=half)
    r2 = random_pmf(rng, "flat", support_max=half)
    if mode == 1:
        # interlaced supports: evens and odds
        return spread(shift(r1, -r1.offset), 2), shift(spread(shift(r2, -r2.offset), 2), 1)
    return shift(r1, -r1.offset), shift(r2, -r2.offset + r1.size + int(rng.integers(0, half)))


def _draw_conditional(rng, cfg):
    labels = int(rng.integers(1, 3))
    if labels == 1:
        w = (1.0,)
    else:
        t = float(rng.uniform(0.001, 0.999)) if rng.random() < 0.2 else float(rng.uniform(0.05, 0.95))
        w = (t, 1.0 - t)
    return ConditionalPair(w, tuple(_draw(rng, cfg) for _ in w))


def _corpus_pmfs() -> list[Pmf]:
    tail32 = np.full(32, 0.01 / 32)
    tail32[0] += 0.99
    geo = 0.5 ** np.arange(1, 30)
    binom = np.array([math.comb(20, k) for k in range(21)], dtype=float)
    wide = np.zeros(64)
    wide[0] = wide[-1] = 0.5
    return [
        Pmf.point(0),
        Pmf.uniform(2),
        Pmf(0, [0.9, 0.1]),
        Pmf(0, [0.99, 0.01]),
        Pmf(0, wide),
        Pmf(0, [0.2, 0.3, 0.5]),
        Pmf.uniform(4),
        Pmf.uniform(16),
        Pmf.uniform(64),
        Pmf.from_masses(tail32, normalize=True),
        Pmf.from_masses([0.4, 0.6 / 7, 0.6 / 7, 0.6 / 7, 0.6 / 7, 0.6 / 7, 0.6 / 7, 0.6 / 7], normalize=True),
        spread(Pmf.uniform(4), 8),
        Pmf.from_masses(np.r_[np.full(4, 0.125), np.zeros(40), np.full(4, 0.125)], normalize=True),
        Pmf.from_masses(geo, normalize=True),
        Pmf.from_masses(binom, normalize=True),
    ]


def _corpus(name: str) -> list[dict]:
    pmfs = _corpus_pmfs()
    multi = [p for p in pmfs if p.size >= 2]
    if name in ("theorem1", "lemma_spiky_iid"):
        return [{"p": p} for p in pmfs]
    if name == "lemma_nonspiky_iid":
        return [{"p": p} for p in multi]
    if name in ("lemma_l1_gap_iid", "lemma_pinsker_iid"):
        return [{"p": Pmf.uniform(2), "alpha": 0.5}] + [{"p": p} for p in multi]
    if name == "lemma_l1_gap_linf":
        d0, d5 = Pmf.point(0), Pmf.point(5)
        evens, odds = spread(Pmf.uniform(8), 2), shift(spread(Pmf.uniform(8), 2), 1)
        return [{"p": p, "p1": d0, "p2": d5} for p in pmfs] + [{"p": p, "p1": evens, "p2": odds} for p in pmfs]
    if name in ("theorem2", "lemma_spiky_niid", "lemma_l_combined"):
        return [{"p": p, "q": q} for p in pmfs for q in pmfs]
    if name in ("lemma_l1_gap_niid", "lemma_pinsker_niid"):
        return [{"p": Pmf.uniform(2), "q": Pmf.uniform(2), "alpha": 0.5, "beta": 0.5}] + [
            {"p": p, "q": q} for p in multi for q in multi
        ]
    if name == "remark4_counterexample":
        return [{"m": m, "n": n} for m, n in [(1, 2), (1, 16), (2, 2), (2, 8), (3, 5), (4, 8), (8, 16)]]
    if name == "theorem3":
        u2, u4 = Pmf.uniform(2), Pmf.uniform(4)
        out = [{"cp_a": ConditionalPair.deterministic(p), "cp_b": ConditionalPair.deterministic(p)} for p in pmfs]
        zero = ConditionalPair((0.5, 0.5), (Pmf.point(0), Pmf.point(3)))
        out.append({"cp_a": zero, "cp_b": ConditionalPair.deterministic(Pmf.point(1))})
        # H = 1/2*1 + 1/2*2 = 1.5 on both sides
        mixed = ConditionalPair((0.5, 0.5), (u2, u4))
        out.append({"cp_a": mixed, "cp_b": mixed})
        out.append({"cp_a": mixed, "cp_b": ConditionalPair((0.5, 0.5), (Pmf.point(7), Pmf.uniform(8)))})
        return out
    return []


def _gen_p(rng, cfg):
    return {"p": _draw(rng, cfg)}


def _gen_p_split(rng, cfg):
    p = _draw(rng, cfg, min_size=2)
    return {"p": p, "alpha": _draw_alpha(rng, p)}


def _gen_p_multi(rng, cfg):
    return {"p": _draw(rng, cfg, min_size=2)}


def _gen_linf(rng, cfg):
    p1, p2 = _draw_disjoint(rng, cfg)
    return {"p": _draw(rng, cfg), "p1": p1, "p2": p2}


def _gen_pq(rng, cfg):
    return {"p": _draw(rng, cfg), "q": _draw(rng, cfg)}


def _gen_pq_split(rng, cfg):
    p, q = _draw(rng, cfg, min_size=2), _draw(rng, cfg, min_size=2)
    return {"p": p, "q": q, "alpha": _draw_alpha(rng, p), "beta": _draw_alpha(rng, q)}


def _gen_remark4(rng, cfg):
    return {"m": int(rng.integers(1, 9)), "n": int(rng.integers(2, 17))}


def _gen_theorem3(rng, cfg):
    a, b = equalize_conditional_entropy(_draw_conditional(rng, cfg), _draw_conditional(rng, cfg))
    return {"cp_a": a, "cp_b": b}


@dataclass(frozen=True)
class CheckSpec:
    name: str
    fn: Callable
    generate: Callable


CHECKS: tuple[CheckSpec, ...] = (
    CheckSpec("theorem1", check_theorem1, _gen_p),
    CheckSpec("theorem2", check_theorem2, _gen_pq),
    CheckSpec("theorem3", check_theorem3, _gen_theorem3),
    CheckSpec("lemma_spiky_iid", check_lemma_spiky_iid, _gen_p),
    CheckSpec("lemma_l1_gap_iid", check_lemma_l1_gap_iid, _gen_p_split),
    CheckSpec("lemma_l1_gap_linf", check_lemma_l1_gap_linf, _gen_linf),
    CheckSpec("lemma_pinsker_iid", check_lemma_pinsker_iid, _gen_p_split),
    CheckSpec("lemma_nonspiky_iid", check_lemma_nonspiky_iid, _gen_p_multi),
    CheckSpec("lemma_spiky_niid", check_lemma_spiky_niid, _gen_pq),
    CheckSpec("lemma_l1_gap_niid", check_lemma_l1_gap_niid, _gen_pq_split),
    CheckSpec("lemma_pinsker_niid", check_lemma_pinsker_niid, _gen_pq_split),
    CheckSpec("lemma_l_combined", check_lemma_l_combined, _gen_pq),
    CheckSpec("remark4_counterexample", check_remark4_counterexample, _gen_remark4),
)
CHECKS_BY_NAME = {spec.name: spec for spec in CHECKS}


def trial_rng(seed: int, check_name: str, trial: int) -> np.random.Generator:
    """Private generator for one trial, independent of execution order."""
    return make_rng(seed, zlib.crc32(check_name.encode()), trial)


def trial_inputs(spec: CheckSpec, cfg: SuiteConfig) -> list[dict]:
    """All inputs the suite feeds to one check: random trials, then corpus."""
    out = [spec.generate(trial_rng(cfg.seed, spec.name, t), cfg) for t in range(cfg.trials)]
    if cfg.include_corpus:
        out.extend(_corpus(spec.name))
    return out


# -- suite -------------------------------------------------------------------


@dataclass
class SuiteReport:
    config: SuiteConfig
    trials: list = field(default_factory=list)
    invalid: list = field(default_factory=list)

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def failures(self) -> list:
        return [t for t in self.trials if not t.passed]

    @property
    def per_check_min_margin(self) -> dict:
        out = {}
        for t in self.trials:
            out[t.check_name] = min(out.get(t.check_name, math.inf), t.margin)
        return out

    def to_dict(self) -> dict:
        checks = []
        mins = self.per_check_min_margin
        names = sorted({t.check_name for t in self.trials} | {i["checkName"] for i in self.invalid})
        for name in names:
            rows = [t for t in self.trials if t.check_name == name]
            checks.append(
                {
                    "name": name,
                    "trials": len(rows),
                    "minMargin": _num(mins[name]) if name in mins else None,
                    "failures": [t.to_dict() for t in rows if not t.passed],
                    "invalid": [i for i in self.invalid if i["checkName"] == name],
                }
            )
        return {
            "suiteVersion": SUITE_VERSION,
            "seed": self.config.seed,
            "config": self.config.to_dict(),
            "checks": checks,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"


def run_suite(config: SuiteConfig | None = None) -> SuiteReport:
    """Run every selected check on its generated trials plus the fixed corpus.

    Deterministic in the config: trial ``t`` of check ``name`` draws from its
    own generator seeded by ``(seed, crc32(name), t)``.
    """
    cfg = config or SuiteConfig()
    names = cfg.checks if cfg.checks is not None else [s.name for s in CHECKS]
    report = SuiteReport(cfg)
    for name in sorted(names):
        spec = CHECKS_BY_NAME[name]
        for t, kwargs in enumerate(trial_inputs(spec, cfg)):
            try:
                r = spec.fn(**kwargs, slack=cfg.slack)
            except (InvalidTrialError, SplitError, SupportSizeError) as exc:
                report.invalid.append({"checkName": name, "trial": t, "error": str(exc)})
                continue
            report.trials.append(
                TrialReport(**{**asdict(r), "seed": cfg.seed, "trial": t})
            )
    return report
