"""Acceptance criteria, one test each, at the stated tolerances.

Each test prints a single ``[PASS]``/``[FAIL]`` line to the terminal, so the
summary is visible in a plain ``pytest -v`` run. Run alone with

    python3 -m pytest tests/test_acceptance.py -v
"""

import csv
import io
import json
import math
import time

import numpy as np
import pytest

from discrete_epi import bounds, cli, verify
from discrete_epi.dist import Pmf, convolve, entropy, linf
from discrete_epi.explorer import boundary_construction

LN2 = math.log(2.0)


@pytest.fixture
def say(capsys):
    def emit(number, title, ok, detail, elapsed):
        tag = "PASS" if ok else "FAIL"
        with capsys.disabled():
            print(f"\n[{tag}] criterion {number}: {title} -- {detail} ({elapsed:.2f} s)")

    return emit


def cli_text(argv, capsys) -> tuple[int, str]:
    code = cli.main(argv)
    out, _ = capsys.readouterr()
    return code, out


def csv_column(text, name):
    return [float(r[name]) for r in csv.DictReader(io.StringIO(text))]


@pytest.fixture(scope="module")
def full_suite():
    cfg = verify.SuiteConfig(seed=42, trials=1000, support_max=64, slack=1e-9)
    t0 = time.perf_counter()
    report = verify.run_suite(cfg)
    return cfg, report, time.perf_counter() - t0


def test_criterion_1_curve_shape_and_asymptote(say, capsys):
    t0 = time.perf_counter()
    code, out = cli_text(["curve"], capsys)
    cs, g = csv_column(out, "c"), csv_column(out, "g")
    _, ext = cli_text(["curve", "--c-max", "300", "--step", "1"], capsys)
    ext_c, ext_g = csv_column(ext, "c"), csv_column(ext, "g")
    elapsed = time.perf_counter() - t0

    monotone = all(b >= a - 1e-9 for a, b in zip(g, g[1:]))
    reach = [c for c, v in zip(ext_c, ext_g) if v >= 0.1785]
    ok = (
        code == 0
        and cs[0] == 0.0
        and cs[-1] == pytest.approx(20.0)
        and g[0] == 0.0
        and monotone
        and max(g + ext_g) <= 0.180338
        and bool(reach)
        and elapsed < 10.0
    )
    detail = (
        f"{len(g)} rows, g(0)={g[0]}, nondecreasing={monotone}, max g={max(g + ext_g):.9f}, "
        f"first c with g>=0.1785: {reach[0] if reach else None}"
    )
    say(1, "g_iid curve shape and asymptote", ok, detail, elapsed)
    assert ok


def test_criterion_2_closed_form_vs_oracles(say):
    t0 = time.perf_counter()
    lattice = np.linspace(0.0, 1.0, 101)
    lxy_gap = max(abs(bounds.l_xy(x, y) - bounds.l_xy_oracle(x, y)) for x in lattice for y in lattice)

    iid_gap = max(bounds.g_iid(float(c)).oracle_gap for c in bounds.c_grid(20.0, 0.05))

    # g_niid: dense oracle at step 2.5e-5. The 1e-4 grid is reported alongside
    # for reference; its own discretization error exceeds 1e-5 at some points.
    niid_points = [(0.0, 0.0), (0.5, 0.5), (1.0, 1.0), (1.0, 3.0), (2.0, 2.0), (3.0, 5.0),
                   (5.0, 5.0), (0.3, 5.0), (8.0, 8.0), (5.0, 20.0), (12.0, 40.0), (20.0, 20.0)]
    niid_gap, coarse_gap = 0.0, 0.0
    for c, d in niid_points:
        b = bounds.g_niid(c, d, oracle=True, oracle_step=2.5e-5)
        niid_gap = max(niid_gap, abs(b.oracle_gap))
        coarse_gap = max(coarse_gap, bounds.g_niid_oracle(c, d, 1e-4)[0] - b.value)

    cond_gap = max(bounds.g_cond(float(c)).oracle_gap for c in bounds.c_grid(20.0, 0.5))
    elapsed = time.perf_counter() - t0

    ok = lxy_gap <= 1e-6 and iid_gap <= 1e-5 and niid_gap <= 1e-5 and cond_gap <= 1e-5 and elapsed < 60.0
    detail = (
        f"l_xy 101x101 max gap {lxy_gap:.2e}; g_iid {iid_gap:.2e}; g_niid {niid_gap:.2e} "
        f"(step 2.5e-5; step 1e-4 grid: {coarse_gap:.2e}); g_cond {cond_gap:.2e}"
    )
    say(2, "closed form vs pure-grid oracles", ok, detail, elapsed)
    assert ok


def test_criterion_3_anchor_values(say):
    t0 = time.perf_counter()
    checks = {
        "l_xy(0,0)": abs(bounds.l_xy(0.0, 0.0) - 1 / (4 * LN2)) <= 1e-9,
        "l_xy(1,1)": abs(bounds.l_xy(1.0, 1.0)) <= 1e-12,
        "g_iid(0)": abs(bounds.g_iid(0.0).value) <= 1e-12,
        "g_niid(0,0)": abs(bounds.g_niid(0.0, 0.0).value) <= 1e-12,
        "g_cond(0)": abs(bounds.g_cond(0.0).value) <= 1e-12,
    }
    ok = all(checks.values())
    say(3, "anchor values", ok, ", ".join(f"{k} {'ok' if v else 'BAD'}" for k, v in checks.items()),
        time.perf_counter() - t0)
    assert ok


def _tight_margins(report):
    u2 = json.dumps(Pmf.uniform(2).to_dict(), sort_keys=True, separators=(",", ":"))
    lemma5 = [t for t in report.trials if t.check_name == "lemma_l1_gap_iid"
              and json.loads(t.input_digest) == {"alpha": 0.5, "p": json.loads(u2)}]
    lemma6 = [t for t in report.trials if t.check_name == "lemma_l1_gap_linf"
              and len(json.loads(t.input_digest)["p"]["weights"]) == 1]
    return lemma5, lemma6


def test_criterion_4_full_suite(say, full_suite):
    cfg, report, elapsed = full_suite
    counts = {}
    for t in report.trials:
        counts[t.check_name] = counts.get(t.check_name, 0) + 1
    lemma5, lemma6 = _tight_margins(report)
    tight = [abs(t.margin) for t in lemma5 + lemma6]
    ok = (
        not report.failures
        and min(counts.values()) >= cfg.trials
        and len(counts) == len(verify.CHECKS)
        and lemma5 and lemma6
        and max(tight) <= 1e-9
        and elapsed < 300.0
    )
    worst = min(report.per_check_min_margin.items(), key=lambda kv: kv[1])
    detail = (
        f"{len(report.trials)} trials over {len(counts)} checks, {len(report.failures)} failures, "
        f"{len(report.invalid)} invalid, smallest margin {worst[1]:.3e} ({worst[0]}), "
        f"tight cases |margin| <= {max(tight):.1e} ({len(tight)} trials)"
    )
    say(4, "full verification suite", ok, detail, elapsed)
    assert ok


def test_criterion_5_uniform_pair_family(say):
    t0 = time.perf_counter()
    reports = {mn: verify.check_remark4_counterexample(*mn) for mn in [(2, 2), (2, 8), (4, 8), (8, 16)]}
    within = all(r.rhs <= math.log2((n + 1) / n) + 1e-9 for (m, n), r in reports.items())
    # independent value at (2, 2): sum of uniform{1,2} and uniform{1..4}
    masses = np.zeros(7)
    for a in (1, 2):
        for b in (1, 2, 3, 4):
            masses[a + b] += 1 / 8
    brute = -sum(v * math.log2(v) for v in masses if v > 0) - 2.0
    gap22 = reports[(2, 2)].rhs
    ok = within and abs(gap22 - 0.25) <= 1e-9 and abs(brute - 0.25) <= 1e-12
    detail = ", ".join(f"(M,N)={mn}: gap {r.rhs:.6f} <= {r.lhs:.6f}" for mn, r in reports.items())
    say(5, "uniform-pair gap family", ok, detail, time.perf_counter() - t0)
    assert ok


def test_criterion_6_boundary_achievability(say):
    t0 = time.perf_counter()
    rng = np.random.default_rng(42)
    worst = 0.0
    worst_target = 0.0
    for hp, hq in rng.uniform(0.0, 8.0, size=(100, 2)):
        p, q = boundary_construction(float(hp), float(hq))
        hp_, hq_ = entropy(p), entropy(q)
        worst = max(worst, abs(entropy(convolve(p, q)) - hp_ - hq_))
        worst_target = max(worst_target, abs(hp_ - hp), abs(hq_ - hq))
    ok = worst <= 1e-9 and worst_target <= 1e-6
    say(6, "boundary achievability", ok,
        f"100 targets, max |H(p*q)-H(p)-H(q)| = {worst:.2e}, max target miss {worst_target:.2e}",
        time.perf_counter() - t0)
    assert ok


def test_criterion_7_theorem1_chain(say, full_suite):
    cfg, _, _ = full_suite
    t0 = time.perf_counter()
    spec = verify.CHECKS_BY_NAME["theorem1"]
    inputs = verify.trial_inputs(spec, cfg)
    bad = 0
    for kw in inputs:
        p = kw["p"]
        c, x = entropy(p), linf(p)
        lhs = entropy(convolve(p, p)) - c
        combined = max(c * x - bounds.h2(x), bounds.nonspiky_term(x))
        g = bounds.g_iid(c, oracle=False).value
        if not (lhs >= combined - 1e-9 and combined >= g - 1e-9):
            bad += 1
    ok = bad == 0 and len(inputs) >= 1000
    say(7, "theorem1 chain consistency", ok, f"{len(inputs)} theorem1 trials, {bad} violations",
        time.perf_counter() - t0)
    assert ok


def test_criterion_8_determinism(say, capsys, tmp_path):
    t0 = time.perf_counter()
    runs = {
        "curve csv": ["curve"],
        "curve2d csv": ["curve2d", "--c-max", "4", "--step", "1"],
        "condcurve json": ["condcurve", "--c-max", "5", "--step", "0.5", "--format", "json"],
        "verify json": ["verify", "--seed", "42", "--trials", "100"],
    }
    same = {}
    for name, argv in runs.items():
        _, a = cli_text(argv, capsys)
        _, b = cli_text(argv, capsys)
        same[name] = a == b and len(a) > 0

    explore = ["explore", "--trials", "200", "--pairs", "4", "--budget", "200", "--conditional-trials", "20"]
    blobs = []
    for k in range(2):
        out = tmp_path / f"run{k}" / "h.csv"
        out.parent.mkdir()
        cli.main([*explore, "--out", str(out)])
        capsys.readouterr()
        blobs.append([out.read_bytes(), (out.parent / "h.deficiency.csv").read_bytes(),
                      (out.parent / "h.conditional.json").read_bytes()])
    same["explore dumps"] = blobs[0] == blobs[1]
    ok = all(same.values())
    say(8, "byte-identical outputs", ok, ", ".join(f"{k} {'identical' if v else 'DIFFER'}" for k, v in same.items()),
        time.perf_counter() - t0)
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
