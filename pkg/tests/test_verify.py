import json
import math

import numpy as np
import pytest

from discrete_epi import bounds
from discrete_epi.dist import ConditionalPair, Pmf, conditional_entropy, convolve, entropy, shift, spread
from discrete_epi.verify import (
    CHECKS,
    InvalidTrialError,
    SuiteConfig,
    check_lemma_l1_gap_iid,
    check_lemma_l1_gap_linf,
    check_lemma_l1_gap_niid,
    check_lemma_l_combined,
    check_lemma_nonspiky_iid,
    check_lemma_pinsker_iid,
    check_lemma_pinsker_niid,
    check_lemma_spiky_iid,
    check_lemma_spiky_niid,
    check_remark4_counterexample,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    conditional_sum_entropy,
    digest,
    equalize_conditional_entropy,
    run_suite,
    trial_inputs,
)

LN2 = math.log(2.0)
U2 = Pmf.uniform(2)
SPIKY32 = Pmf.from_masses(np.r_[0.99 + 0.01 / 32, np.full(31, 0.01 / 32)])


class TestIidChecks:
    def test_theorem1_coin(self):
        r = check_theorem1(U2)
        assert r.lhs == pytest.approx(0.5, abs=1e-12)
        assert r.rhs == pytest.approx(bounds.g_iid(1.0).value)
        assert r.passed and r.rhs <= 0.5

    def test_theorem1_point_mass(self):
        r = check_theorem1(Pmf.point(4))
        assert r.lhs == 0.0 and r.rhs == 0.0 and r.margin == 0.0 and r.passed

    def test_theorem1_spiky(self):
        assert check_theorem1(SPIKY32).passed

    def test_spiky_iid(self):
        r = check_lemma_spiky_iid(Pmf(0, [0.9, 0.1]))
        h = bounds.h2(0.9)
        assert r.rhs == pytest.approx(h * 0.9 - h, abs=1e-12) and r.rhs < 0 <= r.lhs
        r = check_lemma_spiky_iid(U2)
        assert r.lhs == pytest.approx(0.5) and r.rhs == pytest.approx(-0.5)
        assert check_lemma_spiky_iid(Pmf.point(0)).margin == 0.0

    def test_l1_gap_iid_tight(self):
        r = check_lemma_l1_gap_iid(U2, 0.5)
        assert r.lhs == pytest.approx(1.0, abs=1e-15)
        assert abs(r.margin) <= 1e-9 and r.passed

    def test_l1_gap_iid_far_clusters(self):
        # the cross block A+B carries p_A*p_B in both convolutions and cancels
        p = Pmf.from_masses(np.r_[0.5, np.zeros(30), 0.5])
        r = check_lemma_l1_gap_iid(p, 0.5)
        assert r.lhs == pytest.approx(1.0, abs=1e-15) and r.rhs == 1.0
        q = Pmf.from_masses(np.r_[0.2, 0.3, np.zeros(30), 0.1, 0.4])
        assert check_lemma_l1_gap_iid(q, 0.5).lhs == pytest.approx(1.0, abs=1e-15)

    def test_l1_gap_linf(self):
        assert check_lemma_l1_gap_linf(Pmf.uniform(3), Pmf.point(0), Pmf.point(1)).rhs == 0.0
        r = check_lemma_l1_gap_linf(Pmf(0, [0.9, 0.1]), Pmf.point(0), Pmf.point(5))
        assert r.lhs >= 1.6 and r.rhs == pytest.approx(1.6)
        r = check_lemma_l1_gap_linf(Pmf.point(0), Pmf.point(0), Pmf.point(5))
        assert r.lhs == 2.0 == r.rhs and abs(r.margin) <= 1e-9

    def test_l1_gap_linf_rejects_overlap(self):
        with pytest.raises(InvalidTrialError):
            check_lemma_l1_gap_linf(U2, Pmf.uniform(3), Pmf.point(2))

    def test_pinsker_iid(self):
        r = check_lemma_pinsker_iid(U2, 0.5)
        assert r.lhs == pytest.approx(0.5)
        assert r.rhs == pytest.approx(0.25 / (2 * LN2), abs=1e-12)
        r = check_lemma_pinsker_iid(Pmf(0, [0.999, 0.001]), 1e-6)
        assert r.rhs < 1e-11 and r.passed

    def test_nonspiky_iid(self):
        r = check_lemma_nonspiky_iid(U2)
        assert r.lhs == pytest.approx(0.5) and r.rhs == pytest.approx(1 / (128 * LN2))
        r = check_lemma_nonspiky_iid(Pmf.uniform(64))
        assert r.rhs == pytest.approx(bounds.nonspiky_term(1 / 64)) and r.lhs > r.rhs
        with pytest.raises(InvalidTrialError):
            check_lemma_nonspiky_iid(Pmf.point(0))

    def test_default_alpha_used(self):
        p = Pmf(0, [0.2, 0.3, 0.5])
        assert json.loads(check_lemma_l1_gap_iid(p).input_digest)["alpha"] == 0.25


class TestNonIdenticalChecks:
    def test_theorem2_reduces_to_iid(self):
        r2 = check_theorem2(U2, U2)
        r1 = check_theorem1(U2)
        assert r2.lhs == pytest.approx(r1.lhs)
        assert r2.rhs == pytest.approx(r1.rhs, abs=1e-9)

    def test_theorem2_remark4_pair(self):
        r = check_theorem2(Pmf.uniform(2, start=1), Pmf.uniform(4, start=1))
        assert r.lhs == pytest.approx(0.75, abs=1e-12) and r.passed

    def test_theorem2_point_masses(self):
        r = check_theorem2(Pmf.point(0), Pmf.point(-3))
        assert r.lhs == 0.0 and r.rhs == 0.0

    def test_spiky_niid_symmetric_reduction(self):
        p = Pmf(0, [0.7, 0.2, 0.1])
        r = check_lemma_spiky_niid(p, p)
        one = check_lemma_spiky_iid(p)
        assert r.lhs == pytest.approx(2 * one.lhs) and r.rhs == pytest.approx(2 * one.rhs)
        assert check_lemma_spiky_niid(SPIKY32, Pmf.uniform(8)).passed
        assert check_lemma_spiky_niid(Pmf.point(0), Pmf.point(1)).margin == 0.0

    def test_l1_gap_niid(self):
        r = check_lemma_l1_gap_niid(U2, U2, 0.5, 0.5)
        assert r.lhs == pytest.approx(2.0) and abs(r.margin) <= 1e-9
        far = Pmf.from_masses(np.r_[0.5, np.zeros(40), 0.5])
        r = check_lemma_l1_gap_niid(far, far, 0.5, 0.5)
        assert r.lhs == pytest.approx(2.0, abs=1e-15)

    def test_pinsker_niid_reduces(self):
        p = Pmf(0, [0.3, 0.3, 0.4])
        r = check_lemma_pinsker_niid(p, p, 0.3, 0.3)
        one = check_lemma_pinsker_iid(p, 0.3)
        assert r.lhs == pytest.approx(one.lhs) and r.rhs == pytest.approx(one.rhs)
        assert check_lemma_pinsker_niid(U2, Pmf.uniform(4)).passed

    def test_pinsker_niid_reports_smaller_margin(self):
        p, q = Pmf.uniform(2), Pmf(0, [0.1, 0.2, 0.3, 0.4])
        r = check_lemma_pinsker_niid(p, q)
        h = entropy(convolve(p, q))
        assert r.lhs in (pytest.approx(h - entropy(p)), pytest.approx(h - entropy(q)))

    def test_l_combined(self):
        r = check_lemma_l_combined(Pmf.point(0), Pmf.point(0))
        assert r.lhs == 0.0 and r.rhs == 0.0
        r = check_lemma_l_combined(Pmf.uniform(64), Pmf.uniform(64))
        assert r.rhs == pytest.approx(bounds.l_xy(1 / 64, 1 / 64)) and r.lhs > r.rhs
        assert check_lemma_l_combined(SPIKY32, Pmf.uniform(16)).passed


class TestRemark4:
    def test_two_two(self):
        r = check_remark4_counterexample(2, 2)
        assert r.rhs == pytest.approx(0.25, abs=1e-12)
        assert r.lhs == pytest.approx(math.log2(1.5))
        assert r.passed

    @pytest.mark.parametrize("n", [2, 5, 30])
    def test_point_mass_side(self, n):
        assert check_remark4_counterexample(1, n).rhs == pytest.approx(0.0, abs=1e-12)

    def test_four_eight(self):
        r = check_remark4_counterexample(4, 8)
        assert r.rhs <= math.log2(9 / 8) + 1e-9

    def test_invalid(self):
        with pytest.raises(InvalidTrialError):
            check_remark4_counterexample(2, 1)


class TestTheorem3:
    def test_deterministic_labels_reduce(self):
        p = Pmf(0, [0.6, 0.3, 0.1])
        cp = ConditionalPair.deterministic(p)
        r = check_theorem3(cp, cp)
        assert r.lhs == pytest.approx(check_theorem1(p).lhs)

    def test_zero_entropy(self):
        a = ConditionalPair((0.5, 0.5), (Pmf.point(0), Pmf.point(9)))
        r = check_theorem3(a, a)
        assert r.lhs == 0.0 and r.rhs == 0.0 and r.passed

    def test_balanced_binary_labels(self):
        a = ConditionalPair((0.5, 0.5), (U2, Pmf.uniform(4)))
        lhs = conditional_sum_entropy(a, a) - 1.5
        by_hand = 0.25 * (1.5 + 2 * entropy(convolve(U2, Pmf.uniform(4))) + entropy(convolve(Pmf.uniform(4), Pmf.uniform(4)))) - 1.5
        assert lhs == pytest.approx(by_hand, abs=1e-12)
        r = check_theorem3(a, a)
        assert r.lhs == pytest.approx(lhs) and r.passed

    def test_rejects_unequal(self):
        with pytest.raises(InvalidTrialError):
            check_theorem3(ConditionalPair.deterministic(U2), ConditionalPair.deterministic(Pmf.uniform(4)))

    def test_equalize(self):
        a = ConditionalPair((0.3, 0.7), (Pmf.uniform(5), Pmf(0, [0.5, 0.25, 0.25])))
        b = ConditionalPair((1.0,), (Pmf.uniform(3),))
        a2, b2 = equalize_conditional_entropy(a, b)
        assert abs(conditional_entropy(a2) - conditional_entropy(b2)) <= 1e-9
        assert b2 == b
        b3, a3 = equalize_conditional_entropy(b, a)
        assert abs(conditional_entropy(a3) - conditional_entropy(b3)) <= 1e-9 and b3 == b


class TestReport:
    def test_trial_report_json_excludes_elapsed(self):
        r = check_theorem1(U2)
        d = r.to_dict()
        assert "elapsed" not in d and r.elapsed >= 0.0
        assert d["pass"] is True and d["checkName"] == "theorem1"

    def test_digest_is_canonical(self):
        assert digest(p=U2, alpha=0.5) == digest(alpha=0.5, p=U2)
        assert json.loads(digest(p=U2)) == {"p": {"offset": 0, "weights": [0.5, 0.5]}}

    def test_trial_inputs_deterministic(self):
        cfg = SuiteConfig(trials=5)
        for spec in CHECKS:
            assert repr(trial_inputs(spec, cfg)) == repr(trial_inputs(spec, cfg))

    def test_suite_small_and_deterministic(self):
        cfg = SuiteConfig(seed=7, trials=20)
        a, b = run_suite(cfg), run_suite(cfg)
        assert a.to_json() == b.to_json()
        assert not a.failures
        doc = json.loads(a.to_json())
        assert doc["suiteVersion"] == 1 and doc["seed"] == 7
        names = [c["name"] for c in doc["checks"]]
        assert names == sorted(names) and set(names) == {s.name for s in CHECKS}
        for c in doc["checks"]:
            assert c["minMargin"] >= -1e-9

    def test_seed_changes_report(self):
        a = run_suite(SuiteConfig(seed=1, trials=5, include_corpus=False, checks=("theorem1",)))
        b = run_suite(SuiteConfig(seed=2, trials=5, include_corpus=False, checks=("theorem1",)))
        assert a.to_json() != b.to_json()

    def test_min_margin_consistent(self):
        rep = run_suite(SuiteConfig(trials=10, checks=("lemma_spiky_iid", "remark4_counterexample")))
        for name, m in rep.per_check_min_margin.items():
            assert m == min(t.margin for t in rep.trials if t.check_name == name)

    def test_negative_slack_self_test(self):
        rep = run_suite(SuiteConfig(trials=10, slack=-1.0))
        assert rep.failures
        assert all((t.margin < 1.0) == (not t.passed) for t in rep.trials)
        everything = run_suite(SuiteConfig(trials=10, slack=-math.inf))
        assert len(everything.failures) == len(everything.trials)

    def test_invalid_trials_recorded(self):
        rep = run_suite(SuiteConfig(trials=3, checks=("theorem3",)))
        assert all(i["checkName"] == "theorem3" for i in rep.invalid)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SuiteConfig(support_max=1)
        with pytest.raises(ValueError):
            SuiteConfig(families=("gaussian",))

    def test_corpus_tight_cases_present(self):
        rep = run_suite(SuiteConfig(trials=0, checks=("lemma_l1_gap_iid", "lemma_l1_gap_linf")))
        tight = [t for t in rep.trials if abs(t.margin) <= 1e-9]
        kinds = {t.check_name for t in tight}
        assert kinds == {"lemma_l1_gap_iid", "lemma_l1_gap_linf"}


def test_spread_pair_in_linf_generator_is_disjoint():
    evens = spread(Pmf.uniform(4), 2)
    odds = shift(evens, 1)
    assert check_lemma_l1_gap_linf(Pmf.uniform(2), evens, odds).passed
