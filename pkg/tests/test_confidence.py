import math

import numpy as np
import pytest
from scipy.optimize import brentq
from scipy.stats import beta as beta_dist

from signbound import (
    AgreementSummary,
    Interval,
    mean_lower_bound,
    reject_mean_at_most,
    sdr_two_sided_ci,
    sdr_upper_ci,
)
from conftest import binary_kl


class TestRejectMeanAtMost:
    def test_never_rejects_at_observed_sum(self):
        summ = AgreementSummary([8], [10], 8, 10)
        assert not reject_mean_at_most(summ, 8.0, 0.5)

    def test_equal_width_thresholds(self):
        summ = AgreementSummary([1] * 8 + [0] * 2, [1] * 10, 8, 10)
        # exponent is about -1.927; log(0.2) ~ -1.609, log(0.1) ~ -2.303
        assert reject_mean_at_most(summ, 5.0, 0.2)
        assert not reject_mean_at_most(summ, 5.0, 0.1)

    def test_alpha_domain(self):
        summ = AgreementSummary([1], [1], 1, 1)
        with pytest.raises(ValueError):
            reject_mean_at_most(summ, 0.5, 1.0)


class TestUpperCi:
    def test_single_bernoulli_analytic(self):
        # one variable on [0,1], observed 1: mu <= alpha is rejected exactly,
        # so the upper SDR bound is 1 - alpha
        ci = sdr_upper_ci(AgreementSummary([1], [1], 1, 1), 0.05)
        assert ci.upper == pytest.approx(0.95, abs=1e-6)
        assert ci.lower == 0.0
        assert ci.level == 0.95
        assert ci.side == "upper-only"

    def test_zero_agreement_gives_one(self):
        ci = sdr_upper_ci(AgreementSummary([0, 0], [1, 2], 0, 3), 0.05)
        assert ci.upper == 1.0

    def test_binomial_oracle_comparison(self):
        # 1000 unit modules, 950 agreements (SDP = 0.05), alpha = 0.05
        n, s, alpha = 1000, 950, 0.05
        summ = AgreementSummary([1] * s + [0] * (n - s), [1] * n, s, n)
        got = sdr_upper_ci(summ, alpha).upper

        # independent inversion of the equal-width exponent (KL form)
        target = -math.log(alpha) / n
        p_low = brentq(lambda p: binary_kl(s / n, p) - target, 1e-9, s / n - 1e-12)
        oracle = 1.0 - p_low
        assert got == pytest.approx(oracle, abs=1e-3)

        # must be conservative relative to the exact binomial inversion
        exact_binom_lower = beta_dist.ppf(alpha, s, n - s + 1)
        assert got > 1.0 - exact_binom_lower

    def test_monotone_in_agreement(self):
        widths = [1] * 40
        uppers = [sdr_upper_ci(AgreementSummary([1] * s + [0] * (40 - s), widths,
                                                s, 40), 0.1).upper
                  for s in (10, 20, 30, 38)]
        assert all(b <= a + 1e-12 for a, b in zip(uppers, uppers[1:]))

    def test_monotone_in_alpha(self):
        summ = AgreementSummary([1] * 24 + [0] * 6, [1] * 30, 24, 30)
        tight = sdr_upper_ci(summ, 0.2).upper
        loose = sdr_upper_ci(summ, 0.01).upper
        assert tight <= loose

    def test_contains_point_estimate(self, rng):
        for _ in range(20):
            widths = rng.integers(1, 7, rng.integers(1, 9))
            counts = rng.binomial(widths, rng.uniform(0.2, 1.0))
            summ = AgreementSummary(counts, widths, int(counts.sum()),
                                    int(widths.sum()))
            ci = sdr_upper_ci(summ, 0.1)
            assert ci.upper >= summ.sdp - 1e-12

    def test_dominates_hoeffding_inversion(self, rng):
        for _ in range(10):
            widths = rng.integers(1, 9, 12).astype(float)
            counts = rng.binomial(widths.astype(int), 0.85)
            total = widths.sum()
            s = float(counts.sum())
            alpha = 0.05
            summ = AgreementSummary(counts, widths.astype(int), int(s), int(total))
            tight_upper = sdr_upper_ci(summ, alpha).upper
            # invert -2 (s - mu)^2 / sum a^2 = log(alpha)
            mu_low_h = s - math.sqrt(math.log(1 / alpha) * np.sum(widths ** 2) / 2.0)
            hoeff_upper = min(1.0, 1.0 - max(mu_low_h, 0.0) / total)
            assert tight_upper <= hoeff_upper + 1e-9


class TestTwoSidedCi:
    def test_brackets_point_estimate(self, rng):
        for _ in range(10):
            widths = rng.integers(1, 7, 15)
            counts = rng.binomial(widths, rng.uniform(0.3, 0.95))
            summ = AgreementSummary(counts, widths, int(counts.sum()),
                                    int(widths.sum()))
            ci = sdr_two_sided_ci(summ, 0.05)
            assert ci.side == "two-sided"
            assert ci.lower - 1e-12 <= summ.sdp <= ci.upper + 1e-12

    def test_tails_match_upper_construction(self):
        summ = AgreementSummary([1] * 40 + [0] * 10, [1] * 50, 40, 50)
        two = sdr_two_sided_ci(summ, 0.10)
        one = sdr_upper_ci(summ, 0.05)
        assert two.upper == pytest.approx(one.upper, abs=1e-12)

    def test_degenerate_ends(self):
        perfect = AgreementSummary([5], [5], 5, 5)
        assert sdr_two_sided_ci(perfect, 0.1).lower == 0.0
        none = AgreementSummary([0], [5], 0, 5)
        assert sdr_two_sided_ci(none, 0.1).upper == 1.0


class TestMeanLowerBound:
    def test_zero_observation(self):
        assert mean_lower_bound([1.0, 2.0], 0.0, 0.05) == 0.0

    def test_root_property(self):
        widths = np.array([1.0] * 20)
        mu_low = mean_lower_bound(widths, 16.0, 0.05)
        from signbound import BoundProblem, tight_exponent
        at_root = tight_exponent(BoundProblem(widths, mu_low, 16.0)).log_bound
        assert at_root == pytest.approx(math.log(0.05), abs=1e-5)


class TestCoverageSmoke:
    def test_small_monte_carlo(self, rng):
        widths = rng.integers(1, 6, 25)
        probs = rng.uniform(0.55, 0.95, 25)
        true_sdr = 1.0 - float(widths @ probs) / widths.sum()
        alpha, runs, covered = 0.1, 300, 0
        for _ in range(runs):
            counts = rng.binomial(widths, probs)
            summ = AgreementSummary(counts, widths, int(counts.sum()),
                                    int(widths.sum()))
            covered += true_sdr <= sdr_upper_ci(summ, alpha).upper + 1e-12
        slack = 3 * math.sqrt(alpha * (1 - alpha) / runs)
        assert covered / runs >= 1 - alpha - slack


class TestIntervalValidation:
    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            Interval(0.6, 0.4, 0.95, "two-sided")

    def test_side_enforced(self):
        with pytest.raises(ValueError):
            Interval(0.0, 1.0, 0.95, "sideways")
