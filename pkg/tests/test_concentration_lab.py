import math

import numpy as np
import pytest

from zograd.concentration_lab import (
    beta_raw_moment,
    chi_min_threshold,
    freedman_tail,
    laurent_massart_bound,
    max_bernstein_tail,
    suffix_sum_lower_bound,
    uniform_suffix_rhs,
    validate_beta_projection,
    validate_chi_min,
    validate_laurent_massart,
    validate_linear_martingale,
    validate_quadratic_term,
    validate_uniform_suffix,
)
from zograd.numerics import RngStream
from zograd.objectives import ParameterError
from zograd.theory import rho_weights


def _slack(delta, trials):
    return 3.0 * math.sqrt(delta * (1.0 - delta) / trials)


class TestBetaRawMoment:
    def test_mean_d5(self):
        assert beta_raw_moment(1, 0.5, 2.0) == pytest.approx(1.0 / 5.0)

    def test_empty_product(self):
        assert beta_raw_moment(0, 0.5, 2.0) == 1.0

    def test_second_moment_hand(self):
        assert beta_raw_moment(2, 0.5, 2.0) == pytest.approx(3.0 / 35.0)

    def test_telescoping(self):
        a, b = 0.5, 4.5
        for m in range(5):
            ratio = beta_raw_moment(m + 1, a, b) / beta_raw_moment(m, a, b)
            assert ratio == pytest.approx((a + m) / (a + b + m))

    def test_invalid_params(self):
        with pytest.raises(ParameterError):
            beta_raw_moment(1, 0.0, 1.0)


class TestBetaProjection:
    @pytest.mark.parametrize("d", [2, 5, 100])
    def test_moment_checks_pass(self, d):
        report = validate_beta_projection(d, 10**5, RngStream(50 + d))
        assert report.violations == 0

    def test_d1_rejected(self):
        with pytest.raises(ParameterError):
            validate_beta_projection(1, 10**4, RngStream(1))

    def test_harvested_samples_path(self):
        rng = RngStream(51)
        samples = rng.generator.beta(0.5, 4.5, size=10**5)  # d = 10 law
        report = validate_beta_projection(10, 0, rng, samples=samples)
        assert report.violations == 0


class TestLaurentMassart:
    def test_hand_value(self):
        assert laurent_massart_bound([1.0, 1.0, 1.0, 1.0], math.exp(-1)) == pytest.approx(10.0)

    def test_delta_one_limit(self):
        w = [0.3, 0.2, 0.1]
        assert laurent_massart_bound(w, 1.0 - 1e-15) == pytest.approx(sum(w))

    def test_empty(self):
        assert laurent_massart_bound([], 0.5) == 0.0

    def test_negative_weight_rejected(self):
        with pytest.raises(ParameterError):
            laurent_massart_bound([1.0, -0.1], 0.5)

    def test_monte_carlo_tail(self):
        rng = RngStream(52)
        weights = rng.generator.uniform(0.1, 2.0, size=15)
        delta, trials = 0.05, 10**4
        report = validate_laurent_massart(weights, delta, trials, rng)
        assert report.empirical_rate <= delta + _slack(delta, trials)


class TestChiMin:
    def test_threshold_hand_value(self):
        assert chi_min_threshold(1, 100, math.exp(-1)) == pytest.approx(80.0)

    def test_corollary_threshold_above_half(self):
        N, delta = 50, 0.1
        k = math.ceil(16.0 * math.log(N / delta))
        assert chi_min_threshold(N, k, delta) >= k / 2.0

    def test_violation_rate(self):
        delta, trials = 0.1, 2000
        report = validate_chi_min(100, 200, delta, trials, RngStream(53))
        assert report.empirical_rate <= delta + _slack(delta, trials)


class TestSuffixSumLowerBound:
    def test_hand_value_vacuous(self):
        # Uniform weights, T=8, delta=1/e, d=2: (8 - 2*4 - 2)/2 = -1.
        assert suffix_sum_lower_bound([1.0] * 8, 2, math.exp(-1), -1) == pytest.approx(-1.0)

    def test_delta_one_limit(self):
        w = [1.0, 0.5, 0.25]
        assert suffix_sum_lower_bound(w, 3, 1.0 - 1e-15, 0) == pytest.approx(0.75 / 3)

    def test_increasing_weights_rejected(self):
        with pytest.raises(ParameterError):
            suffix_sum_lower_bound([0.5, 1.0], 2, 0.1, -1)

    def test_uniform_matches_simplified_form(self):
        # With w = 1 and T >= 24 log(1/delta), the bound dominates the
        # simplified expression T/(2d) - 4 log(1/delta)/d.
        d = 3
        for delta in (math.exp(-1), 0.1, 0.01):
            lam = math.log(1.0 / delta)
            for T in (math.ceil(24 * lam), 100 + math.ceil(24 * lam), 1000):
                lower = suffix_sum_lower_bound([1.0] * T, d, delta, -1)
                assert lower >= T / (2.0 * d) - 4.0 * lam / d - 1e-12

    def test_matches_rho_exponent(self):
        # With w_t = 1/(t+T0) the bound is the (negated, 1/d-scaled)
        # exponent of the corresponding decay weight.
        K, T0, delta, d = 40, 30.0, 0.1, 7
        w = [1.0 / (t + T0) for t in range(K)]
        lower = suffix_sum_lower_bound(w, d, delta, -1)
        rho_K, _ = rho_weights(K, 0, T0, delta, delta)
        assert rho_K == pytest.approx(math.exp(-d * lower))


class TestUniformSuffix:
    def test_rhs_hand_value(self):
        # Suffix length 500, d=10, delta=1/e.
        T, k = 501, 0
        rhs = uniform_suffix_rhs(T, 10, math.exp(-1), np.array([k]))[0]
        expected = 25.0 - 25.0 * (2.0 + math.log(math.log(1002.0)))
        assert rhs == pytest.approx(expected)
        assert rhs == pytest.approx(-73.32, abs=0.01)

    def test_all_ones_never_violates(self):
        series = [np.ones(100) for _ in range(5)]
        report = validate_uniform_suffix(100, 4, 0.1, 5, RngStream(54), zeta_source=series)
        assert report.violations == 0

    def test_iid_source_rate(self):
        delta, trials = 0.1, 100
        report = validate_uniform_suffix(500, 10, delta, trials, RngStream(55))
        assert report.empirical_rate <= delta + _slack(delta, trials)


class TestTailFormulas:
    def test_freedman_hand_value(self):
        assert freedman_tail(2.0, 1.0, 1.0) == pytest.approx(math.exp(-2.0 / 3.0))
        assert freedman_tail(2.0, 1.0, 1.0) == pytest.approx(0.513417, abs=1e-6)

    def test_freedman_small_tau_near_one(self):
        assert freedman_tail(1e-9, 1.0, 1.0) == pytest.approx(1.0)

    def test_freedman_decreasing(self):
        values = [freedman_tail(t, 1.0, 0.5) for t in (0.5, 1.0, 2.0, 4.0)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_max_bernstein_decreasing(self):
        values = [max_bernstein_tail(x, 100, 1.0, 1.0) for x in (1.0, 5.0, 20.0)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_max_bernstein_empirical_soundness(self):
        # Random-sign walk with +/-1 steps: v^2 = b = 1.  The running
        # maximum must exceed x no more often than the tail bound allows.
        N, x, trials = 100, 25.0, 2000
        rng = RngStream(56)
        steps = rng.generator.integers(0, 2, size=(trials, N)) * 2 - 1
        running_max = np.maximum.accumulate(np.cumsum(steps, axis=1), axis=1)[:, -1]
        freq = np.mean(running_max >= x)
        tail = max_bernstein_tail(x, N, 1.0, 1.0)
        assert freq <= tail + 3.0 * math.sqrt(tail / trials)

    def test_parameter_errors(self):
        with pytest.raises(ParameterError):
            freedman_tail(0.0, 1.0, 1.0)
        with pytest.raises(ParameterError):
            max_bernstein_tail(1.0, 0, 1.0, 1.0)


class TestMartingaleValidators:
    def test_linear_martingale_rate(self):
        delta, trials = 0.05, 500
        report = validate_linear_martingale(100, 50.0, 1.0, trials, RngStream(57), delta=delta)
        assert report.empirical_rate <= delta + _slack(delta, trials)

    def test_linear_martingale_zero_noise(self):
        report = validate_linear_martingale(50, 50.0, 0.0, 100, RngStream(58))
        assert report.violations == 0

    def test_quadratic_term_rate(self):
        delta, trials = 0.05, 1000
        report = validate_quadratic_term(100, 100.0, 1.0, delta, trials, RngStream(59))
        assert report.empirical_rate <= delta + _slack(delta, trials)

    def test_quadratic_term_zero_noise(self):
        report = validate_quadratic_term(50, 100.0, 0.0, 0.05, 100, RngStream(60))
        assert report.violations == 0


def test_report_invariants():
    report = validate_chi_min(10, 50, 0.2, 500, RngStream(61))
    assert report.empirical_rate == report.violations / report.trials
    assert 0.0 <= report.empirical_rate <= 1.0
    assert report.margin == pytest.approx(report.claimed_delta - report.empirical_rate)
