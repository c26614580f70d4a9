import math

import numpy as np
import pytest

from illposed.core import (InsufficientDataError, SigmaSequence, TailLaw,
                           geometric_grid)
from illposed.counting import (counting_curve, counting_phi,
                               interval_from_counting, interval_from_sigma,
                               step_multiplier_from_sigma)
from illposed.distribution import phi_curve, superlevel_measure
from illposed.core import DistributionFunction


def harmonic_sequence():
    return SigmaSequence(1.0 / np.arange(1, 11, dtype=float))


class TestCountingPhi:
    def test_direct_enumeration(self):
        # sigma_2^2 = 0.25 > 0.2, sigma_3^2 = 1/9 < 0.2
        count = counting_phi(harmonic_sequence(), 0.2)
        assert count == (2.0, False)

    def test_zero_above_norm(self):
        assert counting_phi(harmonic_sequence(), 1.0).count == 0.0

    def test_exhausted_finite_data(self):
        count = counting_phi(harmonic_sequence(), 1e-9)
        assert count == (10.0, True)

    def test_strict_at_stored_squares(self):
        # ties are not exceedances: at eps = sigma_2^2 only sigma_1 counts
        assert counting_phi(harmonic_sequence(), 0.25).count == 1.0

    def test_law_extrapolation(self):
        n = np.arange(1, 65, dtype=float)
        seq = SigmaSequence(n ** -0.5, tail_law=TailLaw.power(0.5))
        # #{n : 1/n > 1e-6} = 999999, computed by enumeration around the root
        count = counting_phi(seq, 1e-6)
        assert count == (999999.0, False)

    def test_no_silent_extrapolation(self):
        seq = SigmaSequence(np.arange(1, 65, dtype=float) ** -0.5)
        assert counting_phi(seq, 1e-9).exhausted

    def test_monotone_in_eps(self):
        seq = harmonic_sequence()
        grid = geometric_grid(2.0, 1e-3, 40)
        counts = [counting_phi(seq, float(e)).count for e in grid]
        assert all(a <= b for a, b in zip(counts, counts[1:]))


class TestIntervalFromSigma:
    def test_exact_power_law(self):
        n = np.arange(1, 4097, dtype=float)
        seq = SigmaSequence(n ** -0.5, tail_law=TailLaw.power(0.5))
        iv = interval_from_sigma(seq)
        assert iv.classification == "moderate"
        assert iv.lower == pytest.approx(0.5)
        assert iv.upper == pytest.approx(0.5)
        assert iv.degree == pytest.approx(0.5)

    def test_sobolev_rate(self):
        n = np.arange(1, 4097, dtype=float)
        seq = SigmaSequence(n ** -0.5, tail_law=TailLaw.power(0.5))
        iv = interval_from_sigma(seq)
        assert iv.diagnostics["regression_degree"] == pytest.approx(0.5)

    def test_multivariate_window_matches_oracle(self):
        # oracle: decay exponents of log(n+1)^2/n over the upper half window;
        # the limit is 1 but at N = 65536 the window still sits near 0.55
        n = np.arange(1, 65537, dtype=float)
        vals = np.sort(np.log(n + 1.0) ** 2 / n)[::-1]
        seq = SigmaSequence(vals, tail_law=TailLaw.power_log(3))
        iv = interval_from_sigma(seq)
        w = np.arange(32768, 65537, dtype=float)
        oracle = (np.log(w) - 2.0 * np.log(np.log(w + 1.0))) / np.log(w)
        assert iv.lower == pytest.approx(oracle.min(), abs=1e-9)
        assert iv.upper == pytest.approx(oracle.max(), abs=1e-9)
        assert 0.54 < iv.lower < iv.upper < 0.57

    def test_estimate_increases_towards_limit_one(self):
        degrees = []
        for n_terms in (4096, 65536):
            n = np.arange(1, n_terms + 1, dtype=float)
            vals = np.sort(np.log(n + 1.0) ** 2 / n)[::-1]
            seq = SigmaSequence(vals, tail_law=TailLaw.power_log(3))
            degrees.append(interval_from_sigma(seq).lower)
        assert degrees[1] > degrees[0]

    def test_requires_32_values(self):
        seq = SigmaSequence(np.arange(1, 11, dtype=float) ** -1.0)
        with pytest.raises(InsufficientDataError):
            interval_from_sigma(seq)

    def test_custom_window_is_honored(self):
        n = np.arange(1, 257, dtype=float)
        seq = SigmaSequence(np.pi / n, tail_law=TailLaw.power(1.0, scale=np.pi))
        iv = interval_from_sigma(seq, window=(64, 128))
        assert iv.diagnostics["window_indices"] == (64, 128)
        # the prefactor pi biases the raw exponents below 1: the window
        # minimum is 1 - log(pi)/log(64) at its coarse end
        oracle = 1.0 - math.log(math.pi) / math.log(64.0)
        assert iv.lower == pytest.approx(oracle, abs=1e-12)
        # the regression cross-check is prefactor-free
        assert iv.diagnostics["regression_degree"] == pytest.approx(1.0)


class TestIntervalFromCounting:
    def test_exact_power_curve(self):
        grid = geometric_grid(0.5, 1e-10, 60)
        curve = DistributionFunction.build(grid, -0.5 * np.log(grid),
                                           source="counting")
        iv = interval_from_counting(curve)
        assert iv.classification == "moderate"
        assert iv.degree == pytest.approx(1.0, abs=1e-12)

    def test_log_curve_is_severe(self):
        grid = geometric_grid(0.5, 1e-12, 60)
        curve = DistributionFunction.build(
            grid, np.log(np.log(2.0 * np.pi / grid) / np.pi), source="counting")
        iv = interval_from_counting(curve)
        assert iv.classification == "severe"

    def test_exp_curve_is_mild(self):
        grid = geometric_grid(0.5, 1e-12, 60)
        curve = DistributionFunction.build(grid, grid ** -0.5,
                                           source="counting")
        iv = interval_from_counting(curve)
        assert iv.classification == "mild"

    def test_non_informative_is_indeterminate(self):
        grid = geometric_grid(0.5, 1e-3, 12)
        curve = DistributionFunction.build(grid, [math.inf] * 12,
                                           source="superlevel")
        iv = interval_from_counting(curve)
        assert iv.classification == "indeterminate"


class TestStepMultiplier:
    def test_pointwise_lookup(self):
        seq = SigmaSequence(np.array([1.0, 0.5]))
        lam, mu = step_multiplier_from_sigma(seq)
        assert lam(0.5) == 1.0
        assert lam(1.7) == 0.25
        assert mu.kind == "lebesgue_halfline"

    def test_superlevel_measure_counts_unit_cells(self):
        seq = SigmaSequence(np.array([1.0, 0.5]))
        lam, mu = step_multiplier_from_sigma(seq)
        assert superlevel_measure(lam, mu, 0.2) == 2.0

    def test_bridge_identity_exact(self):
        n = np.arange(1, 513, dtype=float)
        seq = SigmaSequence(n ** -1.0, tail_law=TailLaw.power(1.0))
        lam, mu = step_multiplier_from_sigma(seq)
        for eps in geometric_grid(0.9, 1e-5, 60):
            assert superlevel_measure(lam, mu, float(eps)) \
                == counting_phi(seq, float(eps)).count

    def test_numeric_bisection_agrees_with_counts(self):
        seq = SigmaSequence(np.arange(1, 65, dtype=float) ** -1.0)
        lam, mu = step_multiplier_from_sigma(seq)
        for eps in (0.9, 0.3, 0.011, 1e-3):
            numeric = superlevel_measure(lam, mu, eps, method="numeric")
            assert numeric == pytest.approx(counting_phi(seq, eps).count,
                                            abs=1e-8)

    def test_step_curve_equals_counting_curve(self):
        n = np.arange(1, 257, dtype=float)
        seq = SigmaSequence(n ** -0.75, tail_law=TailLaw.power(0.75))
        grid = geometric_grid(0.9, 1e-4, 40)
        lam, mu = step_multiplier_from_sigma(seq)
        a = counting_curve(seq, grid)
        b = phi_curve(lam, mu, grid)
        assert np.array_equal(a.log_phi, b.log_phi)


def test_estimator_agreement_on_power_tails():
    # window estimates from the sequence and from its counting curve agree
    for s in (0.25, 0.5, 1.0, 2.0):
        n = np.arange(1, 4097, dtype=float)
        seq = SigmaSequence(n ** -s, tail_law=TailLaw.power(s))
        iv_sigma = interval_from_sigma(seq)
        grid = geometric_grid(0.9, float(seq.values[-1] ** 2) * 1.0001, 60)
        iv_count = interval_from_counting(counting_curve(seq, grid))
        assert iv_sigma.degree is not None and iv_count.degree is not None
        assert abs(iv_sigma.degree - iv_count.degree) < 0.05
        assert abs(iv_sigma.degree - s) < 0.05
