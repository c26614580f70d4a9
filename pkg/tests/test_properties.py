import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from illposed.core import (MONOTONE_TAIL, MeasureSpace, Multiplier,
                           SigmaSequence, classify, geometric_grid, ratio)
from illposed.counting import counting_phi, step_multiplier_from_sigma
from illposed.distribution import (decreasing_rearrangement, phi_curve,
                                   superlevel_measure)
from illposed.core import DistributionFunction, LEBESGUE_HALFLINE


HALF = MeasureSpace(LEBESGUE_HALFLINE)

positive = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False,
                     allow_infinity=False)


@given(s=st.floats(min_value=0.05, max_value=20.0),
       eps=st.floats(min_value=1e-30, max_value=0.9))
def test_ratio_recovers_exact_power_law_exponent(s, eps):
    # Phi = eps^(-1/(2 s)) pointwise
    log_phi = -math.log(eps) / (2.0 * s)
    assume(log_phi > 1e-12)
    assert ratio(eps, log_phi) == pytest.approx(s, rel=1e-12)


@given(lower=st.floats(min_value=0.0, max_value=100.0),
       width=st.floats(min_value=0.0, max_value=100.0))
def test_classify_is_total_on_valid_intervals(lower, width):
    cls, degree = classify(lower, lower + width)
    assert cls in ("mild", "moderate", "severe", "indeterminate")
    if degree is not None:
        assert cls == "moderate"
        assert lower <= degree <= lower + width


sigma_lists = st.lists(st.floats(min_value=1e-8, max_value=10.0),
                       min_size=1, max_size=40).map(
    lambda vals: np.sort(np.asarray(vals))[::-1])


@given(values=sigma_lists, eps=st.floats(min_value=1e-9, max_value=200.0))
def test_counting_phi_counts_strict_exceedances(values, eps):
    seq = SigmaSequence(values)
    count = counting_phi(seq, eps).count
    brute = sum(1 for v in values if v * v > eps)
    assert count == brute


@given(values=sigma_lists,
       eps_pair=st.tuples(st.floats(min_value=1e-9, max_value=200.0),
                          st.floats(min_value=1e-9, max_value=200.0)))
def test_counting_phi_nonincreasing_in_eps(values, eps_pair):
    seq = SigmaSequence(values)
    lo, hi = sorted(eps_pair)
    assert counting_phi(seq, lo).count >= counting_phi(seq, hi).count


@given(values=sigma_lists, eps=st.floats(min_value=1e-9, max_value=200.0))
@settings(max_examples=50, deadline=None)
def test_step_multiplier_bridge_identity(values, eps):
    seq = SigmaSequence(values)
    lam, mu = step_multiplier_from_sigma(seq)
    measure = superlevel_measure(lam, mu, eps)
    assert measure == counting_phi(seq, eps).count
    assert float(measure).is_integer()


@given(frac=st.floats(min_value=0.0, max_value=0.999), values=sigma_lists)
def test_counting_right_continuity_at_stored_squares(frac, values):
    seq = SigmaSequence(values)
    k = int(frac * len(values))
    eps = float(values[k]) ** 2
    # at a stored square the count excludes every tie
    count = counting_phi(seq, eps).count
    assert count == sum(1 for v in values if v * v > eps)


@given(s=st.floats(min_value=0.2, max_value=3.0),
       c=st.floats(min_value=0.5, max_value=5.0))
@settings(max_examples=25, deadline=None)
def test_phi_curves_are_monotone(s, c):
    lam = Multiplier(fn=lambda w: c / (1.0 + w) ** s, shape=MONOTONE_TAIL,
                     sup_bound=c)
    grid = geometric_grid(0.9 * c, 1e-6 * c, 40)
    curve = phi_curve(lam, HALF, grid)  # construction enforces monotonicity
    finite = curve.log_phi[np.isfinite(curve.log_phi)]
    assert np.all(np.diff(finite) >= -1e-12)


@given(s=st.floats(min_value=0.3, max_value=3.0),
       t=st.floats(min_value=1e-3, max_value=1e3))
@settings(max_examples=40, deadline=None)
def test_rearrangement_inverts_power_curves(s, t):
    # Phi(tau) = tau^(-1/(2s)) has inverse lambda*(t) = t^(-2s)
    grid = geometric_grid(0.9, 1e-12, 120)
    curve = DistributionFunction.build(grid, -np.log(grid) / (2.0 * s),
                                       source="counting", sup_bound=math.inf)
    expected = t ** (-2.0 * s)
    assume(curve.log_phi[0] < math.log(t) < curve.log_phi[-1])
    got = decreasing_rearrangement(curve, t)
    assert got == pytest.approx(expected, rel=1e-9)


@given(t_pair=st.tuples(st.floats(min_value=1e-2, max_value=1e2),
                        st.floats(min_value=1e-2, max_value=1e2)))
@settings(max_examples=40, deadline=None)
def test_rearrangement_is_nonincreasing(t_pair):
    grid = geometric_grid(0.9, 1e-10, 80)
    curve = DistributionFunction.build(
        grid, np.log(2.0) - 0.7 * np.log(grid), source="counting",
        sup_bound=1.0)
    lo, hi = sorted(t_pair)
    assert decreasing_rearrangement(curve, lo) \
        >= decreasing_rearrangement(curve, hi)
