"""Quadrature tests against independent oracles.

Expected values come from closed-form antiderivatives evaluated in the
test, never from the quadrature path being checked.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad as scipy_quad

from hktaylor.errors import (
    EvaluationFailure,
    InvalidInterval,
    NonConvergence,
    UnsortedGrid,
)
from hktaylor.quadrature import (
    AUDIT_FACTOR,
    Interval,
    NO_SINGULARITY,
    SingularitySpec,
    cumulative,
    integrate,
)

K = AUDIT_FACTOR

LEFT_OSC = SingularitySpec(location=0.0, side="left", kind="oscillatory-improper")
LEFT_UNB = SingularitySpec(location=0.0, side="left", kind="unbounded")


def osc_deriv(t):
    """d/dt of t^2 sin(t^-3): HK-integrable on [0,1], not Lebesgue."""
    t = np.asarray(t, dtype=float)
    p = t ** -3.0
    return 2.0 * t * np.sin(p) - 3.0 * t ** -2.0 * np.cos(p)


def osc_primitive(x):
    return x * x * math.sin(x ** -3.0) if x > 0 else 0.0


def test_zero_integrand_is_exact():
    est = integrate(lambda t: np.zeros_like(t), Interval(0.0, 1.0),
                    NO_SINGULARITY, tol=1e-10)
    assert est.value == 0.0
    assert est.error_bound == 0.0
    assert est.converged


def test_cosine_against_antiderivative():
    est = integrate(lambda t: np.cos(np.pi * t), Interval(0.0, 0.5),
                    NO_SINGULARITY, tol=1e-10)
    exact = math.sin(math.pi * 0.5) / math.pi  # antiderivative sin(pi t)/pi
    assert est.converged
    assert est.error_bound <= 1e-10
    assert abs(est.value - exact) <= K * max(est.error_bound, 1e-15)


def test_cubic_is_exact_to_roundoff():
    est = integrate(lambda t: t ** 3, Interval(-1.0, 2.0), tol=1e-12)
    assert abs(est.value - (2.0 ** 4 - 1.0) / 4.0) < 1e-12


def test_matches_scipy_on_smooth_integrand():
    f = lambda t: np.exp(-t) * np.sin(3.0 * t)
    est = integrate(f, Interval(0.0, 2.0), tol=1e-11)
    ref, _ = scipy_quad(lambda t: math.exp(-t) * math.sin(3.0 * t), 0.0, 2.0,
                        epsabs=1e-13)
    assert abs(est.value - ref) <= K * max(est.error_bound, 1e-14)


def test_oscillatory_improper_limit_hits_exact_primitive():
    est = integrate(osc_deriv, Interval(0.0, 1.0), LEFT_OSC, tol=1e-8)
    assert est.limit_extrapolated
    assert est.converged
    assert abs(est.value - math.sin(1.0)) <= K * est.error_bound


def test_oscillatory_improper_at_deep_endpoint():
    # F(0.01) = 1e-4 sin(1e6): phase is astronomically fast here, the
    # cut walk has to lock onto the sign cells
    est = integrate(osc_deriv, Interval(0.0, 0.01), LEFT_OSC, tol=1e-9)
    assert abs(est.value - osc_primitive(0.01)) <= K * est.error_bound


def test_unbounded_endpoint_inverse_sqrt():
    est = integrate(lambda t: 1.0 / np.sqrt(t), Interval(0.0, 1.0),
                    LEFT_UNB, tol=1e-9)
    assert abs(est.value - 2.0) <= K * est.error_bound


def test_right_side_singularity_by_reflection():
    sing = SingularitySpec(location=1.0, side="right", kind="unbounded")
    est = integrate(lambda t: 1.0 / np.sqrt(1.0 - t), Interval(0.0, 1.0),
                    sing, tol=1e-9)
    assert abs(est.value - 2.0) <= K * est.error_bound


def test_interior_singularity_split():
    sing = SingularitySpec(location=0.5, side="interior", kind="unbounded")
    est = integrate(lambda t: 1.0 / np.sqrt(np.abs(t - 0.5)), Interval(0.0, 1.0),
                    sing, tol=1e-8)
    exact = 4.0 * math.sqrt(0.5)  # 2*sqrt(h) per side
    assert abs(est.value - exact) <= K * est.error_bound


def test_singularity_outside_interval_is_proper():
    est = integrate(osc_deriv, Interval(0.5, 1.0), LEFT_OSC, tol=1e-10)
    exact = osc_primitive(1.0) - osc_primitive(0.5)
    assert abs(est.value - exact) <= K * max(est.error_bound, 1e-14)
    assert not est.limit_extrapolated


def test_divergent_integrand_raises_nonconvergence():
    with pytest.raises(NonConvergence):
        integrate(lambda t: 1.0 / t, Interval(0.0, 1.0), LEFT_UNB, tol=1e-9)


def test_constant_amplitude_oscillation_raises_nonconvergence():
    # sin(log t)/t oscillates without decay: no HK integral exists
    f = lambda t: np.sin(np.log(t)) / t
    with pytest.raises(NonConvergence):
        integrate(f, Interval(0.0, 1.0), LEFT_OSC, tol=1e-9)


def test_invalid_interval_rejected():
    with pytest.raises(InvalidInterval):
        Interval(1.0, 1.0)
    with pytest.raises(InvalidInterval):
        Interval(0.0, math.inf)


def test_evaluation_failure_translated():
    def bad(t):
        raise RuntimeError("boom")

    with pytest.raises(EvaluationFailure):
        integrate(bad, Interval(0.0, 1.0), tol=1e-6)


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        integrate(lambda t: t, Interval(0.0, 1.0), tol=0.0)


# --- cumulative -----------------------------------------------------------

def test_cumulative_linear():
    ests = cumulative(lambda t: 2.0 * t, 0.0, [0.5, 1.0], tol=1e-10)
    assert abs(ests[0].value - 0.25) <= K * max(ests[0].error_bound, 1e-15)
    assert abs(ests[1].value - 1.0) <= K * max(ests[1].error_bound, 1e-15)


def test_cumulative_cosine():
    ests = cumulative(lambda t: np.cos(np.pi * t), 0.0, [0.5, 1.0], tol=1e-10)
    assert abs(ests[0].value - 1.0 / math.pi) <= K * max(ests[0].error_bound, 1e-15)
    assert abs(ests[1].value - 0.0) <= K * max(ests[1].error_bound, 1e-15)


def test_cumulative_oscillator_matches_primitive_on_grid():
    grid = [0.01, 0.05, 0.1, 0.3, 0.7, 1.0]
    ests = cumulative(osc_deriv, 0.0, grid, LEFT_OSC, tol=1e-8)
    for x, est in zip(grid, ests):
        assert abs(est.value - osc_primitive(x)) <= K * est.error_bound, x


def test_cumulative_rejects_unsorted_grid():
    with pytest.raises(UnsortedGrid):
        cumulative(lambda t: t, 0.0, [0.5, 0.2], tol=1e-8)
    with pytest.raises(UnsortedGrid):
        cumulative(lambda t: t, 0.5, [0.2, 0.7], tol=1e-8)


def test_cumulative_error_bounds_within_tol():
    ests = cumulative(lambda t: np.sin(t), 0.0, list(np.linspace(0.1, 3.0, 30)),
                      tol=1e-9)
    for est in ests:
        assert est.converged
        assert est.error_bound <= 1e-9


# --- properties -----------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.05, max_value=0.95))
def test_additivity_at_random_split(c):
    f = lambda t: np.sin(2.0 * t) + t ** 2
    whole = integrate(f, Interval(0.0, 1.0), tol=1e-10)
    left = integrate(f, Interval(0.0, c), tol=1e-10)
    right = integrate(f, Interval(c, 1.0), tol=1e-10)
    gap = abs(left.value + right.value - whole.value)
    assert gap <= K * (whole.error_bound + left.error_bound + right.error_bound
                       + 1e-14)


@pytest.mark.parametrize("tol", [1e-4, 1e-6, 1e-8])
def test_monotone_refinement(tol):
    f = lambda t: np.exp(t) * np.cos(4.0 * t)
    coarse = integrate(f, Interval(0.0, 2.0), tol=tol)
    fine = integrate(f, Interval(0.0, 2.0), tol=tol / 2.0)
    assert fine.error_bound <= coarse.error_bound


def test_estimate_addition_merges_fields():
    from hktaylor.quadrature import IntegralEstimate

    a = IntegralEstimate(1.0, 0.1, 3, True, False)
    b = IntegralEstimate(2.0, 0.2, 4, True, True)
    c = a + b
    assert c.value == 3.0
    assert c.error_bound == pytest.approx(0.3)
    assert c.subdivisions == 7
    assert c.limit_extrapolated
