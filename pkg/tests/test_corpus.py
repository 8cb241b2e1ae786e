"""Corpus construction tests: closed forms, disjointness, derivative chains."""

import math

import numpy as np
import pytest

from hktaylor.corpus import (
    DEFAULT_LABELS,
    BumpSumParams,
    WeierstrassParams,
    make_bump_sum,
    make_hk_oscillator,
    make_weierstrass_taylor,
    parse_label,
    registry_lookup,
)
from hktaylor.corpus import _iterated_cos_primitive
from hktaylor.errors import InvalidParams, UnknownFunction
from hktaylor.quadrature import Interval, integrate
from hktaylor.taylor import finite_difference_errors

PARAMS_I = BumpSumParams.from_values(5.5, 2.0, 0.05)
PARAMS_II = BumpSumParams.from_values(4.0, 2.0, 0.05)
BUMP_I = make_bump_sum(PARAMS_I)
BUMP_II = make_bump_sum(PARAMS_II)


def test_bump_case_tags():
    assert PARAMS_I.case_tag == "i"
    assert PARAMS_II.case_tag == "ii"


def test_bump_values_at_centers():
    for params, F in ((PARAMS_I, BUMP_I), (PARAMS_II, BUMP_II)):
        for m in (1, 2, 5, 17):
            a_m, b_m = params.center(m), params.halfwidth(m)
            w = float(m) ** params.alpha
            assert F.eval(0, a_m) == pytest.approx(w * b_m ** 4, rel=1e-13)
            assert F.eval(1, a_m) == 0.0
            assert F.eval(2, a_m) == pytest.approx(-4.0 * w * b_m ** 2, rel=1e-13)


def test_bump_zero_between_supports():
    x = 0.7  # between a_2 = 0.5 and a_1 = 1, outside both supports
    for k in (0, 1, 2):
        assert BUMP_I.eval(k, x) == 0.0


def test_bump_support_disjointness_probe():
    rng = np.random.default_rng(3)
    x = rng.uniform(1e-6, 1.0, size=100_000)
    n0 = np.floor(1.0 / x)
    hits = np.zeros(x.shape, dtype=int)
    for d in (-1.0, 0.0, 1.0):
        n = np.maximum(n0 + d, 1.0)
        inside = (n0 + d >= 1.0) & (np.abs(x - 1.0 / n) <= PARAMS_I.c * n ** -PARAMS_I.beta)
        hits += inside.astype(int)
    assert hits.max() <= 1


def test_bump_peak_slope_exact_at_critical_points():
    for m in (1, 2, 3, 10, 37):
        for side in (-1, +1):
            x = PARAMS_I.critical_point(m, side)
            got = abs(BUMP_I.eval(1, x))
            assert got == pytest.approx(PARAMS_I.peak_slope(m), rel=1e-10)
            # second derivative vanishes there
            assert BUMP_I.eval(2, x) == pytest.approx(0.0, abs=1e-10 * m ** PARAMS_I.alpha)


def test_bump_param_validation():
    with pytest.raises(InvalidParams):
        BumpSumParams.from_values(6.0, 2.0, 0.05)  # alpha >= 3 beta
    with pytest.raises(InvalidParams):
        BumpSumParams(5.5, 2.0, 0.05, "ii")  # tag contradicts ranges
    with pytest.raises(InvalidParams):
        BumpSumParams.from_values(5.5, 2.0, 0.3)  # supports overlap
    with pytest.raises(InvalidParams):
        BumpSumParams.from_values(5.5, 1.5, 0.05)  # beta < 2


# --- Weierstrass ------------------------------------------------------------

def test_single_cosine_iterated_primitives():
    # one term: the j-fold primitive of cos(omega t) with vanishing
    # initial data has the closed forms sin(omega x)/omega and
    # (1 - cos(omega x))/omega^2
    omega = 13.0 * math.pi
    x = np.linspace(0.0, 1.0, 11)
    np.testing.assert_allclose(_iterated_cos_primitive(x, omega, 1),
                               np.sin(omega * x) / omega, atol=1e-15)
    np.testing.assert_allclose(_iterated_cos_primitive(x, omega, 2),
                               (1.0 - np.cos(omega * x)) / omega ** 2,
                               atol=1e-15)


WEIER = make_weierstrass_taylor(WeierstrassParams(0.5, 13, 40, 2))


def test_weierstrass_initial_derivatives_vanish():
    for k in range(WEIER.max_order):
        assert WEIER.eval(k, 0.0) == 0.0


def test_weierstrass_top_value_at_zero():
    # g(0) = sum a^k = (1 - a^(K+1))/(1 - a)
    expected = (1.0 - 0.5 ** 41) / 0.5
    assert WEIER.eval(2, 0.0) == pytest.approx(expected, rel=1e-14)


def test_weierstrass_quadrature_round_trip():
    # integrating g from 0 recovers the (n-1)-th evaluator up to the
    # noise floor of the unresolvable high-frequency terms; the error
    # estimate must stay honest about that floor
    for x in (0.17, 0.42, 0.9):
        est = integrate(WEIER.derivative(2), Interval(0.0, x), tol=1e-6)
        resid = abs(est.value - WEIER.eval(1, x))
        assert resid <= 10.0 * est.error_bound
        assert resid <= 5e-3


def test_weierstrass_param_validation():
    with pytest.raises(InvalidParams):
        WeierstrassParams(0.5, 5, 40, 2)  # a*b too small for roughness
    with pytest.raises(InvalidParams):
        WeierstrassParams(0.5, 13, 20, 2)  # truncation tail too fat
    with pytest.raises(InvalidParams):
        WeierstrassParams(0.5, 13, 40, 0)


# --- oscillator -------------------------------------------------------------

OSC = make_hk_oscillator()


def test_oscillator_primitive_values():
    assert float(OSC.primitive_oracle(np.array([1.0]))[0]) == pytest.approx(
        math.sin(1.0), rel=1e-14)
    assert float(OSC.primitive_oracle(np.array([0.0]))[0]) == 0.0


def test_oscillator_not_lebesgue_divergence_scan():
    # lower bound for int_delta^1 |F'| from the exact primitive's swings
    # between consecutive phase extrema t_j = (pi/2 + j pi)^(-1/3):
    # sum |F(t_{j+1}) - F(t_j)| with F = t^2 sin(t^-3)
    delta = 1.5e-3
    total = 0.0
    jmax = int((delta ** -3.0 - math.pi / 2.0) / math.pi)
    chunk = 5_000_000
    prev_val = None
    for start in range(0, jmax, chunk):
        j = np.arange(start, min(start + chunk, jmax), dtype=float)
        theta = math.pi / 2.0 + j * math.pi
        t = theta ** (-1.0 / 3.0)
        vals = t * t * np.sin(theta)  # sin is exactly +-1 at these phases
        if prev_val is not None:
            total += abs(vals[0] - prev_val)
        total += float(np.abs(np.diff(vals)).sum())
        prev_val = float(vals[-1])
        if total > 1e3:
            break
    assert total > 1e3


def test_oscillator_undefined_at_zero():
    assert not OSC.derivative_defined(1, 0.0)
    assert OSC.derivative_defined(1, 0.5)


# --- derivative chains -------------------------------------------------------

@pytest.mark.parametrize("label", DEFAULT_LABELS)
def test_derivative_chain_finite_differences(label):
    F = registry_lookup(label)
    errs = finite_difference_errors(F, np.random.default_rng(11), samples=64)
    for order, err in errs.items():
        assert err <= 1e-4, f"{label} order {order}: fd mismatch {err}"


# --- registry ----------------------------------------------------------------

def test_registry_poly():
    F = registry_lookup("poly:k=3")
    assert F.eval(3, 0.4) == pytest.approx(6.0)
    assert F.eval(2, 0.5) == pytest.approx(3.0)


def test_registry_bump_case_i():
    F = registry_lookup("bump:alpha=5.5,beta=2,c=0.05")
    assert not F.derivative_defined(2, 0.0)
    assert F.label == "bump:alpha=5.5,beta=2,c=0.05"


def test_registry_weier_label_round_trip():
    F = registry_lookup("weier:a=0.5,b=13,K=40,n=2")
    assert F.label == "weier:a=0.5,b=13,K=40,n=2"
    assert F.max_order == 2


def test_registry_unknown_name():
    with pytest.raises(UnknownFunction, match="position 0"):
        registry_lookup("spline:k=3")


def test_registry_bad_params_report_position_and_keys():
    with pytest.raises(InvalidParams, match="expected keys.*alpha"):
        registry_lookup("bump:gamma=2")
    with pytest.raises(InvalidParams, match="position"):
        registry_lookup("bump:alpha")


def test_parse_label_no_params():
    assert parse_label("exp") == ("exp", {})


def test_all_default_labels_resolve():
    for label in DEFAULT_LABELS:
        F = registry_lookup(label)
        assert F.max_order >= 1
