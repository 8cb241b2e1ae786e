"""Bound checks against independently derived values.

Every closed-form expectation is re-derived with dense Riemann-sum or
dense-scan oracles before being asserted against the package's own
computation.
"""

import math

import numpy as np
import pytest

from oracles import dense_alexiewicz, dense_lp, dense_sup, riemann

from hktaylor.bounds import (
    VERDICT_FACTOR,
    a_constants,
    bound_thm2_alexiewicz,
    bound_thm2_lp,
    bound_thm2_pointwise,
    bound_thm3_alexiewicz,
    bound_thm3_lp,
    bound_thm3_lp_via_A,
    bound_thm3_pointwise,
    bound_thm4,
    holder_conjugate,
    resolve_x0,
)
from hktaylor.corpus import registry_lookup
from hktaylor.errors import ConjugateMismatch
from hktaylor.quadrature import Interval

UNIT = Interval(0.0, 1.0)
CUBE = registry_lookup("poly:k=3")
LINE = registry_lookup("poly:k=1")
QUAD = registry_lookup("poly:k=2")
EXP = registry_lookup("exp")
SIN = registry_lookup("sin")
KINK = registry_lookup("kink")

INF = math.inf


def close(value, target, tol=1e-6):
    assert abs(value - target) <= tol, (value, target)


# --- thm2 -------------------------------------------------------------------

def test_thm2_alexiewicz_cube():
    # lhs: sup |int (t^3 - 1.5 t^2)| ; rhs: (1/2) sup |int (6t - 3)|
    lhs_oracle = dense_alexiewicz(lambda t: t ** 3 - 1.5 * t ** 2, 0.0, 1.0)
    rhs_oracle = 0.5 * dense_alexiewicz(lambda t: 6.0 * t - 3.0, 0.0, 1.0)
    close(lhs_oracle, 0.25)
    close(rhs_oracle, 0.375)
    chk = bound_thm2_alexiewicz(CUBE, UNIT, 0.5, 2, tol=1e-9)
    close(chk.lhs_value, 0.25)
    close(chk.rhs, 0.375)
    assert chk.verdict == "holds"


def test_thm2_alexiewicz_flat_function():
    # degree n-1 polynomial: both sides vanish
    chk = bound_thm2_alexiewicz(LINE, UNIT, 0.5, 2, tol=1e-9)
    assert abs(chk.lhs_value) < 1e-10 and abs(chk.rhs) < 1e-10
    assert chk.verdict == "holds_within_error"


def test_thm2_pointwise_at_base():
    chk = bound_thm2_pointwise(CUBE, UNIT, 0.5, 2, x=0.0, tol=1e-9)
    assert chk.lhs_value == 0.0 and abs(chk.rhs) < 1e-12
    assert chk.verdict == "holds_within_error"


def test_thm2_pointwise_cube():
    chk = bound_thm2_pointwise(CUBE, UNIT, 0.5, 2, x=1.0, tol=1e-9)
    close(chk.lhs_value, 0.5)
    close(chk.rhs, 0.75)
    assert chk.verdict == "holds"


def test_thm2_lp_cube_p1():
    lhs_oracle = dense_lp(lambda t: t ** 3 - 1.5 * t ** 2, 0.0, 1.0, 1.0)
    close(lhs_oracle, 0.25)
    chk = bound_thm2_lp(CUBE, UNIT, 0.5, 2, p=1.0, tol=1e-9)
    close(chk.lhs_value, 0.25)
    close(chk.rhs, 0.375)  # (b-a)^2/(1! * 2) * 0.75
    assert chk.verdict == "holds"


def test_thm2_lp_pinf_matches_sup():
    chk = bound_thm2_lp(CUBE, UNIT, 0.5, 2, p=INF, tol=1e-9)
    close(chk.lhs_value, dense_sup(lambda t: t ** 3 - 1.5 * t ** 2, 0.0, 1.0),
          1e-5)
    close(chk.rhs, 0.75)  # (b-a)^1/1! * 0.75
    assert chk.verdict == "holds"


# --- thm3 -------------------------------------------------------------------

def test_thm3_alexiewicz_cube():
    chk = bound_thm3_alexiewicz(CUBE, UNIT, 2, tol=1e-9)
    close(chk.lhs_value, 0.25)
    close(chk.rhs, 1.0)  # (1/6) * sup |int 6| = 1
    assert chk.verdict == "holds"


def test_thm3_alexiewicz_exact_polynomial():
    chk = bound_thm3_alexiewicz(QUAD, UNIT, 2, tol=1e-9)
    assert abs(chk.lhs_value) < 1e-10 and abs(chk.rhs) < 1e-10


def test_thm3_alexiewicz_exp():
    # lhs: sup_y |e^y - 1 - y - y^2/2| = e - 5/2;
    # rhs: (b-a)^2/2! * sup_y |int_0^y e^t dt| = (e - 1)/2
    lhs_oracle = dense_sup(lambda y: np.exp(y) - 1.0 - y - 0.5 * y * y, 0.0, 1.0)
    close(lhs_oracle, math.e - 2.5)
    chk = bound_thm3_alexiewicz(EXP, UNIT, 1, tol=1e-9)
    close(chk.lhs_value, math.e - 2.5)
    close(chk.rhs, 0.5 * (math.e - 1.0))
    assert chk.verdict == "holds"


def test_thm3_pointwise_cube():
    chk = bound_thm3_pointwise(CUBE, UNIT, 2, x=0.5, tol=1e-9)
    close(chk.lhs_value, 0.125)
    close(chk.rhs, 0.375)  # (1/2)^2/2 * 3
    assert chk.verdict == "holds"


def test_thm3_pointwise_exp():
    chk = bound_thm3_pointwise(EXP, UNIT, 1, x=1.0, tol=1e-9)
    close(chk.lhs_value, math.e - 2.0)
    close(chk.rhs, math.e - 1.0)
    assert chk.verdict == "holds"


def test_thm3_lp_cube():
    chk = bound_thm3_lp(CUBE, UNIT, 2, p=1.0, tol=1e-9)
    close(chk.lhs_value, 0.25)  # int t^3
    close(chk.rhs, 1.0)  # 1/(2! * 3) * 6
    assert chk.verdict == "holds"
    chk = bound_thm3_lp(CUBE, UNIT, 2, p=INF, tol=1e-9)
    close(chk.lhs_value, 1.0, 1e-5)
    close(chk.rhs, 3.0)
    assert chk.verdict == "holds"


# --- A constants --------------------------------------------------------------

def test_a_constants_vanish_for_flat_top():
    consts = a_constants(LINE, UNIT, 2, p=2.0, alpha=2.0, tol=1e-9)
    for key in ("A1", "A2", "A3", "A4"):
        assert abs(consts[key][0]) < 1e-9, key


def test_a4_cube_p2():
    # A4 = (b-a)^(2(1-1/2))/2! * (int |6t|^2 (1-t)^2)^(1/2) = sqrt(1.2)/2
    oracle = 0.5 * riemann(lambda t: 36.0 * t * t * (1.0 - t) ** 2, 0.0, 1.0) ** 0.5
    close(oracle, math.sqrt(0.3), 1e-5)
    consts = a_constants(CUBE, UNIT, 2, p=2.0, alpha=2.0, tol=1e-10)
    close(consts["A4"][0], math.sqrt(0.3))


def test_a2_cube_p1_alpha_inf():
    # beta = 1: (b-a)^3 ||f''||_inf / (1! * 2 * 3) = 6/6 = 1
    consts = a_constants(CUBE, UNIT, 2, p=1.0, alpha=INF, tol=1e-9)
    close(consts["A2"][0], 1.0, 1e-6)


def test_conjugate_mismatch():
    with pytest.raises(ConjugateMismatch):
        a_constants(CUBE, UNIT, 2, p=2.0, alpha=2.0, beta=3.0, tol=1e-8)
    assert holder_conjugate(1.0) == INF
    assert holder_conjugate(INF) == 1.0
    assert holder_conjugate(2.0) == 2.0


def test_via_a_flat():
    chk = bound_thm3_lp_via_A(LINE, UNIT, 2, p=1.0, alpha=2.0, which="A4",
                              tol=1e-9)
    assert abs(chk.lhs_value) < 1e-9 and abs(chk.rhs) < 1e-9


def test_via_a4_cube():
    # rhs = 0 + A4(p=1) = (1/2) int |6t| (1-t)^2 = 1/4; lhs = int t^3 = 1/4:
    # the Jensen chain is exactly tight for this monomial
    rhs_oracle = 0.5 * riemann(lambda t: 6.0 * t * (1.0 - t) ** 2, 0.0, 1.0)
    close(rhs_oracle, 0.25, 1e-6)
    chk = bound_thm3_lp_via_A(CUBE, UNIT, 2, p=1.0, alpha=2.0, which="A4",
                              tol=1e-9)
    close(chk.lhs_value, 0.25)
    close(chk.rhs, 0.25)
    assert chk.verdict in ("holds", "holds_within_error")
    assert chk.slack >= -VERDICT_FACTOR * (chk.lhs_error + chk.rhs_error)


def test_via_a1_exp():
    # rhs = (1/sqrt 3) |f'(0)| + ||e^x - 1||_2 ; lhs = ||e^x - 1 - x||_2
    lhs_oracle = dense_lp(lambda x: np.exp(x) - 1.0 - x, 0.0, 1.0, 2.0)
    rhs_oracle = 1.0 / math.sqrt(3.0) + dense_lp(lambda x: np.exp(x) - 1.0,
                                                 0.0, 1.0, 2.0)
    chk = bound_thm3_lp_via_A(EXP, UNIT, 1, p=2.0, alpha=2.0, which="A1",
                              tol=1e-9)
    close(chk.lhs_value, lhs_oracle, 1e-5)
    close(chk.rhs, rhs_oracle, 1e-5)
    assert chk.verdict == "holds"


def test_via_a_pinf_dedicated_display():
    # (b-a)^n/n! (|f^(n)(a)| + ||f^(n)||_inf) = (1/2)(0 + 6) = 3
    chk = bound_thm3_lp_via_A(CUBE, UNIT, 2, p=INF, alpha=2.0, which="A1",
                              tol=1e-9)
    close(chk.rhs, 3.0, 1e-5)
    close(chk.lhs_value, 1.0, 1e-5)
    assert chk.verdict == "holds"


# --- thm4 ---------------------------------------------------------------------

def test_thm4_flat_top():
    chk = bound_thm4(QUAD, UNIT, 2, tol=1e-9)
    assert abs(chk.lhs_value) < 1e-10 and abs(chk.rhs) < 1e-10


def test_thm4_kink():
    # f' = |x - 1/2|: lhs = ||R_1|| = 1/8, rhs = (1/2) max||x-1/2| - 1/2| = 1/4
    def r1(t):
        t = np.asarray(t, dtype=float)
        f0 = np.where(t <= 0.5, 0.5 * t - 0.5 * t * t,
                      0.125 + 0.5 * (t - 0.5) ** 2)
        return f0 - 0.5 * t

    lhs_oracle = dense_alexiewicz(r1, 0.0, 1.0)
    close(lhs_oracle, 0.125)
    rhs_oracle = 0.5 * dense_sup(lambda t: np.abs(t - 0.5) - 0.5, 0.0, 1.0)
    close(rhs_oracle, 0.25)
    chk = bound_thm4(KINK, UNIT, 1, tol=1e-9)
    close(chk.lhs_value, 0.125)
    close(chk.rhs, 0.25)
    assert chk.verdict == "holds"


@pytest.mark.parametrize("F,n", [(EXP, 1), (EXP, 2), (SIN, 2), (CUBE, 2)],
                         ids=["exp1", "exp2", "sin2", "cube2"])
def test_thm4_thm3_rhs_consistency(F, n):
    # the distributional-norm route and the quadrature route must agree
    a = bound_thm4(F, UNIT, n, tol=1e-9)
    b = bound_thm3_alexiewicz(F, UNIT, n, tol=1e-9)
    budget = VERDICT_FACTOR * (a.rhs_error + b.rhs_error) + 1e-9
    assert abs(a.rhs - b.rhs) <= budget


def test_thm3_rhs_monotone_in_interval():
    rhs = []
    for hi in (0.2, 0.4, 0.6, 0.8, 1.0):
        chk = bound_thm3_alexiewicz(EXP, Interval(0.0, hi), 1, tol=1e-9)
        rhs.append(chk.rhs)
    assert all(b >= a - 1e-12 for a, b in zip(rhs, rhs[1:]))


# --- x0 resolution -------------------------------------------------------------

def test_resolve_x0_midpoint_default():
    assert resolve_x0(EXP, UNIT, "auto") == 0.5
    assert resolve_x0(EXP, UNIT, 0.25) == 0.25


def test_resolve_x0_bump_prefers_critical_point():
    F = registry_lookup("bump:alpha=5.5,beta=2,c=0.05")
    x0 = resolve_x0(F, UNIT, "auto")
    # nearest critical point to the midpoint: bump m=2
    expected = 0.5 + (0.05 / 4.0) / math.sqrt(3.0)
    assert x0 == pytest.approx(expected, rel=1e-12)
    assert F.eval(2, x0) == pytest.approx(0.0, abs=1e-10)


# --- soundness smoke ------------------------------------------------------------

@pytest.mark.parametrize("F", [CUBE, EXP, SIN, KINK], ids=lambda F: F.label)
def test_no_violations_on_smooth_mini_grid(F):
    for n in (1, 2):
        if F.max_order >= n + 1:
            assert bound_thm3_alexiewicz(F, UNIT, n, tol=1e-8).verdict != "violated"
        if F.max_order >= n and F.derivative_defined(n, 0.5):
            assert bound_thm2_alexiewicz(F, UNIT, 0.5, n, tol=1e-8).verdict != "violated"
        if F.continuous_at_order(n):
            assert bound_thm4(F, UNIT, n, tol=1e-8).verdict != "violated"
