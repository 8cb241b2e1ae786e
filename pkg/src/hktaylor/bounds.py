"""Two-sided evaluation of the remainder inequalities.

Each operation computes the left side (a norm or pointwise value of an
actual remainder) and the right side (the displayed constant times a norm
of a derivative), packages both with error estimates, and issues a
verdict.  A bound "holds" when the slack clears the combined error budget,
is "violated" when it undercuts it, and sits "within error" otherwise.

Families:

* thm2: the modified remainder R_{n,x0} against the Alexiewicz norm of
  f^(n)(.) - f^(n)(x0)  (no derivative needed at the base point);
* thm3: the plain remainder R_n against the Alexiewicz norm of f^(n+1),
  plus four alternative constants A1..A4 built from norms of f^(n) only;
* thm4: R_n against max |f^(n)(x) - f^(n)(a)|, the Alexiewicz norm of the
  distributional derivative f^(n+1), for merely continuous f^(n).

Expensive norms are cached per (function, interval, order, tolerance), so
parameter sweeps touch each one once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    ConjugateMismatch,
    DerivativeUnavailable,
    DerivativeUnavailableAtX0,
)
from .norms import (
    NormEstimate,
    _Primitive,
    _sup_search,
    alexiewicz_norm_from_primitive,
    lp_norm,
)
from .quadrature import Interval, integrate
from .taylor import Func, modified_remainder_direct, remainder_direct, taylor_data

__all__ = [
    "BoundCheck",
    "VERDICT_FACTOR",
    "resolve_x0",
    "holder_conjugate",
    "bound_thm2_alexiewicz",
    "bound_thm2_pointwise",
    "bound_thm2_lp",
    "bound_thm3_alexiewicz",
    "bound_thm3_pointwise",
    "bound_thm3_lp",
    "a_constants",
    "bound_thm3_lp_via_A",
    "bound_thm4",
]

VERDICT_FACTOR = 10.0


@dataclass(frozen=True)
class BoundCheck:
    """One verified inequality: lhs <= rhs with slack = rhs - lhs."""

    label: str
    lhs: NormEstimate | float
    lhs_error: float
    rhs: float
    rhs_error: float
    slack: float
    verdict: str
    params: dict

    @property
    def lhs_value(self) -> float:
        return self.lhs.value if isinstance(self.lhs, NormEstimate) else float(self.lhs)


def _check(label: str, lhs, lhs_err: float, rhs: float, rhs_err: float,
           params: dict) -> BoundCheck:
    lhs_value = lhs.value if isinstance(lhs, NormEstimate) else float(lhs)
    slack = rhs - lhs_value
    combined = VERDICT_FACTOR * (lhs_err + rhs_err)
    if slack > combined:
        verdict = "holds"
    elif slack < -combined:
        verdict = "violated"
    else:
        verdict = "holds_within_error"
    return BoundCheck(label, lhs, lhs_err, rhs, rhs_err, slack, verdict, params)


def holder_conjugate(alpha: float) -> float:
    if alpha == 1.0:
        return math.inf
    if alpha == math.inf:
        return 1.0
    if not alpha > 1.0:
        raise ConjugateMismatch(f"alpha must be in [1, inf], got {alpha}")
    return alpha / (alpha - 1.0)


def resolve_x0(F: Func, iv: Interval, x0) -> float:
    """Resolve the auxiliary point: 'auto'/None defers to the function's
    preferred spots (bump critical points) or the interval midpoint."""
    if x0 is None or (isinstance(x0, str) and x0 == "auto"):
        if F.x0_hint is not None:
            return float(F.x0_hint(iv))
        return 0.5 * (iv.lo + iv.hi)
    return float(x0)


# --------------------------------------------------------------------------
# Cached building blocks
# --------------------------------------------------------------------------

class _PrefixAlexiewicz:
    """Alexiewicz norms of one integrand on [a, x] for varying x, reusing
    a single cumulative-primitive pass over the full interval."""

    def __init__(self, f, iv: Interval, sing, tol: float):
        self._prim = _Primitive(f, iv, sing, tol)
        self._iv = iv
        self._tol = tol

    def upto(self, x: float):
        """(value, error, witness) of the norm restricted to [a, x]."""
        keys, vals, errs = self._prim.grid()
        j = int(np.searchsorted(np.asarray(keys), x, side="right"))
        sub_keys = list(keys[:j])
        sub_scores = np.abs(vals[:j])
        if not sub_keys or sub_keys[-1] < x:
            gx = self._prim.at(x)[0]
            sub_keys.append(x)
            sub_scores = np.append(sub_scores, abs(gx))
        xtol = self._tol * self._iv.width

        def score(y):
            y = min(y, x)
            return abs(self._prim.at(y)[0])

        witness, value, spread = _sup_search(sub_keys, sub_scores, score, xtol)
        err = self._prim.at(witness)[1] + spread
        return value, err, witness

    def full(self):
        return self.upto(self._iv.hi)


def _as_shifted(F: Func, order: int, shift: float):
    deriv = F.derivative(order)
    if shift == 0.0:
        return deriv
    return lambda t: np.asarray(deriv(t), dtype=float) - shift


@lru_cache(maxsize=4096)
def _deriv_prefix(F: Func, lo: float, hi: float, order: int, shift: float,
                  tol: float) -> _PrefixAlexiewicz:
    return _PrefixAlexiewicz(_as_shifted(F, order, shift), Interval(lo, hi),
                             F.sing_at(order), tol)


def _remainder_callable(F: Func, a: float, n: int, x0: float | None):
    data = taylor_data(F, a, n, x0=x0)
    f0 = F.derivative(0)
    return lambda x: np.asarray(f0(x), dtype=float) - data(x)


@lru_cache(maxsize=4096)
def _rem_alex(F: Func, lo: float, hi: float, n: int, x0: float | None,
              tol: float):
    R = _remainder_callable(F, lo, n, x0)
    prefix = _PrefixAlexiewicz(R, Interval(lo, hi), F.sing_at(0), tol)
    value, err, witness = prefix.full()
    return NormEstimate("alexiewicz", value, err, witness)


@lru_cache(maxsize=4096)
def _rem_lp(F: Func, lo: float, hi: float, n: int, x0: float | None,
            p: float, tol: float) -> NormEstimate:
    R = _remainder_callable(F, lo, n, x0)
    return lp_norm(R, Interval(lo, hi), p, tol)


@lru_cache(maxsize=4096)
def _deriv_lp(F: Func, lo: float, hi: float, order: int, p: float,
              tol: float) -> NormEstimate:
    return lp_norm(F.derivative(order), Interval(lo, hi), p, tol)


@lru_cache(maxsize=4096)
def _weighted_lp_integral(F: Func, lo: float, hi: float, order: int,
                          p: float, weight_exp: float, tol: float):
    """((int |f^(order)(t)|^p (hi-t)^weight_exp dt)^(1/p), error)."""
    deriv = F.derivative(order)

    def integrand(t):
        return np.abs(np.asarray(deriv(t), dtype=float)) ** p * (hi - t) ** weight_exp

    est = integrate(integrand, Interval(lo, hi), F.sing_at(order), tol)
    base = max(est.value, 0.0)
    value = base ** (1.0 / p)
    upper = (base + est.error_bound) ** (1.0 / p)
    lower = max(base - est.error_bound, 0.0) ** (1.0 / p)
    return value, max(upper - value, value - lower)


# --------------------------------------------------------------------------
# thm2: modified remainder estimates
# --------------------------------------------------------------------------

def _thm2_parts(F: Func, iv: Interval, x0, n: int, tol: float):
    x0 = resolve_x0(F, iv, x0)
    try:
        shift = F.eval(n, x0)
    except DerivativeUnavailable as exc:
        raise DerivativeUnavailableAtX0(n, x0) from exc
    prefix = _deriv_prefix(F, iv.lo, iv.hi, n, shift, tol)
    return x0, prefix


def bound_thm2_alexiewicz(F: Func, iv: Interval, x0, n: int,
                          tol: float = 1e-8) -> BoundCheck:
    x0, prefix = _thm2_parts(F, iv, x0, n, tol)
    lhs = _rem_alex(F, iv.lo, iv.hi, n, x0, tol)
    nv, ne, _ = prefix.full()
    const = iv.width ** n / math.factorial(n)
    return _check("thm2.alexiewicz", lhs, lhs.error_bound,
                  const * nv, const * ne,
                  {"n": n, "x0": x0, "interval": (iv.lo, iv.hi)})


def bound_thm2_pointwise(F: Func, iv: Interval, x0, n: int, x: float,
                         tol: float = 1e-8) -> BoundCheck:
    x0, prefix = _thm2_parts(F, iv, x0, n, tol)
    lhs = abs(modified_remainder_direct(F, iv.lo, x0, n, x))
    nv, ne, _ = prefix.upto(x)
    const = (x - iv.lo) ** (n - 1) / math.factorial(n - 1)
    return _check("thm2.pointwise", lhs, 0.0, const * nv, const * ne,
                  {"n": n, "x0": x0, "x": x, "interval": (iv.lo, iv.hi)})


def bound_thm2_lp(F: Func, iv: Interval, x0, n: int, p: float,
                  tol: float = 1e-8) -> BoundCheck:
    x0, prefix = _thm2_parts(F, iv, x0, n, tol)
    lhs = _rem_lp(F, iv.lo, iv.hi, n, x0, p, tol)
    nv, ne, _ = prefix.full()
    if p == math.inf:
        const = iv.width ** (n - 1) / math.factorial(n - 1)
    else:
        const = iv.width ** (n - 1 + 1.0 / p) / (
            math.factorial(n - 1) * ((n - 1) * p + 1.0) ** (1.0 / p))
    return _check("thm2.lp", lhs, lhs.error_bound, const * nv, const * ne,
                  {"n": n, "x0": x0, "p": p, "interval": (iv.lo, iv.hi)})


# --------------------------------------------------------------------------
# thm3: plain remainder estimates via f^(n+1)
# --------------------------------------------------------------------------

def bound_thm3_alexiewicz(F: Func, iv: Interval, n: int,
                          tol: float = 1e-8) -> BoundCheck:
    lhs = _rem_alex(F, iv.lo, iv.hi, n, None, tol)
    prefix = _deriv_prefix(F, iv.lo, iv.hi, n + 1, 0.0, tol)
    nv, ne, _ = prefix.full()
    const = iv.width ** (n + 1) / math.factorial(n + 1)
    return _check("thm3.alexiewicz", lhs, lhs.error_bound,
                  const * nv, const * ne,
                  {"n": n, "interval": (iv.lo, iv.hi)})


def bound_thm3_pointwise(F: Func, iv: Interval, n: int, x: float,
                         tol: float = 1e-8) -> BoundCheck:
    lhs = abs(remainder_direct(F, iv.lo, n, x))
    prefix = _deriv_prefix(F, iv.lo, iv.hi, n + 1, 0.0, tol)
    nv, ne, _ = prefix.upto(x)
    const = (x - iv.lo) ** n / math.factorial(n)
    return _check("thm3.pointwise", lhs, 0.0, const * nv, const * ne,
                  {"n": n, "x": x, "interval": (iv.lo, iv.hi)})


def bound_thm3_lp(F: Func, iv: Interval, n: int, p: float,
                  tol: float = 1e-8) -> BoundCheck:
    lhs = _rem_lp(F, iv.lo, iv.hi, n, None, p, tol)
    prefix = _deriv_prefix(F, iv.lo, iv.hi, n + 1, 0.0, tol)
    nv, ne, _ = prefix.full()
    if p == math.inf:
        const = iv.width ** n / math.factorial(n)
    else:
        const = iv.width ** (n + 1.0 / p) / (
            math.factorial(n) * (n * p + 1.0) ** (1.0 / p))
    return _check("thm3.lp", lhs, lhs.error_bound, const * nv, const * ne,
                  {"n": n, "p": p, "interval": (iv.lo, iv.hi)})


# --------------------------------------------------------------------------
# thm3, alternative constants A1..A4 from norms of f^(n)
# --------------------------------------------------------------------------

def a_constants(F: Func, iv: Interval, n: int, p: float, alpha: float,
                tol: float = 1e-8, beta: float | None = None) -> dict:
    """The four computable constants {A1..A4}, each as (value, error).

    A1 uses the Alexiewicz norm of f^(n) for n >= 2 and ||f - f(a)||_p for
    n = 1 (the general display degenerates there).  A2 uses the Holder
    conjugate pair (alpha, beta); A3 and A4 weight |f^(n)|^p by powers of
    (b - t).
    """
    if not (1.0 <= p < math.inf):
        raise ValueError(f"A-constants need p in [1, inf), got {p}")
    conj = holder_conjugate(alpha)
    if beta is not None and abs(1.0 / alpha + 1.0 / beta - 1.0) > 1e-12:
        raise ConjugateMismatch(
            f"1/{alpha} + 1/{beta} != 1 (conjugate of {alpha} is {conj})")
    beta = conj
    w = iv.width
    fact = math.factorial(n - 1)
    denom_p = ((n - 1) * p + 1.0) ** (1.0 / p)
    out: dict[str, tuple[float, float]] = {}

    if n >= 2:
        prefix = _deriv_prefix(F, iv.lo, iv.hi, n, 0.0, tol)
        nv, ne, _ = prefix.full()
        c = w ** (n - 1 + 1.0 / p) / (fact * denom_p)
        out["A1"] = (c * nv, c * ne)
    else:
        f0 = F.eval(0, iv.lo)
        shifted = _as_shifted(F, 0, f0)
        est = lp_norm(shifted, iv, p, tol)
        out["A1"] = (est.value, est.error_bound)

    if alpha == 1.0:
        l1 = _deriv_lp(F, iv.lo, iv.hi, n, 1.0, tol)
        c = w ** (n - 1 + 1.0 / p) / (fact * denom_p)
        out["A2"] = (c * l1.value, c * l1.error_bound)
    else:
        la = _deriv_lp(F, iv.lo, iv.hi, n, alpha, tol)
        if beta == math.inf:
            denom_b = 1.0
            bpow = 0.0
        else:
            denom_b = ((n - 1) * beta + 1.0) ** (1.0 / beta)
            bpow = 1.0 / beta
        c = w ** (n - 1 + 1.0 / p + bpow) / (
            fact * denom_b * ((n - 1 + bpow) * p + 1.0) ** (1.0 / p))
        out["A2"] = (c * la.value, c * la.error_bound)

    v3, e3 = _weighted_lp_integral(F, iv.lo, iv.hi, n, p, (n - 1) * p + 1.0, tol)
    c3 = w ** (1.0 - 1.0 / p) / (fact * denom_p)
    out["A3"] = (c3 * v3, c3 * e3)

    v4, e4 = _weighted_lp_integral(F, iv.lo, iv.hi, n, p, float(n), tol)
    c4 = w ** (n * (1.0 - 1.0 / p)) / math.factorial(n)
    out["A4"] = (c4 * v4, c4 * e4)
    return out


def bound_thm3_lp_via_A(F: Func, iv: Interval, n: int, p: float, alpha: float,
                        which: str, tol: float = 1e-8) -> BoundCheck:
    """||R_n||_p against the leading |f^(n)(a)| term plus one A-constant.

    For p = inf the dedicated display (b-a)^n/n! (|f^(n)(a)| + ||f^(n)||_inf)
    is used and ``which`` is ignored.
    """
    lead_val = abs(F.eval(n, iv.lo))
    lhs = _rem_lp(F, iv.lo, iv.hi, n, None, p, tol)
    if p == math.inf:
        sup = _deriv_lp(F, iv.lo, iv.hi, n, math.inf, tol)
        const = iv.width ** n / math.factorial(n)
        rhs = const * (lead_val + sup.value)
        return _check("thm3.lp.Ainf", lhs, lhs.error_bound, rhs,
                      const * sup.error_bound,
                      {"n": n, "p": p, "alpha": alpha,
                       "interval": (iv.lo, iv.hi)})
    if which not in ("A1", "A2", "A3", "A4"):
        raise ValueError(f"which must be A1..A4, got {which!r}")
    consts = a_constants(F, iv, n, p, alpha, tol)
    a_val, a_err = consts[which]
    lead = iv.width ** (n + 1.0 / p) / (
        math.factorial(n) * (n * p + 1.0) ** (1.0 / p)) * lead_val
    return _check(f"thm3.lp.{which}", lhs, lhs.error_bound, lead + a_val,
                  a_err, {"n": n, "p": p, "alpha": alpha,
                          "interval": (iv.lo, iv.hi)})


# --------------------------------------------------------------------------
# thm4: continuous f^(n), distributional norm of f^(n+1)
# --------------------------------------------------------------------------

def bound_thm4(F: Func, iv: Interval, n: int, tol: float = 1e-8) -> BoundCheck:
    """||R_n|| <= (b-a)^(n+1)/(n+1)! max |f^(n)(x) - f^(n)(a)|.

    The right side realizes the Alexiewicz norm of the distributional
    derivative f^(n+1) through the continuous primitive
    x -> f^(n)(x) - f^(n)(a); no derivative beyond order n is touched.
    """
    fa = F.eval(n, iv.lo)
    deriv = F.derivative(n)
    primitive = lambda x: np.asarray(deriv(x), dtype=float) - fa
    rhs_norm = alexiewicz_norm_from_primitive(primitive, iv, tol)
    lhs = _rem_alex(F, iv.lo, iv.hi, n, None, tol)
    const = iv.width ** (n + 1) / math.factorial(n + 1)
    return _check("thm4.alexiewicz", lhs, lhs.error_bound,
                  const * rhs_norm.value, const * rhs_norm.error_bound,
                  {"n": n, "interval": (iv.lo, iv.hi)})
