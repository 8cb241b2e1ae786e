"""Norms for (possibly only conditionally) integrable functions.

The Alexiewicz norm sup_x |int_a^x f| is the natural size measure for
integrands handled by the quadrature module; the subinterval variant takes
the sup over all subintervals and is equivalent within a factor of 2.  For
a distribution that is the derivative of a continuous function F with
F(a) = 0, the same norm is just max |F|, which needs no quadrature at all.

Sup-type searches use a 513-point uniform grid followed by golden-section
refinement of the three best brackets; primitives here are continuous, so
this is cheap and reliable at the scales the corpus works at.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import PrimitiveNotAnchored, UnboundedSample
from .quadrature import (
    NO_SINGULARITY,
    Interval,
    SingularitySpec,
    cumulative,
    integrate,
)

__all__ = [
    "NormEstimate",
    "alexiewicz_norm",
    "subinterval_norm",
    "lp_norm",
    "alexiewicz_norm_from_primitive",
]

GRID_POINTS = 513
REFINE_BRACKETS = 3


@dataclass(frozen=True)
class NormEstimate:
    """A computed norm with an error estimate.

    ``witness`` is the argmax abscissa for sup-type norms (a pair
    (argmin, argmax) for the subinterval norm), None for integral norms.
    ``p`` is set for Lp norms only.
    """

    kind: str
    value: float
    error_bound: float
    witness: float | tuple[float, float] | None = None
    p: float | None = None


def _golden_max(fn: Callable[[float], float], lo: float, hi: float,
                xtol: float):
    """Golden-section maximization; returns (x, value, spread).

    ``spread`` is the gap between the best value and the bracket's trailing
    evaluations, an estimate of what stopping at width ``xtol`` leaves on
    the table.
    """
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - gr * (b - a)
    d = a + gr * (b - a)
    fc, fd = fn(c), fn(d)
    if fc >= fd:
        best_x, best_v = c, fc
    else:
        best_x, best_v = d, fd
    for _ in range(200):
        if (b - a) <= xtol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = fn(d)
        if fc > best_v:
            best_x, best_v = c, fc
        if fd > best_v:
            best_x, best_v = d, fd
    spread = max(best_v - min(fc, fd), 0.0)
    return best_x, best_v, spread


class _Primitive:
    """Evaluates G(y) = int_a^y f on demand, extending from known points."""

    def __init__(self, f, iv: Interval, sing: SingularitySpec, tol: float,
                 points: int = GRID_POINTS):
        self.f = f
        self.iv = iv
        self.sing = sing
        self.tol = tol
        xs = np.linspace(iv.lo, iv.hi, points)
        ests = cumulative(f, iv.lo, xs[1:], sing, 0.5 * tol)
        self._vals = {float(iv.lo): (0.0, 0.0)}
        for x, e in zip(xs[1:], ests):
            self._vals[float(x)] = (e.value, e.error_bound)
        self._keys = sorted(self._vals)

    def grid(self):
        vals = np.array([self._vals[k][0] for k in self._keys])
        errs = np.array([self._vals[k][1] for k in self._keys])
        return list(self._keys), vals, errs

    def at(self, y: float):
        y = float(y)
        if y in self._vals:
            return self._vals[y]
        i = bisect.bisect_right(self._keys, y) - 1
        x0 = self._keys[max(i, 0)]
        if x0 > y:
            x0 = self.iv.lo
        v0, e0 = self._vals[x0]
        seg = integrate(self.f, Interval(x0, y), self.sing, 0.125 * self.tol,
                        panel_cap=256, raise_on_failure=False)
        if seg.converged or not self.sing.active:
            out = (v0 + seg.value, e0 + seg.error_bound)
        else:
            fresh = integrate(self.f, Interval(self.iv.lo, y), self.sing,
                              0.5 * self.tol, raise_on_failure=False)
            out = (fresh.value, fresh.error_bound)
        self._vals[y] = out
        bisect.insort(self._keys, y)
        return out


def _top_brackets(keys, scores, count=REFINE_BRACKETS):
    order = np.argsort(scores)[::-1][:count]
    brackets = []
    for i in order:
        lo = keys[max(int(i) - 1, 0)]
        hi = keys[min(int(i) + 1, len(keys) - 1)]
        if hi > lo:
            brackets.append((lo, hi, int(i)))
    return brackets


def _sup_search(keys, scores, score_at, xtol):
    """Grid scores plus golden refinement; returns (witness, value, spread)."""
    best_i = int(np.argmax(scores))
    best = (keys[best_i], float(scores[best_i]), 0.0)
    for lo, hi, i in _top_brackets(keys, scores):
        x, v, spread = _golden_max(score_at, lo, hi, xtol)
        if v > best[1]:
            best = (x, v, spread)
        elif keys[i] == best[0]:
            # grid winner: keep the bracket's residual as its uncertainty
            best = (best[0], best[1], max(best[2], spread))
    return best


def alexiewicz_norm(f, iv: Interval, sing: SingularitySpec = NO_SINGULARITY,
                    tol: float = 1e-8) -> NormEstimate:
    """sup over x in [a,b] of |int_a^x f|, with the argmax as witness."""
    prim = _Primitive(f, iv, sing, tol)
    keys, vals, errs = prim.grid()
    xtol = tol * iv.width

    def score(y):
        return abs(prim.at(y)[0])

    witness, value, spread = _sup_search(keys, np.abs(vals), score, xtol)
    quad_err = prim.at(witness)[1]
    return NormEstimate("alexiewicz", value, quad_err + spread, witness)


def subinterval_norm(f, iv: Interval, sing: SingularitySpec = NO_SINGULARITY,
                     tol: float = 1e-8) -> NormEstimate:
    """sup over (c,d) of |int_c^d f| = (max - min) of the primitive."""
    prim = _Primitive(f, iv, sing, tol)
    keys, vals, errs = prim.grid()
    xtol = tol * iv.width

    def high(y):
        return prim.at(y)[0]

    def low(y):
        return -prim.at(y)[0]

    w_hi, v_hi, s_hi = _sup_search(keys, vals, high, xtol)
    w_lo, v_lo, s_lo = _sup_search(keys, -vals, low, xtol)
    value = v_hi + v_lo  # max G - min G
    err = prim.at(w_hi)[1] + prim.at(w_lo)[1] + s_hi + s_lo
    return NormEstimate("subinterval", value, err, (w_lo, w_hi))


def lp_norm(f, iv: Interval, p: float, tol: float = 1e-8) -> NormEstimate:
    """(int |f|^p)^(1/p) for finite p; refined grid max for p = inf."""
    if p == math.inf:
        return _linf_norm(f, iv, tol)
    if not p >= 1.0:
        raise ValueError(f"p must be in [1, inf], got {p}")
    fv = lambda t: np.abs(np.asarray(f(t), dtype=float)) ** p
    est = integrate(fv, iv, NO_SINGULARITY, tol)
    base = max(est.value, 0.0)
    value = base ** (1.0 / p)
    upper = (base + est.error_bound) ** (1.0 / p)
    lower = max(base - est.error_bound, 0.0) ** (1.0 / p)
    err = max(upper - value, value - lower)
    return NormEstimate("lp", value, err, None, p)


def _linf_norm(f, iv: Interval, tol: float) -> NormEstimate:
    xs = np.linspace(iv.lo, iv.hi, GRID_POINTS)
    vals = np.abs(np.asarray(f(xs), dtype=float))
    if not np.all(np.isfinite(vals)):
        raise UnboundedSample("non-finite values on the evaluation grid")
    grid_max = float(vals.max())
    xtol = tol * iv.width

    def score(y):
        v = abs(float(np.asarray(f(np.array([y])), dtype=float)[0]))
        if not math.isfinite(v):
            raise UnboundedSample(f"non-finite value at x={y}")
        return v

    witness, value, spread = _sup_search(list(xs), vals, score, xtol)
    if grid_max > 0 and value > 20.0 * grid_max:
        raise UnboundedSample(
            f"grid maximum grew from {grid_max} to {value} under refinement")
    return NormEstimate("linf", value, spread, witness, math.inf)


def alexiewicz_norm_from_primitive(F, iv: Interval,
                                   tol: float = 1e-8) -> NormEstimate:
    """max |F| for a continuous primitive F with F(a) = 0.

    This is the Alexiewicz norm of the distributional derivative F', usable
    when no pointwise derivative exists; no quadrature is involved.
    """
    f0 = float(np.asarray(F(np.array([iv.lo])), dtype=float)[0])
    if abs(f0) > tol:
        raise PrimitiveNotAnchored(
            f"|F(a)| = {abs(f0)} exceeds tol = {tol}; the primitive must "
            "vanish at the left endpoint")
    xs = np.linspace(iv.lo, iv.hi, GRID_POINTS)
    vals = np.abs(np.asarray(F(xs), dtype=float))
    xtol = tol * iv.width

    def score(y):
        return abs(float(np.asarray(F(np.array([y])), dtype=float)[0]))

    witness, value, spread = _sup_search(list(xs), vals, score, xtol)
    return NormEstimate("alexiewicz", value, spread, witness)
