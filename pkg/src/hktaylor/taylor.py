"""Taylor polynomials and remainder representations.

A ``Func`` bundles exact derivative evaluators for one function on a
compact interval, with per-order regularity tags, singularity markers and
optional oracles.  Remainders come in three forms: the pointwise
difference f - P_n, the integral of f^(n+1) against (x-t)^n / n!, and the
integration-by-parts form that only needs f^(n).  A modified polynomial
replaces the top coefficient f^(n)(a) by f^(n)(x0) for functions whose
n-th derivative fails to exist at the base point; its remainder integrates
f^(n)(t) - f^(n)(x0).  Cross-form agreement is the module's main
correctness oracle.

Coefficients always come from the exact evaluators; finite differences
appear only in the self-check helper.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import (
    DegreeOutOfRange,
    DerivativeUnavailable,
    DerivativeUnavailableAtBase,
    DerivativeUnavailableAtX0,
    InvalidPoint,
)
from .quadrature import (
    NO_SINGULARITY,
    IntegralEstimate,
    Interval,
    SingularitySpec,
    integrate,
)

__all__ = [
    "Func",
    "TaylorData",
    "taylor_data",
    "taylor_poly",
    "remainder_direct",
    "remainder_integral",
    "modified_taylor_poly",
    "modified_remainder_integral",
    "remainder_by_parts",
    "finite_difference_errors",
]

MAX_DEGREE = 20

# regularity vocabulary, per order: the class of f^(k) as a function
TAGS = ("smooth", "ACG*", "HK-not-L1", "C0-only")
CONTINUOUS_TAGS = ("smooth", "ACG*", "C0-only")


@dataclass(frozen=True, eq=False)
class Func:
    """A function with exact derivative evaluators up to ``max_order``.

    ``derivatives[k]`` evaluates f^(k) on numpy arrays.  ``regularity[k]``
    tags the class of f^(k).  ``undefined_points[k]`` lists isolated points
    where f^(k) does not exist even though the evaluator is defined
    elsewhere.  ``primitive_oracle`` is the exact map
    x -> int over [domain.lo, x] of f^(max_order), when known.
    ``fd_reference``, when present, supplies the expected value of a
    central difference of f^(k-1) at step h (needed when f^(k) carries
    frequency content beyond what the step can see).
    """

    label: str
    domain: Interval
    max_order: int
    derivatives: tuple[Callable, ...]
    regularity: tuple[str, ...]
    singularities: Mapping[int, SingularitySpec] = field(default_factory=dict)
    undefined_points: Mapping[int, tuple[float, ...]] = field(default_factory=dict)
    primitive_oracle: Callable | None = None
    x0_hint: Callable | None = None
    fd_sampler: Callable | None = None
    fd_reference: Callable | None = None

    def __post_init__(self):
        if len(self.derivatives) != self.max_order + 1:
            raise ValueError("need one evaluator per order 0..max_order")
        if len(self.regularity) != self.max_order + 1:
            raise ValueError("need one regularity tag per order")
        for tag in self.regularity:
            if tag not in TAGS:
                raise ValueError(f"unknown regularity tag {tag!r}")

    def derivative(self, k: int) -> Callable:
        """Raw vectorized evaluator of f^(k) (unchecked at isolated
        non-differentiability points; those have measure zero)."""
        if not 0 <= k <= self.max_order:
            raise DerivativeUnavailable(k)
        return self.derivatives[k]

    def derivative_defined(self, k: int, x: float) -> bool:
        if not 0 <= k <= self.max_order:
            return False
        return x not in self.undefined_points.get(k, ())

    def eval(self, k: int, x: float) -> float:
        """Checked scalar evaluation of f^(k)(x)."""
        if not 0 <= k <= self.max_order:
            raise DerivativeUnavailable(k, x)
        if not self.derivative_defined(k, x):
            raise DerivativeUnavailable(k, x)
        return float(np.asarray(self.derivatives[k](np.array([x])),
                                dtype=float)[0])

    def sing_at(self, k: int) -> SingularitySpec:
        return self.singularities.get(k, NO_SINGULARITY)

    def tag(self, k: int) -> str:
        return self.regularity[k]

    def continuous_at_order(self, k: int) -> bool:
        return 0 <= k <= self.max_order and self.tag(k) in CONTINUOUS_TAGS


@dataclass(frozen=True)
class TaylorData:
    """Expansion data: base point, degree, coefficients f^(k)(base)/k!.

    Plain mode: ``coeffs`` has degree+1 entries and ``x0`` is None.
    Modified mode: ``coeffs`` has degree entries (orders 0..degree-1) and
    ``top_coeff`` = f^(degree)(x0)/degree!.
    """

    base: float
    degree: int
    coeffs: tuple[float, ...]
    x0: float | None = None
    top_coeff: float | None = None

    def __post_init__(self):
        expected = self.degree if self.x0 is not None else self.degree + 1
        if len(self.coeffs) != expected:
            raise ValueError(
                f"coeffs length {len(self.coeffs)} does not match "
                f"{'modified' if self.x0 is not None else 'plain'} degree "
                f"{self.degree}")

    def __call__(self, x):
        u = np.asarray(x, dtype=float) - self.base
        full = list(self.coeffs)
        if self.x0 is not None:
            full = full + [self.top_coeff]
        acc = np.zeros_like(u)
        for c in reversed(full):
            acc = acc * u + c
        return acc


def _check_degree(n: int, minimum: int = 0):
    if not minimum <= n <= MAX_DEGREE:
        raise DegreeOutOfRange(
            f"degree must be in [{minimum}, {MAX_DEGREE}], got {n}")


def _check_orientation(a: float, x: float):
    if x < a:
        raise InvalidPoint(
            f"evaluation point x={x} lies left of the base a={a}; only the "
            "base-at-left orientation is supported")


def _base_coeff(F: Func, a: float, k: int) -> float:
    try:
        return F.eval(k, a) / math.factorial(k)
    except DerivativeUnavailable as exc:
        raise DerivativeUnavailableAtBase(k, a) from exc


def taylor_data(F: Func, a: float, n: int, x0: float | None = None) -> TaylorData:
    """Coefficients of the (modified) degree-n polynomial at base a."""
    _check_degree(n, minimum=0 if x0 is None else 1)
    if x0 is None:
        coeffs = tuple(_base_coeff(F, a, k) for k in range(n + 1))
        return TaylorData(a, n, coeffs)
    coeffs = tuple(_base_coeff(F, a, k) for k in range(n))
    try:
        top = F.eval(n, x0) / math.factorial(n)
    except DerivativeUnavailable as exc:
        raise DerivativeUnavailableAtX0(n, x0) from exc
    return TaylorData(a, n, coeffs, x0=x0, top_coeff=top)


def taylor_poly(F: Func, a: float, n: int, x: float) -> float:
    """P_n(x): degree-n polynomial with all coefficients taken at a."""
    _check_orientation(a, x)
    return float(taylor_data(F, a, n)(x))


def remainder_direct(F: Func, a: float, n: int, x: float) -> float:
    """R_n(x) = f(x) - P_n(x)."""
    _check_orientation(a, x)
    return F.eval(0, x) - taylor_poly(F, a, n, x)


def modified_taylor_poly(F: Func, a: float, x0: float, n: int, x: float) -> float:
    """P_{n,x0}(x) = P_{n-1}(x) + f^(n)(x0) (x-a)^n / n!."""
    _check_orientation(a, x)
    return float(taylor_data(F, a, n, x0=x0)(x))


def modified_remainder_direct(F: Func, a: float, x0: float, n: int,
                              x: float) -> float:
    """f(x) - P_{n,x0}(x)."""
    _check_orientation(a, x)
    return F.eval(0, x) - modified_taylor_poly(F, a, x0, n, x)


def _weighted_tail_integral(F: Func, order: int, shift: float, a: float,
                            power: int, x: float, tol: float,
                            scale: float) -> IntegralEstimate:
    """scale * int_a^x [f^(order)(t) - shift] (x-t)^power dt."""
    if x == a:
        return IntegralEstimate(0.0, 0.0, 0, True, False)
    deriv = F.derivative(order)

    def integrand(t):
        return (np.asarray(deriv(t), dtype=float) - shift) * (x - t) ** power

    est = integrate(integrand, Interval(a, x), F.sing_at(order),
                    tol / max(abs(scale), 1e-12))
    return IntegralEstimate(scale * est.value, abs(scale) * est.error_bound,
                            est.subdivisions, est.converged,
                            est.limit_extrapolated)


def remainder_integral(F: Func, a: float, n: int, x: float,
                       tol: float = 1e-9) -> IntegralEstimate:
    """R_n(x) = (1/n!) int_a^x f^(n+1)(t) (x-t)^n dt."""
    _check_orientation(a, x)
    _check_degree(n, minimum=0)
    if F.max_order < n + 1:
        raise DerivativeUnavailable(n + 1)
    return _weighted_tail_integral(F, n + 1, 0.0, a, n, x, tol,
                                   1.0 / math.factorial(n))


def modified_remainder_integral(F: Func, a: float, x0: float, n: int,
                                x: float, tol: float = 1e-9) -> IntegralEstimate:
    """R_{n,x0}(x) = (1/(n-1)!) int_a^x [f^(n)(t) - f^(n)(x0)] (x-t)^(n-1) dt."""
    _check_orientation(a, x)
    _check_degree(n, minimum=1)
    try:
        shift = F.eval(n, x0)
    except DerivativeUnavailable as exc:
        raise DerivativeUnavailableAtX0(n, x0) from exc
    return _weighted_tail_integral(F, n, shift, a, n - 1, x, tol,
                                   1.0 / math.factorial(n - 1))


def remainder_by_parts(F: Func, a: float, n: int, x: float,
                       tol: float = 1e-9) -> IntegralEstimate:
    """R_n(x) = -f^(n)(a)(x-a)^n/n! + (1/(n-1)!) int_a^x f^(n)(t)(x-t)^(n-1) dt."""
    _check_orientation(a, x)
    _check_degree(n, minimum=1)
    lead = _base_coeff(F, a, n) * (x - a) ** n
    tail = _weighted_tail_integral(F, n, 0.0, a, n - 1, x, tol,
                                   1.0 / math.factorial(n - 1))
    return IntegralEstimate(tail.value - lead, tail.error_bound,
                            tail.subdivisions, tail.converged,
                            tail.limit_extrapolated)


# --------------------------------------------------------------------------
# Self-check: derivative evaluators must chain consistently.
# --------------------------------------------------------------------------

def _default_samples(F: Func, order: int, rng, count: int, step: float):
    lo, hi = F.domain.lo, F.domain.hi
    margin = max(4.0 * step, 1e-4 * F.domain.width)
    pts = rng.uniform(lo + margin, hi - margin, size=4 * count)
    bad = np.zeros(pts.shape, dtype=bool)
    for k in (order - 1, order):
        for u in F.undefined_points.get(k, ()):
            bad |= np.abs(pts - u) < margin
        spec = F.sing_at(k)
        if spec.active:
            bad |= np.abs(pts - spec.location) < max(margin, 0.02 * F.domain.width)
    pts = pts[~bad][:count]
    return pts


def finite_difference_errors(F: Func, rng=None, samples: int = 64,
                             step: float = 1e-5) -> dict[int, float]:
    """Max relative error of central differences against each evaluator.

    For every order k >= 1, compares [f^(k-1)(x+h) - f^(k-1)(x-h)] / 2h
    against f^(k)(x) (or against ``F.fd_reference(k, x, h)`` when the Func
    declares one) at random points away from singular or undefined spots.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    out: dict[int, float] = {}
    for k in range(1, F.max_order + 1):
        sampler = F.fd_sampler or _default_samples
        pts = np.asarray(sampler(F, k, rng, samples, step), dtype=float)
        if pts.size == 0:
            out[k] = 0.0
            continue
        lower = F.derivatives[k - 1](pts - step)
        upper = F.derivatives[k - 1](pts + step)
        fd = (np.asarray(upper, dtype=float) - np.asarray(lower, dtype=float)) \
            / (2.0 * step)
        if F.fd_reference is not None:
            ref = np.asarray(F.fd_reference(k, pts, step), dtype=float)
        else:
            ref = np.asarray(F.derivatives[k](pts), dtype=float)
        scale = np.maximum(np.abs(ref), np.max(np.abs(ref)) * 1e-3 + 1e-12)
        out[k] = float(np.max(np.abs(fd - ref) / scale))
    return out
