"""Corpus of test functions with exact derivative evaluators.

Three constructions carry the interesting regularity:

* a sum of disjoint polynomial bumps n^alpha * ((x-a_n)^2 - b_n^2)^2 with
  a_n = 1/n, b_n = c n^-beta, whose second derivative concentrates
  conditional integrability at 0 (and, for large alpha, fails to exist
  there);
* an n-fold iterated primitive of a truncated Weierstrass cosine series,
  whose n-th derivative is continuous but nothing better;
* the classic x^2 sin(x^-3), whose derivative is integrable only in the
  conditional sense.

Disjoint supports make the bump sum exact and O(1) per evaluation: at most
one term is nonzero and its index is found from floor(1/x).  All
evaluators accept numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, UnknownFunction
from .quadrature import Interval, SingularitySpec
from .taylor import Func

__all__ = [
    "BumpSumParams",
    "WeierstrassParams",
    "make_bump_sum",
    "make_weierstrass_taylor",
    "make_hk_oscillator",
    "make_smooth_suite",
    "registry_lookup",
    "parse_label",
    "DEFAULT_LABELS",
    "default_corpus",
]

SQRT3 = math.sqrt(3.0)


# --------------------------------------------------------------------------
# Bump sum
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BumpSumParams:
    """Parameters of the bump sum: exponent alpha, width decay beta,
    half-width coefficient c.

    case "i":  3*beta - 1 <= alpha < 3*beta  (second derivative does not
    exist at 0); case "ii": 0 < alpha < 3*beta - 1 (it does, and is
    Lebesgue integrable).
    """

    alpha: float
    beta: float
    c: float
    case_tag: str

    def __post_init__(self):
        if not (self.alpha > 0 and self.c > 0):
            raise InvalidParams("alpha and c must be positive")
        if not self.beta >= 2:
            raise InvalidParams(f"beta must be >= 2, got {self.beta}")
        if self.case_tag not in ("i", "ii"):
            raise InvalidParams(f"case_tag must be 'i' or 'ii', got {self.case_tag!r}")
        expected = "i" if 3 * self.beta - 1 <= self.alpha < 3 * self.beta \
            else ("ii" if self.alpha < 3 * self.beta - 1 else None)
        if expected is None:
            raise InvalidParams(
                f"alpha={self.alpha} must lie in (0, 3*beta) = (0, {3 * self.beta})")
        if expected != self.case_tag:
            raise InvalidParams(
                f"alpha={self.alpha}, beta={self.beta} is case {expected}, "
                f"not case {self.case_tag}")
        # disjoint supports: b_n <= half the gap to both neighbours, i.e.
        # c <= n^(beta-1)/(2(n+1)), whose minimum over n >= 1 is 1/4
        if self.c > 0.25:
            raise InvalidParams(
                f"c={self.c} breaks support disjointness (need c <= 1/4)")
        n = np.arange(1.0, 1e6 + 1.0)
        gaps = 1.0 / (2.0 * n * (n + 1.0))
        if not np.all(self.c * n ** -self.beta <= gaps + 1e-18):
            raise InvalidParams("bump supports overlap at some n <= 1e6")

    @classmethod
    def from_values(cls, alpha: float, beta: float, c: float) -> "BumpSumParams":
        tag = "i" if 3 * beta - 1 <= alpha < 3 * beta else "ii"
        return cls(alpha, beta, c, tag)

    def center(self, n: int) -> float:
        return 1.0 / n

    def halfwidth(self, n: int) -> float:
        return self.c * float(n) ** -self.beta

    def critical_point(self, n: int, side: int = +1) -> float:
        """Location a_n + side * b_n/sqrt(3) where f_n' is extremal and
        f_n'' vanishes."""
        return self.center(n) + side * self.halfwidth(n) / SQRT3

    def peak_slope(self, n: int) -> float:
        """max over the n-th bump of |n^alpha f_n'| = n^alpha 8 b_n^3/(3 sqrt 3)."""
        return float(n) ** self.alpha * 8.0 * self.halfwidth(n) ** 3 / (3.0 * SQRT3)


def _bump_eval(x, params: BumpSumParams, order: int):
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros_like(x)
    pos = x > 0
    if np.any(pos):
        xp = x[pos]
        res = np.zeros_like(xp)
        n0 = np.floor(1.0 / xp)
        for d in (-1.0, 0.0, 1.0):
            n = n0 + d
            ok = n >= 1.0
            nn = np.where(ok, n, 1.0)
            b = params.c * nn ** -params.beta
            u = xp - 1.0 / nn
            inside = ok & (np.abs(u) <= b)
            if not np.any(inside):
                continue
            w = nn ** params.alpha
            if order == 0:
                val = (u * u - b * b) ** 2
            elif order == 1:
                val = 4.0 * u * (u * u - b * b)
            else:
                val = 4.0 * (3.0 * u * u - b * b)
            res = np.where(inside, w * val, res)
        out[pos] = res
    return out[0] if scalar else out


def make_bump_sum(params: BumpSumParams) -> Func:
    """Bump-sum Func with exact evaluators at orders 0, 1, 2."""
    label = f"bump:alpha={params.alpha:g},beta={params.beta:g},c={params.c:g}"
    domain = Interval(0.0, 1.0)

    def d0(x):
        return _bump_eval(x, params, 0)

    def d1(x):
        return _bump_eval(x, params, 1)

    def d2(x):
        return _bump_eval(x, params, 2)

    def x0_hint(iv: Interval) -> float:
        mid = 0.5 * (iv.lo + iv.hi)
        best, dist = None, math.inf
        m0 = max(int(round(1.0 / mid)) if mid > 0 else 1, 1)
        for m in range(max(1, m0 - 3), m0 + 4):
            cand = params.critical_point(m)
            if iv.lo < cand < iv.hi and abs(cand - mid) < dist:
                best, dist = cand, abs(cand - mid)
        return best if best is not None else mid

    def fd_sampler(F, order, rng, count, step):
        # half the points inside wide (low-index) bumps, half in the dead
        # zones between; a central difference at step h resolves a bump of
        # half-width b only when (h/b)^2 is small, and the relative check
        # needs clearance from the zeros of the target derivative, so u/b
        # stays in [-0.8, 0.8] away from +-1/sqrt(3)
        inside = []
        while len(inside) < count // 2:
            n = int(rng.integers(2, 4))
            u = float(rng.uniform(-0.8, 0.8))
            if abs(abs(u) - 1.0 / SQRT3) < 0.05:
                continue
            inside.append(1.0 / n + u * params.halfwidth(n))
        gaps = []
        while len(gaps) < count - count // 2:
            t = float(rng.uniform(0.05, 0.95))
            probes = np.array([t - 4 * step, t, t + 4 * step])
            if np.all(_bump_eval(probes, params, 0) == 0.0):
                gaps.append(t)
        return np.array(inside + gaps)

    case_i = params.case_tag == "i"
    return Func(
        label=label,
        domain=domain,
        max_order=2,
        derivatives=(d0, d1, d2),
        regularity=("ACG*", "ACG*", "HK-not-L1"),
        singularities={2: SingularitySpec(0.0, "left", "oscillatory-improper")},
        undefined_points={2: (0.0,)} if case_i else {},
        primitive_oracle=d1,
        x0_hint=x0_hint,
        fd_sampler=fd_sampler,
    )


# --------------------------------------------------------------------------
# Iterated primitive of a truncated Weierstrass series
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WeierstrassParams:
    """amp_ratio in (0,1), integer freq_base, term indices 0..terms,
    n_fold >= 1 integration order."""

    amp_ratio: float
    freq_base: int
    terms: int
    n_fold: int

    def __post_init__(self):
        if not 0.0 < self.amp_ratio < 1.0:
            raise InvalidParams(f"amp_ratio must be in (0,1), got {self.amp_ratio}")
        if self.freq_base < 2 or self.freq_base != int(self.freq_base):
            raise InvalidParams(f"freq_base must be an integer >= 2, got {self.freq_base}")
        if self.n_fold < 1:
            raise InvalidParams(f"n_fold must be >= 1, got {self.n_fold}")
        if not self.amp_ratio * self.freq_base > 1.0 + 1.5 * math.pi:
            raise InvalidParams(
                f"amp_ratio*freq_base = {self.amp_ratio * self.freq_base} "
                f"must exceed 1 + 3*pi/2 = {1.0 + 1.5 * math.pi:.4f}")
        tail = self.amp_ratio ** (self.terms + 1) / (1.0 - self.amp_ratio)
        if not tail < 1e-12:
            raise InvalidParams(f"truncation tail {tail} must be below 1e-12")


_QUARTER_COS = (1.0, 0.0, -1.0, 0.0)  # cos(m*pi/2) for integer m
_QUARTER_SIN = (0.0, 1.0, 0.0, -1.0)  # sin(m*pi/2)


def _iterated_cos_primitive(x, omega: float, j: int):
    """j-fold primitive of cos(omega t) with all derivatives 0 at t=0.

    cos(omega x - j pi/2)/omega^j minus the degree-(j-1) polynomial that
    cancels the initial values.  The quarter-turn shift is expanded with
    exact {0, +-1} tables and each polynomial term is computed in the
    scaled form x^i / (i! omega^(j-i)), so the result vanishes exactly at
    x = 0 and no large intermediates appear.
    """
    if j == 0:
        return np.cos(omega * x)
    cj, sj = _QUARTER_COS[j % 4], _QUARTER_SIN[j % 4]
    val = (cj * np.cos(omega * x) + sj * np.sin(omega * x)) / omega ** j
    for i in range(j):
        coef = _QUARTER_COS[(j - i) % 4]  # cos((i-j) pi/2), exactly
        if coef != 0.0:
            val = val - coef * x ** i / (math.factorial(i) * omega ** (j - i))
    return val


def make_weierstrass_taylor(params: WeierstrassParams) -> Func:
    """Func whose order-n evaluator is the truncated Weierstrass sum g and
    whose lower orders are exact iterated primitives of it.

    g is evaluated in double precision; terms whose frequency outruns the
    52-bit argument have pseudo-random phase but amplitude below the
    truncation tail's scale, a deterministic noise floor of about
    sum(a^k, k >= 14) that downstream error estimates see honestly.
    """
    a, b, kmax, n = params.amp_ratio, params.freq_base, params.terms, params.n_fold
    label = f"weier:a={a:g},b={b},K={kmax},n={n}"
    omegas = np.array([math.pi * float(b) ** k for k in range(kmax + 1)])
    amps = np.array([a ** k for k in range(kmax + 1)])

    def deriv(order: int):
        fold = n - order
        # terms whose scaled amplitude a^k / omega^fold is below machine
        # significance cannot move any double result; keep the rest
        keep = [(w, amp) for w, amp in zip(omegas, amps)
                if amp / w ** fold > 1e-18]

        def ev(x):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            for w, amp in keep:
                out = out + amp * _iterated_cos_primitive(x, w, fold)
            return out

        return ev

    def fd_reference(k, pts, step):
        # a central difference of a finite cosine sum equals the
        # sinc-filtered sum exactly; matching against it checks the
        # evaluator chain without asking the step to resolve b^k
        if k < n:
            return deriv(k)(pts)
        pts = np.asarray(pts, dtype=float)
        out = np.zeros_like(pts)
        for w, amp in zip(omegas, amps):
            out = out + amp * np.sinc(w * step / math.pi) * np.cos(w * pts)
        return out

    derivs = tuple(deriv(m) for m in range(n + 1))
    regularity = tuple(
        "smooth" if m <= n - 2 else ("ACG*" if m == n - 1 else "C0-only")
        for m in range(n + 1))
    return Func(
        label=label,
        domain=Interval(0.0, 1.0),
        max_order=n,
        derivatives=derivs,
        regularity=regularity,
        primitive_oracle=derivs[n - 1],  # its value at 0 is exactly 0
        fd_reference=fd_reference,
    )


# --------------------------------------------------------------------------
# Oscillator witness: x^2 sin(x^-3)
# --------------------------------------------------------------------------

def make_hk_oscillator() -> Func:
    """F(x) = x^2 sin(x^-3) with F(0)=0; F' is integrable on [0,1] only in
    the conditional (non-Lebesgue) sense."""

    def F(x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            return np.asarray(float(x) ** 2 * math.sin(float(x) ** -3.0)
                              if x > 0 else 0.0)
        out = np.zeros_like(x)
        pos = x > 0
        out[pos] = x[pos] ** 2 * np.sin(x[pos] ** -3.0)
        return out

    def dF(x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            if x <= 0:
                return np.asarray(0.0)
            p = float(x) ** -3.0
            return np.asarray(2.0 * float(x) * math.sin(p)
                              - 3.0 * float(x) ** -2.0 * math.cos(p))
        out = np.zeros_like(x)
        pos = x > 0
        p = x[pos] ** -3.0
        out[pos] = 2.0 * x[pos] * np.sin(p) - 3.0 * x[pos] ** -2.0 * np.cos(p)
        return out

    def fd_sampler(F_, order, rng, count, step):
        # the phase x^-3 must move slowly on the step scale
        return rng.uniform(0.35, 0.98, size=count)

    return Func(
        label="hkosc",
        domain=Interval(0.0, 1.0),
        max_order=1,
        derivatives=(F, dF),
        regularity=("ACG*", "HK-not-L1"),
        singularities={1: SingularitySpec(0.0, "left", "oscillatory-improper")},
        undefined_points={1: (0.0,)},
        primitive_oracle=F,
        fd_sampler=fd_sampler,
    )


# --------------------------------------------------------------------------
# Smooth suite
# --------------------------------------------------------------------------

def _poly_func(k: int) -> Func:
    def deriv(j: int):
        if j > k:
            return lambda x: np.zeros_like(np.asarray(x, dtype=float))
        coef = math.factorial(k) / math.factorial(k - j)

        def ev(x, j=j, coef=coef):
            x = np.asarray(x, dtype=float)
            return coef * x ** (k - j)

        return ev

    top = 720.0 if k == 6 else 0.0  # f^(6) of x^6
    return Func(
        label=f"poly:k={k}",
        domain=Interval(0.0, 1.0),
        max_order=6,
        derivatives=tuple(deriv(j) for j in range(7)),
        regularity=("smooth",) * 7,
        primitive_oracle=lambda x: top * np.asarray(x, dtype=float),
    )


def _exp_func() -> Func:
    ev = lambda x: np.exp(np.asarray(x, dtype=float))
    return Func(
        label="exp",
        domain=Interval(0.0, 1.0),
        max_order=6,
        derivatives=(ev,) * 7,
        regularity=("smooth",) * 7,
        primitive_oracle=lambda x: np.exp(np.asarray(x, dtype=float)) - 1.0,
    )


def _trig_func(name: str) -> Func:
    base = 0.0 if name == "sin" else math.pi / 2.0

    def deriv(j: int):
        def ev(x, j=j):
            x = np.asarray(x, dtype=float)
            return np.sin(x + base + j * math.pi / 2.0)

        return ev

    if name == "sin":
        oracle = lambda x: np.cos(np.asarray(x, dtype=float)) - 1.0  # int of -sin
    else:
        oracle = lambda x: -np.sin(np.asarray(x, dtype=float))  # int of -cos
    return Func(
        label=name,
        domain=Interval(0.0, 1.0),
        max_order=6,
        derivatives=tuple(deriv(j) for j in range(7)),
        regularity=("smooth",) * 7,
        primitive_oracle=oracle,
    )


def _kink_func() -> Func:
    """Primitive of |x - 1/2|: C^1 with a second derivative of sign type."""

    def d0(x):
        x = np.asarray(x, dtype=float)
        left = 0.5 * x - 0.5 * x * x
        right = 0.125 + 0.5 * (x - 0.5) ** 2
        return np.where(x <= 0.5, left, right)

    def d1(x):
        return np.abs(np.asarray(x, dtype=float) - 0.5)

    def d2(x):
        return np.sign(np.asarray(x, dtype=float) - 0.5)

    return Func(
        label="kink",
        domain=Interval(0.0, 1.0),
        max_order=2,
        derivatives=(d0, d1, d2),
        regularity=("ACG*", "ACG*", "HK-not-L1"),
        undefined_points={2: (0.5,)},
        primitive_oracle=lambda x: np.abs(np.asarray(x, dtype=float) - 0.5) - 0.5,
    )


def make_smooth_suite() -> list[Func]:
    """Polynomials x^k (k <= 6), exp, sin, cos, and the kinked primitive."""
    out = [_poly_func(k) for k in range(7)]
    out += [_exp_func(), _trig_func("sin"), _trig_func("cos"), _kink_func()]
    return out


# --------------------------------------------------------------------------
# Registry
# --------------------------------------------------------------------------

_EXPECTED_KEYS = {
    "poly": ("k",),
    "exp": (),
    "sin": (),
    "cos": (),
    "kink": (),
    "bump": ("alpha", "beta", "c"),
    "weier": ("a", "b", "K", "n"),
    "hkosc": (),
}

DEFAULT_LABELS = (
    [f"poly:k={k}" for k in range(7)]
    + ["exp", "sin", "cos", "kink",
       "bump:alpha=5.5,beta=2,c=0.05",
       "bump:alpha=4,beta=2,c=0.05",
       "weier:a=0.5,b=13,K=40,n=2",
       "hkosc"]
)


def parse_label(label: str):
    """Split ``name[:key=value,...]`` into (name, {key: float}).

    Raises UnknownFunction for an unregistered name and InvalidParams with
    the character position and the expected keys for a malformed tail.
    """
    name, sep, tail = label.partition(":")
    if name not in _EXPECTED_KEYS:
        raise UnknownFunction(
            f"unknown function {name!r} at position 0 in {label!r}; "
            f"known names: {', '.join(sorted(_EXPECTED_KEYS))}")
    expected = _EXPECTED_KEYS[name]
    params: dict[str, float] = {}
    if not sep:
        return name, params
    pos = len(name) + 1
    for piece in tail.split(","):
        key, eq, value = piece.partition("=")
        if not eq or not key:
            raise InvalidParams(
                f"expected key=value at position {pos} in {label!r}; "
                f"expected keys: {', '.join(expected) or '(none)'}")
        if key not in expected:
            raise InvalidParams(
                f"unknown key {key!r} at position {pos} in {label!r}; "
                f"expected keys: {', '.join(expected) or '(none)'}")
        try:
            params[key] = float(value)
        except ValueError:
            raise InvalidParams(
                f"non-numeric value {value!r} for key {key!r} at position "
                f"{pos + len(key) + 1} in {label!r}") from None
        pos += len(piece) + 1
    return name, params


def registry_lookup(label: str) -> Func:
    """Resolve a label like ``bump:alpha=5.5,beta=2,c=0.05`` to a Func."""
    name, params = parse_label(label)
    if name == "poly":
        k = int(params.get("k", 3))
        if not 0 <= k <= 6 or k != params.get("k", k):
            raise InvalidParams(f"poly degree k must be an integer in 0..6, got {params.get('k')}")
        return _poly_func(k)
    if name == "exp":
        return _exp_func()
    if name in ("sin", "cos"):
        return _trig_func(name)
    if name == "kink":
        return _kink_func()
    if name == "hkosc":
        return make_hk_oscillator()
    if name == "bump":
        p = BumpSumParams.from_values(
            params.get("alpha", 5.5), params.get("beta", 2.0),
            params.get("c", 0.05))
        return make_bump_sum(p)
    if name == "weier":
        p = WeierstrassParams(
            params.get("a", 0.5), int(params.get("b", 13)),
            int(params.get("K", 40)), int(params.get("n", 2)))
        return make_weierstrass_taylor(p)
    raise UnknownFunction(label)


def default_corpus() -> list[Func]:
    return [registry_lookup(lbl) for lbl in DEFAULT_LABELS]
