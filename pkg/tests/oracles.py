"""Shared independent oracles for the test suite.

These deliberately avoid the package's quadrature and norm machinery:
dense Riemann sums and dense grid scans only.
"""

import numpy as np

MILLION = 1_000_000


def riemann(f, a, b, panels=MILLION):
    """Midpoint Riemann sum with a dense uniform grid."""
    h = (b - a) / panels
    t = a + (np.arange(panels) + 0.5) * h
    return float(np.sum(np.asarray(f(t), dtype=float)) * h)


def dense_sup(f, a, b, points=MILLION):
    """max |f| on a dense uniform grid."""
    t = np.linspace(a, b, points + 1)
    return float(np.max(np.abs(np.asarray(f(t), dtype=float))))


def dense_alexiewicz(f, a, b, points=MILLION):
    """sup_x |int_a^x f| via a cumulative midpoint sum."""
    h = (b - a) / points
    t = a + (np.arange(points) + 0.5) * h
    c = np.cumsum(np.asarray(f(t), dtype=float)) * h
    return float(max(np.max(np.abs(c)), 0.0))


def dense_subinterval(f, a, b, points=MILLION):
    """sup over subintervals |int_c^d f| = range of the primitive."""
    h = (b - a) / points
    t = a + (np.arange(points) + 0.5) * h
    c = np.concatenate([[0.0], np.cumsum(np.asarray(f(t), dtype=float)) * h])
    return float(np.max(c) - np.min(c))


def dense_lp(f, a, b, p, points=MILLION):
    h = (b - a) / points
    t = a + (np.arange(points) + 0.5) * h
    return float((np.sum(np.abs(np.asarray(f(t), dtype=float)) ** p) * h) ** (1.0 / p))
