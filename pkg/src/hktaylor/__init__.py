"""Numerical verification of Taylor-remainder estimates for integrands
that are Henstock-Kurzweil integrable but possibly not Lebesgue integrable.

Subpackages: quadrature (limit-aware adaptive integration), norms
(Alexiewicz, subinterval, Lp), taylor (polynomials and remainder forms),
bounds (inequality checks), corpus (test functions with exact derivative
evaluators), cli (verification sweeps).
"""

__version__ = "0.1.0"

from .quadrature import (  # noqa: F401
    AUDIT_FACTOR,
    Interval,
    IntegralEstimate,
    SingularitySpec,
    NO_SINGULARITY,
    cumulative,
    integrate,
)
