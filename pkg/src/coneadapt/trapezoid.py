"""Guaranteed adaptive trapezoidal rule on [0, 1].

The strong semi-norm is ``Var(f')`` and the weak one is
``||f' - f(1) + f(0)||_1``.  For integrands whose strong semi-norm is at most
``tau`` times the weak one, :func:`integrate_adaptive` returns an answer
within ``eps`` of the integral.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from . import _uniform
from .cone import ConeSpec, RunResult, run_multi_stage
from ._uniform import UniformSplineFamily, as_scalar, check_samples

__all__ = [
    "TrapezoidFamily",
    "trapezoid",
    "ftilde_integration",
    "fnorm_lower_integration",
    "integrate_adaptive",
    "integ_lower_bound",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10**7


def trapezoid(samples) -> float:
    """Composite trapezoid rule on ``n >= 2`` equally spaced samples of [0, 1]."""
    v = check_samples(samples)
    return as_scalar((v.sum() - (v[0] + v[-1]) / 2) / (v.size - 1))


def ftilde_integration(samples) -> float:
    """``sum_i |f(x_{i+1}) - f(x_i) - (f(1) - f(0))/(n-1)|``.

    This is the weak semi-norm of the linear spline through the samples and
    never exceeds ``||f' - f(1) + f(0)||_1``.  Rational samples (an object
    array of ``Fraction``) give an exact result.
    """
    v = check_samples(samples)
    d = np.diff(v)
    return as_scalar(np.abs(d - (v[-1] - v[0]) / (v.size - 1)).sum())


def fnorm_lower_integration(samples) -> float:
    """``(n-1) sum_i |f(x_i) - 2 f(x_{i+1}) + f(x_{i+2})|``, a lower bound on ``Var(f')``.

    Returns 0 for fewer than three samples, where it is undefined.
    """
    v = check_samples(samples)
    if v.size < 3:
        return 0.0
    d = np.diff(v)
    return as_scalar((v.size - 1) * np.abs(np.diff(d)).sum())


class TrapezoidFamily(UniformSplineFamily):
    """Composite trapezoid rules ``T_n`` with the spline-based semi-norm estimators."""

    def solve(self, n, values):
        return trapezoid(values)

    def ftilde(self, n, values):
        return ftilde_integration(values)

    def fnorm_lower(self, n, values):
        return fnorm_lower_integration(values) if n >= 3 else None


def integrate_adaptive(f, eps: float, tau: float = 10.0, budget: Optional[int] = DEFAULT_BUDGET,
                       tau_policy: str = "inflate") -> RunResult:
    """Integrate ``f`` over [0, 1] to absolute tolerance ``eps``.

    Parameters
    ----------
    f : callable or SampledFunction
        Vectorized integrand.
    eps : float
        Absolute error tolerance.
    tau : float
        Cone constant, at least 2.  The initial sample size is
        ``ceil((tau + 1)/2) + 1``.
    budget : int, optional
        Maximum number of samples.  Exceeding it sets ``warning`` on the result.
    tau_policy : {"inflate", "fixed"}
        Whether ``tau`` is doubled past the data-driven cone-ratio estimate
        when the data prove ``f`` lies outside the cone.

    Returns
    -------
    RunResult
        ``answer`` is the trapezoid value at the final sample size.

    Examples
    --------
    >>> r = integrate_adaptive(lambda x: 3 * x + 1, 1e-8, tau=10)
    >>> r.answer, r.cost
    (2.5, 7)
    """
    if not tau >= 2:
        raise ValueError("tau must be at least 2")
    return run_multi_stage(TrapezoidFamily(), ConeSpec(tau, 2.0), f, eps, budget, tau_policy)


def integ_lower_bound(which: str, sigma_or_tau: float, s: float, eps: float) -> int:
    """Lower bound on the cost of any algorithm guaranteed for integration.

    ``which="ball"`` bounds algorithms for ``Var(f') <= sigma`` on inputs with
    ``Var(f') <= s``; ``which="cone"`` bounds algorithms for the cone with
    constant ``tau > 2``.
    """
    return _uniform.lower_bound(which, sigma_or_tau, s, eps)
