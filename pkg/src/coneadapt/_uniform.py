"""Uniform nested grids and linear splines on [0, 1].

Both the integration and the L-infinity recovery problems use the same
error coefficients

    h(n) = 1/(8(n-1)^2),   h_minus = 0,   h_plus(n) = 1/(2n-2),

the same index set ``{2, 3, ...}`` and the embedding ``n -> 1 + k(n-1)``.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .cone import ErrorModel, ProblemFamily, SampledFunction, exact_ceil_sqrt


def h(n: int) -> float:
    return 1.0 / (8.0 * (n - 1) ** 2)


def h_minus(n: int) -> float:
    return 0.0


def h_plus(n: int) -> float:
    return 1.0 / (2.0 * n - 2.0)


SPLINE_ERROR_MODEL = ErrorModel(h=h, h_minus=h_minus, h_plus=h_plus, n_min=2, rho=2.0, r=2.0)


def h_inverse_closed(eps: float) -> int:
    """``ceil(sqrt(1/(8 eps))) + 1``, evaluated in exact rational arithmetic."""
    return exact_ceil_sqrt(1 / (8 * Fraction(eps))) + 1


def h1_inverse_closed(eps: float, tau: float) -> int:
    """``1 + ceil(sqrt(1/(8 eps) + tau^2/16) + tau/4)``, the least ``n`` with
    ``1/(4(n-1)(2n-2-tau)) <= eps``.

    Equivalently the least ``m = n - 1`` with ``2m > tau`` and
    ``8m^2 - 4 tau m - 1/eps >= 0``; the float estimate is corrected with
    exact comparisons.
    """
    t, e = Fraction(tau), Fraction(eps)

    def ok(m):
        return 2 * m > t and 8 * m * m - 4 * t * m - 1 / e >= 0

    m = math.ceil(math.sqrt(1 / (8 * eps) + tau * tau / 16) + tau / 4)
    while m > 1 and ok(m - 1):
        m -= 1
    while not ok(m):
        m += 1
    return m + 1


def g(n: int) -> float:
    """Fooling-function lower bound ``1/(16(n+1)^2)`` on the index set ``{0, 1, ...}``."""
    return 1.0 / (16.0 * (n + 1) ** 2)


def g_inverse_closed(eps) -> int:
    """``ceil(sqrt(1/(16 eps))) - 1`` in exact arithmetic."""
    return exact_ceil_sqrt(1 / (16 * Fraction(eps))) - 1


def g_inverse_scan(eps, n_limit: int = 10**7) -> int:
    """``max{n : g(n) > eps} + 1`` by direct search (max of the empty set is -1)."""
    e = Fraction(eps)
    best = -1
    for n in range(n_limit):
        if Fraction(1, 16 * (n + 1) ** 2) > e:
            best = n
        else:
            break
    return best + 1


def lower_bound(which: str, sigma_or_tau: float, s: float, eps: float) -> int:
    """Complexity lower bound shared by both spline problems.

    ``which="ball"``: ``ceil(sqrt(min(s, sigma)/(16 eps))) - 1``.
    ``which="cone"``: ``ceil(sqrt((tau-2) s/(32 tau eps))) - 1``, needs ``tau > 2``.
    """
    if not eps > 0 or not s > 0:
        raise ValueError("eps and s must be positive")
    x, s_, e = Fraction(sigma_or_tau), Fraction(s), Fraction(eps)
    if which == "ball":
        return exact_ceil_sqrt(min(s_, x) / (16 * e)) - 1
    if which == "cone":
        if not x > 2:
            raise ValueError("the cone lower bound needs tau > 2")
        return exact_ceil_sqrt((x - 2) * s_ / (32 * x * e)) - 1
    raise ValueError(f"unknown set {which!r}")


class UniformSplineFamily(ProblemFamily):
    """Linear splines on the grids ``x_i = (i-1)/(n-1)``."""

    error_model = SPLINE_ERROR_MODEL
    tau_min = 2.0

    def nodes(self, n: int) -> np.ndarray:
        return np.arange(n) / (n - 1)

    def sample(self, f: SampledFunction, n: int) -> np.ndarray:
        return f.grid(n)

    def first_index(self, tau: float) -> int:
        return math.ceil((tau + 1) / 2) + 1

    def converged(self, n: int, ftilde: float, tau: float, eps: float) -> bool:
        return ftilde <= 4 * eps * (n - 1) * (2 * n - 2 - tau) / tau

    def next_index(self, n: int, ftilde: float, tau: float, eps: float) -> int:
        k = math.ceil(math.sqrt(tau * ftilde / (8 * eps)) / (n - 1))
        return 1 + (n - 1) * max(2, k)

    def grow_index(self, n: int, tau: float) -> int:
        return 1 + (n - 1) * math.ceil((tau + 1) / (2 * n - 2))

    def next_embedding_index(self, n: int, target: int) -> int:
        if target <= n:
            return n
        return 1 + (n - 1) * math.ceil((target - 1) / (n - 1))

    def largest_embedding_index(self, n: int, limit: int) -> int:
        if limit <= n:
            return n
        return 1 + (n - 1) * ((limit - 1) // (n - 1))

    def closed_cost_bounds(self, tau, seminorm, which_norm, eps):
        # strong norm: sqrt(s/(8 eps)) lower, sqrt(tau s/(4 eps)) upper; weak: tau s/8, tau s/2
        lo_scale, up_scale = (1, 4) if which_norm == "F" else (tau, 2)
        r = Fraction(lo_scale) * Fraction(seminorm) / (8 * Fraction(eps))
        lower = max(math.ceil((tau + 1) / 2), exact_ceil_sqrt(r)) + 1
        upper = math.floor(math.sqrt(tau * seminorm / (up_scale * eps)) + tau + 4)
        return lower, upper


def check_samples(values, n_min: int = 2) -> np.ndarray:
    """1-d float array, or an object array when the samples are exact rationals."""
    values = np.asarray(values)
    if values.dtype != object:
        values = values.astype(float)
    if values.ndim != 1 or values.size < n_min:
        raise ValueError(f"need at least {n_min} equally spaced samples")
    return values


def as_scalar(x):
    """Keep exact rationals exact, turn everything else into a float."""
    return x if isinstance(x, Fraction) else float(x)
