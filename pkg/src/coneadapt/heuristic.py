"""Trapezoid doubling with a Richardson-type stopping rule.

This is the conventional, unguaranteed way to stop a quadrature ladder:
compare two successive trapezoid sums and stop once their scaled difference
is small.  It is easily fooled by integrands that look flat on the sampled
grids.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cone import SampledFunction
from .trapezoid import trapezoid

__all__ = ["HeuristicResult", "heuristic_trapezoid"]


@dataclass
class HeuristicResult:
    answer: float
    cost: int
    stopped_at: int
    claimed_error: float
    warning: bool = False


def heuristic_trapezoid(f, eps: float, max_doublings: int = 24, min_level: int = 1) -> HeuristicResult:
    """Trapezoid sums on ``n_i = 2^i + 1`` points until ``|T_i - T_{i-1}|/3 <= eps``.

    Parameters
    ----------
    f : callable
        Vectorized integrand on [0, 1].
    eps : float
        Tolerance for the error estimate.
    max_doublings : int
        Largest ``i`` tried.  If the rule never triggers, the last sum is
        returned with ``warning=True``.
    min_level : int
        Smallest ``i`` at which stopping is allowed (at least 1).

    Examples
    --------
    >>> r = heuristic_trapezoid(lambda x: 2 * x, 1e-10)
    >>> r.answer, r.stopped_at
    (1.0, 3)
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if min_level < 1 or max_doublings < min_level:
        raise ValueError("need 1 <= min_level <= max_doublings")
    g = f if isinstance(f, SampledFunction) else SampledFunction(f)
    prev = trapezoid(g.grid(2))
    est = float("inf")
    for i in range(1, max_doublings + 1):
        n = 2**i + 1
        cur = trapezoid(g.grid(n))
        est = abs(cur - prev) / 3
        if i >= min_level and est <= eps:
            return HeuristicResult(cur, g.cost, n, est)
        prev = cur
    return HeuristicResult(cur, g.cost, n, est, warning=True)
