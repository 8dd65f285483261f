"""Guaranteed adaptive L-infinity recovery by linear splines on [0, 1].

The strong semi-norm is ``||f''||_inf`` and the weak one is
``||f' - f(1) + f(0)||_inf``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _uniform
from .cone import ConeSpec, RunResult, run_multi_stage
from ._uniform import UniformSplineFamily, as_scalar, check_samples

__all__ = [
    "SplineApproximant",
    "SplineFamily",
    "linear_spline_eval",
    "ftilde_approx",
    "fnorm_lower_approx",
    "approximate_adaptive",
    "sup_error_on_grid",
    "approx_lower_bound",
    "DEFAULT_SUP_GRID",
]

DEFAULT_SUP_GRID = 2**17


@dataclass(frozen=True)
class SplineApproximant:
    """Piecewise-linear interpolant of ``n`` values at ``x_i = (i-1)/(n-1)``."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.n) / (self.n - 1)

    def __call__(self, x):
        return linear_spline_eval(self, x)


def linear_spline_eval(approximant: SplineApproximant, x):
    """Evaluate ``(n-1)[f(x_i)(x_{i+1} - x) + f(x_{i+1})(x - x_i)]`` on the cell holding ``x``."""
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0) or np.any(x > 1) or np.any(np.isnan(x)):
        raise ValueError("spline is defined on [0, 1] only")
    v = approximant.values
    m = v.size - 1
    k = np.rint(x * m).astype(np.int64)
    on_node = k / m == x
    i = np.minimum(np.floor(x * m).astype(np.int64), m - 1)
    xi = i / m
    xi1 = (i + 1) / m
    out = m * (v[i] * (xi1 - x) + v[i + 1] * (x - xi))
    out = np.where(on_node, v[k], out)
    return float(out[0]) if scalar else out


def ftilde_approx(samples) -> float:
    """``max_i |(n-1)[f(x_{i+1}) - f(x_i)] - f(1) + f(0)|``; never exceeds the weak semi-norm."""
    v = check_samples(samples)
    return as_scalar(np.abs((v.size - 1) * np.diff(v) - (v[-1] - v[0])).max())


def fnorm_lower_approx(samples) -> float:
    """``(n-1)^2 max_i |f(x_i) - 2 f(x_{i+1}) + f(x_{i+2})|``, a lower bound on ``||f''||_inf``.

    Returns 0 for fewer than three samples.
    """
    v = check_samples(samples)
    if v.size < 3:
        return 0.0
    return as_scalar((v.size - 1) ** 2 * np.abs(np.diff(v, 2)).max())


class SplineFamily(UniformSplineFamily):
    def solve(self, n, values):
        return SplineApproximant(values)

    def ftilde(self, n, values):
        return ftilde_approx(values)

    def fnorm_lower(self, n, values):
        return fnorm_lower_approx(values) if n >= 3 else None


def approximate_adaptive(f, eps: float, tau: float = 10.0, budget: Optional[int] = 10**7,
                         tau_policy: str = "inflate"):
    """Recover ``f`` on [0, 1] to sup-norm tolerance ``eps``.

    Same stage structure and index rules as the adaptive trapezoidal rule;
    returns ``(RunResult, SplineApproximant)``.
    """
    if not tau >= 2:
        raise ValueError("tau must be at least 2")
    result = run_multi_stage(SplineFamily(), ConeSpec(tau, 2.0), f, eps, budget, tau_policy)
    return result, result.answer


def sup_error_on_grid(f, approximant: SplineApproximant, grid_size: Optional[int] = None) -> float:
    """Max of ``|f - spline|`` over a uniform grid, the spline nodes and the kinks of ``f``.

    ``grid_size`` defaults to ``max(2**17, n - 1)`` and may not be smaller
    than the number of spline cells.  Optional attributes on ``f`` sharpen
    the check:

    * ``kinks``: abscissae where ``f''`` jumps, added to the point set;
    * ``support``: ``(lo, hi)`` outside which ``f`` vanishes; points there
      are skipped since the spline vanishes on cells with both nodes outside;
    * ``extremum_candidates(nodes, values)``: further points (for instance
      interior stationary points of ``f - spline``) added to the set.
    """
    m = approximant.n - 1
    if grid_size is None:
        grid_size = max(DEFAULT_SUP_GRID, m)
    if grid_size < m:
        raise ValueError("grid_size must be at least the number of spline cells")
    lo, hi = getattr(f, "support", (0.0, 1.0))
    # widen by one cell: a cell straddling the support edge has a nonzero node
    lo = max(0.0, lo - 1.0 / m)
    hi = min(1.0, hi + 1.0 / m)
    parts = [
        _grid_between(grid_size, lo, hi),
        _grid_between(m, lo, hi),
        np.asarray([k for k in getattr(f, "kinks", ()) if lo <= k <= hi], dtype=float),
    ]
    extra = getattr(f, "extremum_candidates", None)
    if extra is not None:
        c = np.asarray(extra(approximant.nodes, approximant.values), dtype=float)
        parts.append(c[(c >= lo) & (c <= hi)])
    pts = np.concatenate(parts)
    if pts.size == 0:
        return 0.0
    return float(np.abs(np.asarray(f(pts), dtype=float) - linear_spline_eval(approximant, pts)).max())


def _grid_between(m: int, lo: float, hi: float) -> np.ndarray:
    i0 = max(0, int(np.floor(lo * m)))
    i1 = min(m, int(np.ceil(hi * m)))
    return np.arange(i0, i1 + 1) / m


def approx_lower_bound(which: str, sigma_or_tau: float, s: float, eps: float) -> int:
    """Lower bound on the cost of any algorithm guaranteed for L-infinity recovery."""
    return _uniform.lower_bound(which, sigma_or_tau, s, eps)
