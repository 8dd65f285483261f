"""Generic machinery for guaranteed adaptive algorithms on cones of functions.

A problem is described by a :class:`ProblemFamily`: a nested sequence of
fixed-cost algorithms ``A_n`` with a known error coefficient ``h(n)``, plus an
estimator ``ftilde`` of a weak semi-norm whose two-sided error is controlled by
``h_minus`` and ``h_plus``.  The engines in this module turn such a family into
automatic algorithms:

* :func:`run_non_adaptive` for inputs in a ball of the strong semi-norm,
* :func:`run_two_stage` and :func:`run_multi_stage` for inputs in the cone
  ``{f : |f|_F <= tau |f|_Ftilde}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Literal, Optional

import numpy as np

__all__ = [
    "ErrorModel",
    "ConeSpec",
    "InflationFactors",
    "Stage",
    "RunResult",
    "SampledFunction",
    "ProblemFamily",
    "UnrepresentableIndexError",
    "InfiniteInflationError",
    "h_inverse",
    "inflation_factors",
    "run_non_adaptive",
    "run_two_stage",
    "run_multi_stage",
    "tau_min_estimate",
    "cost_bounds",
]

# Largest index the generic searches will consider.
INDEX_CEILING = 2**62


class UnrepresentableIndexError(ValueError):
    """No admissible index satisfies the requested error level."""


class InfiniteInflationError(ValueError):
    """``h_plus(n) >= 1/tau``: the sample size is too small for this cone."""


@dataclass(frozen=True)
class ErrorModel:
    """Error coefficients of a family of fixed-cost algorithms.

    The index set is ``{n_min, n_min + 1, ...}``.  ``h``, ``h_minus`` and
    ``h_plus`` must be non-increasing on it with infimum zero.
    """

    h: Callable[[int], float]
    h_minus: Callable[[int], float]
    h_plus: Callable[[int], float]
    n_min: int = 2
    rho: float = 2.0
    r: float = 2.0

    def __post_init__(self):
        if self.rho < 1:
            raise ValueError("rho must be >= 1")
        if self.r <= 1:
            raise ValueError("r must be > 1")


@dataclass
class ConeSpec:
    """Cone constant ``tau`` with its floor ``tau_min``; ``sigma`` is a ball radius."""

    tau: float
    tau_min: float
    sigma: Optional[float] = None

    def __post_init__(self):
        if not self.tau > 0 or not self.tau_min > 0:
            raise ValueError("tau and tau_min must be positive")
        if self.sigma is not None and not self.sigma > 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class InflationFactors:
    c_n: float
    c_tilde_n: float
    C_n: float


@dataclass(frozen=True)
class Stage:
    """One iteration of an adaptive engine."""

    n: int
    ftilde: float
    fnorm_lower: Optional[float]
    tau: float


@dataclass
class RunResult:
    """Outcome of one engine run.

    ``cost`` counts distinct abscissae at which ``f`` was evaluated.
    ``cost_nominal`` is the cost as the algorithm statement tallies it
    (``n_F + n_A`` for the two-stage engine, the final ``n`` otherwise).
    """

    answer: Any
    cost: int
    trace: list = field(default_factory=list)
    final_tau: float = math.nan
    warning: bool = False
    cone_violation_detected: bool = False
    cost_nominal: Optional[int] = None

    @property
    def n_sequence(self) -> list:
        return [s.n for s in self.trace]

    @property
    def final_n(self) -> int:
        return self.trace[-1].n


class SampledFunction:
    """A function on [0, 1] with an evaluation counter and a grid cache.

    ``f`` must accept a 1-d float array and return an array of the same
    shape (scalar returns are broadcast).  Uniform grids ``x_i = i/(n-1)``
    requested through :meth:`grid` reuse the values of the previously
    requested grid wherever abscissae coincide.
    """

    def __init__(self, f: Callable):
        self.f = f
        self.n_calls = 0
        self._arbitrary = 0
        self._denominators: set = set()
        self._grid_distinct = 0
        self._cache_m: Optional[int] = None
        self._cache_values: Optional[np.ndarray] = None

    @property
    def cost(self) -> int:
        """Number of distinct abscissae sampled so far."""
        return self._grid_distinct + self._arbitrary

    def _eval(self, x: np.ndarray) -> np.ndarray:
        self.n_calls += x.size
        if x.size == 0:
            return np.empty(0)
        y = np.asarray(self.f(x), dtype=float)
        if y.shape != x.shape:
            y = np.broadcast_to(y, x.shape).copy()
        return y

    def at(self, x) -> np.ndarray:
        """Evaluate at arbitrary points; every point is charged."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        self._arbitrary += x.size
        return self._eval(x)

    def _charge_grid(self, m: int) -> None:
        # |union of grids {i/m_j}| = 1 + sum of totient(q) over the union of divisors of the m_j
        from sympy import divisors, totient

        if not self._denominators:
            self._grid_distinct = 1
        for q in divisors(m):
            if q not in self._denominators:
                self._denominators.add(q)
                self._grid_distinct += int(totient(q))

    def grid(self, n: int) -> np.ndarray:
        """Values at ``x_i = (i-1)/(n-1)``, ``i = 1..n``."""
        if n < 2:
            raise ValueError("a uniform grid needs n >= 2")
        m = n - 1
        self._charge_grid(m)
        old_m, old = self._cache_m, self._cache_values
        if old_m is None:
            values = self._eval(np.arange(n) / m)
        elif old_m == m:
            values = old
        elif m % old_m == 0:
            k = m // old_m
            values = np.empty(n)
            body = values[:-1].reshape(old_m, k)
            body[:, 0] = old[:-1]
            cols = np.arange(1, k)
            x = (np.arange(old_m)[:, None] * k + cols[None, :]) / m
            body[:, 1:] = self._eval(x.ravel()).reshape(old_m, k - 1)
            values[-1] = old[-1]
        elif old_m % m == 0:
            values = old[:: old_m // m].copy()
        else:
            g = math.gcd(old_m, m)
            idx = np.arange(n)
            shared = idx % (m // g) == 0
            values = np.empty(n)
            values[shared] = old[:: old_m // g]
            values[~shared] = self._eval(idx[~shared] / m)
        self._cache_m, self._cache_values = m, values
        return values


class ProblemFamily:
    """Abstract problem family driving the engines.

    Subclasses supply :attr:`error_model`, :attr:`tau_min` and the
    data-to-output maps ``solve``, ``ftilde`` and ``fnorm_lower``.  The
    index-selection hooks have generic defaults that follow the multi-stage
    algorithm literally; concrete families may override them with equivalent
    closed forms.
    """

    error_model: ErrorModel
    tau_min: float

    # -- data -----------------------------------------------------------------
    def nodes(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def sample(self, f: SampledFunction, n: int) -> np.ndarray:
        return f.at(self.nodes(n))

    def solve(self, n: int, values: np.ndarray):
        raise NotImplementedError

    def ftilde(self, n: int, values: np.ndarray) -> float:
        raise NotImplementedError

    def fnorm_lower(self, n: int, values: np.ndarray) -> Optional[float]:
        return None

    # -- index selection ------------------------------------------------------
    def next_embedding_index(self, n: int, target: int) -> int:
        """Smallest admissible index ``>= target`` whose data embed those of ``n``."""
        raise NotImplementedError

    def largest_embedding_index(self, n: int, limit: int) -> int:
        """Largest index ``<= limit`` whose data embed those of ``n`` (``n`` if none)."""
        raise NotImplementedError

    def first_index(self, tau: float) -> int:
        """``min{n : h_plus(n) < 1/tau}``."""
        model = self.error_model
        return _min_index(lambda n: tau * model.h_plus(n) < 1, model.n_min)

    def converged(self, n: int, ftilde: float, tau: float, eps: float) -> bool:
        model = self.error_model
        C = 1.0 / (1.0 - tau * model.h_plus(n))
        return tau * C * model.h(n) * ftilde <= eps

    def next_index(self, n: int, ftilde: float, tau: float, eps: float) -> int:
        model = self.error_model
        c_tilde = 1.0 + tau * model.h_minus(n)
        target = n + 1
        if ftilde > 0:
            target = max(target, _min_index(lambda k: model.h(k) <= eps * c_tilde / (tau * ftilde), model.n_min))
        return self.next_embedding_index(n, target)

    def grow_index(self, n: int, tau: float) -> int:
        """Index to move to after ``tau`` was inflated past what ``n`` supports."""
        return self.next_embedding_index(n, max(n + 1, self.first_index(tau)))

    def closed_cost_bounds(self, tau, seminorm, which_norm, eps):
        """Optional family-specific multi-stage cost bracket; ``None`` if absent."""
        return None


def _min_index(pred: Callable[[int], bool], start: int, ceiling: int = INDEX_CEILING) -> int:
    """Smallest ``n >= start`` with ``pred(n)``, for ``pred`` monotone false -> true."""
    if pred(start):
        return start
    lo, step = start, 1
    while True:
        hi = start + step
        if hi > ceiling:
            if pred(ceiling):
                hi = ceiling
                break
            raise UnrepresentableIndexError(f"no admissible index up to {ceiling}")
        if pred(hi):
            break
        lo, step = hi, step * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _h_kind(model: ErrorModel, which: str, cone: Optional[ConeSpec]) -> Callable[[int], float]:
    if which == "h":
        return model.h
    if cone is None:
        raise ValueError(f"h_inverse(which={which!r}) needs a cone")
    tau, tau_min = cone.tau, cone.tau_min

    def hk(n):
        hp = tau * model.h_plus(n)
        if hp >= 1:
            return math.inf
        c = 1 + (tau if which == "h1" else tau_min) * model.h_minus(n)
        return c * model.h(n) / (1 - hp)

    if which not in ("h1", "h2"):
        raise ValueError(f"unknown error coefficient {which!r}")
    return hk


def h_inverse(model: ErrorModel, which: Literal["h", "h1", "h2"], eps: float,
              cone: Optional[ConeSpec] = None, n_max: Optional[int] = None) -> int:
    """``min{n in I : h_which(n) <= eps}``.

    ``h1 = C_n c~_n h`` and ``h2 = C_n c_n h`` are only defined where
    ``h_plus(n) < 1/tau``; smaller indices are treated as inadmissible.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    hk = _h_kind(model, which, cone)
    start = model.n_min
    if which != "h":
        start = _min_index(lambda n: cone.tau * model.h_plus(n) < 1, model.n_min)
    return _min_index(lambda n: hk(n) <= eps, start, n_max or INDEX_CEILING)


def inflation_factors(model: ErrorModel, cone: ConeSpec, n: int) -> InflationFactors:
    hp = model.h_plus(n)
    if cone.tau * hp >= 1:
        raise InfiniteInflationError(f"h_plus({n}) = {hp} >= 1/tau = {1 / cone.tau}")
    hm = model.h_minus(n)
    return InflationFactors(1 + cone.tau_min * hm, 1 + cone.tau * hm, 1 / (1 - cone.tau * hp))


def tau_min_estimate(ftilde_n: float, fnorm_lower_n: float, h_plus_n: float) -> float:
    """Data-driven lower bound on the cone ratio of ``f`` (0/0 is taken as 0).

    If the returned value exceeds ``tau`` the input cannot lie in the cone.
    """
    if fnorm_lower_n == 0:
        return 0.0
    denom = ftilde_n + h_plus_n * fnorm_lower_n
    return fnorm_lower_n / denom if denom > 0 else math.inf


def _as_sampled(f) -> SampledFunction:
    return f if isinstance(f, SampledFunction) else SampledFunction(f)


def run_non_adaptive(family: ProblemFamily, sigma: float, f, eps: float) -> RunResult:
    """Fixed sample size ``h^{-1}(eps/sigma)``; guaranteed when ``|f|_F <= sigma``."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    f = _as_sampled(f)
    n = h_inverse(family.error_model, "h", eps / sigma)
    values = family.sample(f, n)
    trace = [Stage(n, family.ftilde(n, values), family.fnorm_lower(n, values), math.nan)]
    return RunResult(family.solve(n, values), f.cost, trace, cost_nominal=n)


def run_two_stage(family: ProblemFamily, cone: ConeSpec, f, eps: float, n_F: int,
                  budget: Optional[int] = None) -> RunResult:
    """Bound the weak semi-norm from ``n_F`` samples, then solve once."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    f = _as_sampled(f)
    model = family.error_model
    C = inflation_factors(model, cone, n_F).C_n
    values = family.sample(f, n_F)
    ft = family.ftilde(n_F, values)
    fl = family.fnorm_lower(n_F, values)
    trace = [Stage(n_F, ft, fl, cone.tau)]
    warning = False
    if ft == 0:
        n_A = model.n_min
    else:
        n_A = h_inverse(model, "h", eps / (cone.tau * C * ft))
    if budget is not None and n_A > budget:
        n_A, warning = max(model.n_min, budget), True
    values = family.sample(f, n_A)
    trace.append(Stage(n_A, family.ftilde(n_A, values), family.fnorm_lower(n_A, values), cone.tau))
    violation = fl is not None and tau_min_estimate(ft, fl, model.h_plus(n_F)) > cone.tau
    return RunResult(family.solve(n_A, values), f.cost, trace, cone.tau, warning, violation,
                     cost_nominal=n_F + n_A)


def run_multi_stage(family: ProblemFamily, cone: ConeSpec, f, eps: float,
                    budget: Optional[int] = None,
                    tau_policy: Literal["fixed", "inflate"] = "inflate") -> RunResult:
    """Iterate nested fixed-cost algorithms until the data-driven bound meets ``eps``.

    With ``tau_policy="inflate"``, whenever the necessary condition for cone
    membership fails at the current sample size, ``tau`` is replaced by twice
    the data-driven lower estimate of the cone ratio.

    When a requested sample size exceeds ``budget`` the engine falls back to
    the largest embedding index within budget, sets ``warning`` and returns
    that answer.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if tau_policy not in ("fixed", "inflate"):
        raise ValueError(f"unknown tau policy {tau_policy!r}")
    tau = cone.tau
    if tau < family.tau_min:
        raise ValueError(f"tau = {tau} is below tau_min = {family.tau_min}")
    f = _as_sampled(f)
    model = family.error_model
    trace: list = []
    warning = violation = False

    n = family.first_index(tau)
    if budget is not None and n > budget:
        n, warning = max(model.n_min, budget), True
    while True:
        values = family.sample(f, n)
        ft = family.ftilde(n, values)
        fl = family.fnorm_lower(n, values)
        if warning:
            trace.append(Stage(n, ft, fl, tau))
            break
        n_next = None
        if tau_policy == "inflate" and fl is not None:
            tmin = tau_min_estimate(ft, fl, model.h_plus(n))
            if tau < tmin:
                tau = 2 * tmin
                violation = True
                if tau * model.h_plus(n) >= 1:
                    n_next = family.grow_index(n, tau)
        trace.append(Stage(n, ft, fl, tau))
        if n_next is None:
            if family.converged(n, ft, tau, eps):
                break
            n_next = family.next_index(n, ft, tau, eps)
        if budget is not None and n_next > budget:
            warning = True
            fallback = family.largest_embedding_index(n, budget)
            if fallback <= n:
                break
            n = fallback
            continue
        n = n_next
    return RunResult(family.solve(n, values), f.cost, trace, tau, warning, violation, cost_nominal=n)


def cost_bounds(engine: Literal["two_stage", "multi_stage"], family: ProblemFamily, cone: ConeSpec,
                seminorm: float, which_norm: Literal["F", "Ftilde"], eps: float,
                n_F: Optional[int] = None, form: Literal["auto", "generic"] = "auto"):
    """Two-sided cost bracket ``(lower, upper)`` for an in-cone input.

    ``seminorm`` is the strong (``"F"``) or weak (``"Ftilde"``) semi-norm of
    the input.  For the multi-stage engine a family may provide a sharper
    closed-form bracket, used unless ``form="generic"``.
    """
    if not seminorm > 0:
        raise ValueError("seminorm must be positive")
    if which_norm not in ("F", "Ftilde"):
        raise ValueError(f"unknown norm {which_norm!r}")
    model = family.error_model
    tau, tau_min = cone.tau, cone.tau_min
    if engine == "multi_stage":
        if form == "auto":
            closed = family.closed_cost_bounds(tau, seminorm, which_norm, eps)
            if closed is not None:
                return closed
        n1 = family.first_index(tau)
        if which_norm == "F":
            lower = max(n1, h_inverse(model, "h", eps / seminorm))
            upper = max(n1, math.ceil(model.r * h_inverse(model, "h2", tau_min * eps / (tau * seminorm), cone)))
        else:
            lower = max(n1, h_inverse(model, "h", eps / (tau * seminorm)))
            upper = max(n1, math.ceil(model.r * h_inverse(model, "h1", eps / (tau * seminorm), cone)))
        return lower, upper
    if engine == "two_stage":
        if n_F is None:
            raise ValueError("two-stage bounds need n_F")
        fac = inflation_factors(model, cone, n_F)
        if which_norm == "F":
            lower = n_F + h_inverse(model, "h", eps / seminorm)
            upper = n_F + h_inverse(model, "h", tau_min * eps / (tau * fac.C_n * fac.c_n * seminorm))
        else:
            lower = n_F + h_inverse(model, "h", eps / (tau * seminorm))
            upper = n_F + h_inverse(model, "h", eps / (tau * fac.C_n * fac.c_tilde_n * seminorm))
        return lower, upper
    raise ValueError(f"unknown engine {engine!r}")


def exact_ceil_sqrt(q: Fraction) -> int:
    """``ceil(sqrt(q))`` for a non-negative rational, computed exactly."""
    if q <= 0:
        return 0
    k = math.isqrt(q.numerator // q.denominator)
    while k * k * q.denominator < q.numerator:
        k += 1
    while k > 0 and (k - 1) ** 2 * q.denominator >= q.numerator:
        k -= 1
    return k
