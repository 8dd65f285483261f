"""Test functions with exact analytic metadata.

* :class:`Bump` -- the piecewise-quadratic bump family used in the Monte Carlo
  experiments, with exact integral and semi-norms;
* :func:`oscillatory_fluky` -- ``1 - cos(2 pi k x)``, which vanishes on every
  grid whose spacing divides ``1/k``;
* :func:`make_fooling_pair` -- zero-data fooling functions behind the
  complexity lower bounds;
* :func:`nonconvexity_witness` -- two cone members whose midpoint leaves the cone;
* :func:`reference_integral` -- an independent quadrature oracle.

Exact semi-norm arithmetic uses :class:`PiecewiseLinear` with rational
breakpoints.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

import numpy as np

__all__ = [
    "BumpSpec",
    "Bump",
    "make_bump",
    "sample_bump",
    "cone_probability",
    "Fluky",
    "oscillatory_fluky",
    "PiecewiseLinear",
    "FoolingPair",
    "make_fooling_pair",
    "NonConvexityWitness",
    "nonconvexity_witness",
    "OracleError",
    "reference_integral",
    "numeric_seminorms",
    "export_corpus",
]

FAMILIES = ("integration", "approximation")
# slack for float round-off in the support check of sampled centres
_SUPPORT_SLACK = 1e-15


def _check_family(family: str) -> None:
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")


# ---------------------------------------------------------------------------
# exact piecewise-linear arithmetic
# ---------------------------------------------------------------------------

class PiecewiseLinear:
    """Continuous piecewise-linear function on [0, 1] with rational breakpoints."""

    def __init__(self, xs: Iterable, ys: Iterable):
        xs = [Fraction(x) for x in xs]
        ys = [Fraction(y) for y in ys]
        if len(xs) != len(ys) or len(xs) < 2:
            raise ValueError("need matching breakpoint and value lists")
        if xs[0] != 0 or xs[-1] != 1 or any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints must increase from 0 to 1")
        self.xs, self.ys = xs, ys

    @classmethod
    def hat(cls, points) -> "PiecewiseLinear":
        """Zero outside ``points[0]..points[-1]``; ``points`` is a list of ``(x, y)``."""
        xs, ys = [], []
        if points[0][0] > 0:
            xs.append(Fraction(0)); ys.append(Fraction(0))
        for x, y in points:
            xs.append(Fraction(x)); ys.append(Fraction(y))
        if points[-1][0] < 1:
            xs.append(Fraction(1)); ys.append(Fraction(0))
        return cls(xs, ys)

    def value(self, x) -> Fraction:
        x = Fraction(x)
        for (x0, y0), (x1, y1) in zip(zip(self.xs, self.ys), zip(self.xs[1:], self.ys[1:])):
            if x0 <= x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        raise ValueError("x outside [0, 1]")

    def __call__(self, x):
        return np.interp(x, [float(v) for v in self.xs], [float(v) for v in self.ys])

    def _merged(self, other):
        xs = sorted(set(self.xs) | set(other.xs))
        return xs, [self.value(x) for x in xs], [other.value(x) for x in xs]

    def __add__(self, other):
        xs, a, b = self._merged(other)
        return PiecewiseLinear(xs, [p + q for p, q in zip(a, b)])

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        c = Fraction(c)
        return PiecewiseLinear(self.xs, [c * y for y in self.ys])

    def slopes(self) -> list:
        return [(y1 - y0) / (x1 - x0) for x0, x1, y0, y1 in zip(self.xs, self.xs[1:], self.ys, self.ys[1:])]

    def integral(self) -> Fraction:
        return sum(((x1 - x0) * (y0 + y1) / 2 for x0, x1, y0, y1 in
                    zip(self.xs, self.xs[1:], self.ys, self.ys[1:])), Fraction(0))

    def total_variation(self) -> Fraction:
        return sum((abs(y1 - y0) for y0, y1 in zip(self.ys, self.ys[1:])), Fraction(0))

    def slope_variation(self) -> Fraction:
        s = self.slopes()
        return sum((abs(b - a) for a, b in zip(s, s[1:])), Fraction(0))

    def l1_minus(self, c) -> Fraction:
        """``int_0^1 |p(x) - c| dx``."""
        c = Fraction(c)
        total = Fraction(0)
        for x0, x1, y0, y1 in zip(self.xs, self.xs[1:], self.ys, self.ys[1:]):
            a, b = y0 - c, y1 - c
            w = x1 - x0
            if a * b >= 0:
                total += w * abs(a + b) / 2
            else:
                t = a / (a - b)
                total += w * (t * abs(a) + (1 - t) * abs(b)) / 2
        return total

    def sup_minus(self, c) -> Fraction:
        c = Fraction(c)
        return max(abs(y - c) for y in self.ys)


def integration_seminorms_pl(f: PiecewiseLinear):
    """``(Var(f'), ||f' - f(1) + f(0)||_1)`` of a piecewise-linear ``f``."""
    delta = f.ys[-1] - f.ys[0]
    weak = sum((abs(s - delta) * (x1 - x0) for s, x0, x1 in zip(f.slopes(), f.xs, f.xs[1:])), Fraction(0))
    return f.slope_variation(), weak


def seminorms_from_derivative(fp: PiecewiseLinear, problem: str):
    """Exact ``(strong, weak)`` semi-norms of ``f`` given ``f'`` as a piecewise-linear function."""
    _check_family(problem)
    delta = fp.integral()
    if problem == "integration":
        return fp.total_variation(), fp.l1_minus(delta)
    return max(abs(s) for s in fp.slopes()), fp.sup_minus(delta)


# ---------------------------------------------------------------------------
# bumps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BumpSpec:
    """Bump of half-width scale ``a`` centred at ``z``.

    ``b`` defaults to ``1/(4a^3)`` for the integration family (unit integral)
    and ``1/(2a^2)`` for the approximation family.
    """

    a: float
    z: float
    family: str = "integration"
    b: Optional[float] = None

    @property
    def height(self) -> float:
        if self.b is not None:
            return self.b
        return 1 / (4 * self.a**3) if self.family == "integration" else 1 / (2 * self.a**2)


class Bump:
    """``b [4a^2 + u^2 + (u-a)|u-a| - (u+a)|u+a|]`` for ``|u| = |x - z| <= 2a``, zero elsewhere.

    On the outer pieces this is ``b (|u| - 2a)^2`` and on ``|u| <= a`` it is
    ``b (2a^2 - u^2)``, so ``f''`` is ``+2b`` or ``-2b`` and the peak is ``2 a^2 b``.
    """

    def __init__(self, spec: BumpSpec, support: Optional[tuple] = None):
        self.spec = spec
        self.a, self.z, self.b = float(spec.a), float(spec.z), float(spec.height)
        self.family = spec.family
        self.support = support if support is not None else (self.z - 2 * self.a, self.z + 2 * self.a)

    # evaluation ---------------------------------------------------------------
    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        lo, hi = self.support
        inside = (x > lo) & (x < hi)
        if inside.any():
            u = x[inside] - self.z
            au = np.abs(u)
            a = self.a
            out[inside] = self.b * np.where(au <= a, 2 * a * a - u * u, (au - 2 * a) ** 2)
        return out

    def exact_at(self, x) -> Fraction:
        """Exact rational value at rational ``x`` (parameters taken as their float values)."""
        a, b = Fraction(self.a), Fraction(self.b)
        u = Fraction(x) - Fraction(self.z)
        if abs(u) >= 2 * a:
            return Fraction(0)
        return b * (2 * a * a - u * u if abs(u) <= a else (abs(u) - 2 * a) ** 2)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        u = x - self.z
        au = np.abs(u)
        a = self.a
        d = np.where(au <= a, -2 * u, 2 * (u - 2 * a * np.sign(u)))
        return np.where(au < 2 * a, self.b * d, 0.0)

    # metadata -----------------------------------------------------------------
    @property
    def kinks(self) -> tuple:
        a, z = self.a, self.z
        return (z - 2 * a, z - a, z + a, z + 2 * a)

    @property
    def exact_integral(self) -> float:
        return 4 * self.a**3 * self.b

    @property
    def var_derivative(self) -> float:
        return 8 * self.a * self.b

    @property
    def l1_derivative(self) -> float:
        return 4 * self.a**2 * self.b

    @property
    def sup_derivative(self) -> float:
        return 2 * self.a * self.b

    @property
    def sup_second_derivative(self) -> float:
        return 2 * self.b

    @property
    def weak_seminorm(self) -> float:
        return self.l1_derivative if self.family == "integration" else self.sup_derivative

    @property
    def strong_seminorm(self) -> float:
        return self.var_derivative if self.family == "integration" else self.sup_second_derivative

    @property
    def cone_ratio(self) -> float:
        """Strong over weak semi-norm: ``2/a`` (integration) or ``1/a`` (approximation)."""
        return 2 / self.a if self.family == "integration" else 1 / self.a

    def in_cone(self, tau: float) -> bool:
        return self.strong_seminorm <= tau * self.weak_seminorm

    def derivative_pl(self) -> PiecewiseLinear:
        """``f'`` as an exact piecewise-linear function."""
        a, z, b = Fraction(self.a), Fraction(self.z), Fraction(self.b)
        lo, hi = z - 2 * a, z + 2 * a
        lo, hi = max(lo, Fraction(0)), min(hi, Fraction(1))
        pts = [(lo, 0), (z - a, 2 * a * b), (z + a, -2 * a * b), (hi, 0)]
        return PiecewiseLinear.hat(pts)

    def exact_seminorms(self, problem: Optional[str] = None):
        """``(strong, weak)`` as exact rationals of the float parameters."""
        return seminorms_from_derivative(self.derivative_pl(), problem or self.family)

    def extremum_candidates(self, nodes, values):
        """Stationary points of ``f - spline`` inside spline cells that meet the support."""
        m = len(values) - 1
        lo, hi = self.support
        i0 = max(0, int(np.floor(lo * m)) - 1)
        i1 = min(m - 1, int(np.ceil(hi * m)) + 1)
        i = np.arange(i0, i1 + 1)
        v = np.asarray(values)
        slope = m * (v[i + 1] - v[i])
        left, right = i / m, (i + 1) / m
        two_b = 2 * self.b
        cands = [self.z - 2 * self.a + slope / two_b, self.z - slope / two_b,
                 self.z + 2 * self.a + slope / two_b]
        out = [c[(c > left) & (c < right)] for c in cands]
        return np.concatenate(out)

    def to_record(self) -> dict:
        return {
            "family": self.family,
            "a": self.a,
            "z": self.z,
            "b": self.b,
            "exact_integral": self.exact_integral,
            "seminorms": {"strong": self.strong_seminorm, "weak": self.weak_seminorm},
            "cone_ratio": self.cone_ratio,
        }

    def __repr__(self):
        return f"Bump(a={self.a!r}, z={self.z!r}, family={self.family!r})"


def make_bump(spec: BumpSpec) -> Bump:
    """Build a bump; its support ``[z - 2a, z + 2a]`` must lie in [0, 1]."""
    _check_family(spec.family)
    if not spec.a > 0:
        raise ValueError("a must be positive")
    if spec.z - 2 * spec.a < -_SUPPORT_SLACK or spec.z + 2 * spec.a > 1 + _SUPPORT_SLACK:
        raise ValueError(f"centre z={spec.z} puts the support outside [0, 1] for a={spec.a}")
    return Bump(spec)


def sample_bump(rng_seed, family: str = "integration") -> BumpSpec:
    """Draw ``log10(a) ~ U[-4, -1]`` and ``z ~ U[2a, 1 - 2a]``.

    ``rng_seed`` is anything :func:`numpy.random.default_rng` accepts, e.g.
    an int or ``[seed, index]``.
    """
    _check_family(family)
    rng = np.random.default_rng(rng_seed)
    a = 10.0 ** rng.uniform(-4.0, -1.0)
    z = rng.uniform(2 * a, 1 - 2 * a)
    return BumpSpec(a=a, z=z, family=family)


def cone_probability(tau: float, family: str = "integration") -> float:
    """Probability that a sampled bump lies in the cone with constant ``tau``."""
    _check_family(family)
    if not tau > 0:
        raise ValueError("tau must be positive")
    t = tau / 2 if family == "integration" else tau
    return min(1.0, max(0.0, (math.log10(t) - 1) / 3))


# ---------------------------------------------------------------------------
# oscillatory adversary
# ---------------------------------------------------------------------------

class Fluky:
    """``f(x) = 1 - cos(2 pi k x)``.

    The phase is reduced as ``(k x) mod 1`` before the cosine so that ``f``
    is exactly zero wherever ``k x`` is an exact integer in floating point.
    """

    def __init__(self, k: int):
        if int(k) != k or k < 1:
            raise ValueError("k must be a positive integer")
        self.k = int(k)

    def __call__(self, x):
        t = np.mod(self.k * np.asarray(x, dtype=float), 1.0)
        return 1.0 - np.cos(2 * np.pi * t)

    kinks: tuple = ()
    exact_integral = 1.0

    @property
    def var_derivative(self) -> float:
        return 8 * math.pi * self.k**2

    @property
    def l1_derivative(self) -> float:
        return 4.0 * self.k

    @property
    def sup_derivative(self) -> float:
        return 2 * math.pi * self.k

    @property
    def sup_second_derivative(self) -> float:
        return (2 * math.pi * self.k) ** 2

    @property
    def cone_ratio(self) -> float:
        """``Var(f') / ||f'||_1 = 2 pi k``."""
        return 2 * math.pi * self.k

    def to_record(self) -> dict:
        return {
            "family": "fluky",
            "k": self.k,
            "exact_integral": self.exact_integral,
            "seminorms": {"strong": self.var_derivative, "weak": self.l1_derivative},
            "cone_ratio": self.cone_ratio,
        }


def oscillatory_fluky(k: int) -> Fluky:
    return Fluky(k)


# ---------------------------------------------------------------------------
# fooling functions
# ---------------------------------------------------------------------------

class _Triangle:
    """``(w - |lo + hi - 2x|)/8`` on ``[lo, hi]`` with ``w = hi - lo``, zero elsewhere."""

    def __init__(self, lo: float, hi: float):
        self.lo, self.hi = lo, hi
        self.support = (lo, hi)
        self.kinks = (lo, (lo + hi) / 2, hi)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x > self.lo) & (x < self.hi)
        out = np.zeros(x.shape)
        out[inside] = ((self.hi - self.lo) - np.abs(self.lo + self.hi - 2 * x[inside])) / 8
        return out

    def pl(self) -> PiecewiseLinear:
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        return PiecewiseLinear.hat([(lo, 0), ((lo + hi) / 2, (hi - lo) / 8), (hi, 0)])


class _Combination:
    def __init__(self, terms):
        self.terms = terms

    def __call__(self, x):
        return sum(float(c) * f(x) for c, f in self.terms)


@dataclass
class FoolingPair:
    """Fooling functions for a sampling design.

    ``f1`` vanishes at every design node; ``f0`` lies strictly inside every
    cone with ``tau > 2``.  When ``tau`` is given, ``f_plus``/``f_minus`` are
    ``c0 f0 +/- c1 f1``, which share their data and both lie in the cone with
    strong semi-norm at most ``s``.
    """

    problem: str
    nodes: np.ndarray
    gap: tuple
    f0: Callable
    f1: Callable
    g_n: float
    f1_solution: float
    norms: dict = field(default_factory=dict)
    tau: Optional[float] = None
    s: Optional[float] = None
    c0: Optional[float] = None
    c1: Optional[float] = None
    f_plus: Optional[Callable] = None
    f_minus: Optional[Callable] = None

    def in_cone(self, name: str) -> bool:
        strong, weak = self.norms[name]
        return strong <= Fraction(self.tau) * weak


def make_fooling_pair(problem: str, design_nodes, tau: Optional[float] = None,
                      s: float = 1.0) -> FoolingPair:
    """Fooling functions supported on the widest gap of ``design_nodes``.

    For integration ``f0`` is the triangle ``1/2 - |1/2 - x|`` and ``f1`` a
    triangle of height ``w/8`` on the gap; for recovery ``f0 = x(1 - x)`` and
    ``f1`` a bump with ``|f1''| = 1``.  Either way the solution size of
    ``f1`` is ``w^2/16 >= 1/(16(n+1)^2)``.
    """
    _check_family(problem)
    nodes = np.sort(np.asarray(design_nodes, dtype=float).ravel())
    if nodes.size and (nodes[0] < 0 or nodes[-1] > 1):
        raise ValueError("design nodes must lie in [0, 1]")
    edges = np.concatenate([[0.0], nodes, [1.0]])
    j = int(np.argmax(np.diff(edges)))
    lo, hi = float(edges[j]), float(edges[j + 1])
    width = Fraction(hi) - Fraction(lo)
    n = nodes.size
    g_n = 1.0 / (16.0 * (n + 1) ** 2)

    if problem == "integration":
        f0_pl = PiecewiseLinear([0, Fraction(1, 2), 1], [0, Fraction(1, 2), 0])
        f0 = f0_pl  # 1/2 - |1/2 - x|
        f1 = _Triangle(lo, hi)
        f1_pl = f1.pl()
        norms = {"f0": integration_seminorms_pl(f0_pl), "f1": integration_seminorms_pl(f1_pl)}

        def exact(c0, c1, sign):
            return integration_seminorms_pl(c0 * f0_pl + (sign * c1) * f1_pl)
    else:
        f0_pl = PiecewiseLinear([0, 1], [1, -1])  # derivative of x(1 - x)
        f0 = _Parabola()
        f1 = Bump(BumpSpec(a=(hi - lo) / 4, z=(lo + hi) / 2, family="approximation", b=0.5),
                  support=(lo, hi))
        lo_f, hi_f = Fraction(lo), Fraction(hi)
        q = width / 4
        f1_pl = PiecewiseLinear.hat([(lo_f, 0), (lo_f + q, q), (hi_f - q, -q), (hi_f, 0)])
        norms = {"f0": seminorms_from_derivative(f0_pl, problem),
                 "f1": seminorms_from_derivative(f1_pl, problem)}

        def exact(c0, c1, sign):
            return seminorms_from_derivative(c0 * f0_pl + (sign * c1) * f1_pl, problem)

    pair = FoolingPair(problem, nodes, (lo, hi), f0, f1, g_n, float(width**2 / 16), norms)
    if tau is not None:
        if not tau > 2:
            raise ValueError("fooling pairs for cones need tau > 2")
        t, s_, tmin = Fraction(tau), Fraction(s), Fraction(2)
        c0 = s_ * (t + tmin) / (2 * t * tmin)
        c1 = s_ * (t - tmin) / (2 * t)
        pair.tau, pair.s, pair.c0, pair.c1 = tau, s, float(c0), float(c1)
        pair.f_plus = _Combination([(c0, f0), (c1, f1)])
        pair.f_minus = _Combination([(c0, f0), (-c1, f1)])
        pair.norms["f_plus"] = exact(c0, c1, 1)
        pair.norms["f_minus"] = exact(c0, c1, -1)
    return pair


class _Parabola:
    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x * (1 - x)


# ---------------------------------------------------------------------------
# non-convexity of the cone
# ---------------------------------------------------------------------------

@dataclass
class NonConvexityWitness:
    tau: float
    f_in: Bump
    f_out: Bump
    tau_in: Fraction
    tau_out: Fraction
    alpha: Fraction
    beta: Fraction
    f_plus: Callable
    f_minus: Callable
    midpoint: Callable
    norms: dict
    memberships: dict


def nonconvexity_witness(tau: float, f_in: Optional[Bump] = None,
                         f_out: Optional[Bump] = None) -> NonConvexityWitness:
    """Two members of the integration cone whose average lies outside it.

    With ``tau_in < tau < tau_out`` the cone ratios of ``f_in`` and
    ``f_out``, the functions

        f_pm = (tau - tau_in)|f_in|~ f_out  +/-  (tau + tau_out)|f_out|~ f_in

    are in the cone while their midpoint is a positive multiple of ``f_out``.
    All memberships are decided with exact rational semi-norms.
    """
    if not tau > 2:
        raise ValueError("tau must exceed tau_min = 2")
    if f_in is None or f_out is None:
        # a single bump has ratio 2/a >= 8, so the default pair needs tau > 25/3
        a_in = min(0.24, 2.1 / tau)
        if not 2 / a_in < tau:
            raise ValueError("the default bump pair needs tau > 25/3; pass f_in and f_out")
        a_out = min(1.0 / tau, 0.9 * (1 - 4 * a_in) / 4)
        f_in = make_bump(BumpSpec(a_in, 2 * a_in))
        f_out = make_bump(BumpSpec(a_out, 1 - 2 * a_out))
    t = Fraction(tau)
    in_pl, out_pl = f_in.derivative_pl(), f_out.derivative_pl()
    s_in, w_in = seminorms_from_derivative(in_pl, "integration")
    s_out, w_out = seminorms_from_derivative(out_pl, "integration")
    tau_in, tau_out = s_in / w_in, s_out / w_out
    if not tau_in < t < tau_out:
        raise ValueError("need ratio(f_in) < tau < ratio(f_out)")
    alpha = (t - tau_in) * w_in
    beta = (t + tau_out) * w_out
    norms = {
        "f_plus": seminorms_from_derivative(alpha * out_pl + beta * in_pl, "integration"),
        "f_minus": seminorms_from_derivative(alpha * out_pl - beta * in_pl, "integration"),
        "midpoint": seminorms_from_derivative(alpha * out_pl, "integration"),
    }
    memberships = {k: strong <= t * weak for k, (strong, weak) in norms.items()}
    return NonConvexityWitness(
        tau, f_in, f_out, tau_in, tau_out, alpha, beta,
        _Combination([(alpha, f_out), (beta, f_in)]),
        _Combination([(alpha, f_out), (-beta, f_in)]),
        _Combination([(alpha, f_out)]),
        norms, memberships,
    )


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

class OracleError(RuntimeError):
    """The reference quadrature did not converge to the requested accuracy."""


def reference_integral(f, target_accuracy: float = 1e-12, min_level: int = 4,
                       max_level: int = 20) -> float:
    """Richardson-extrapolated composite Simpson over kink-aligned panels.

    Panels are split at ``f.kinks`` (if present).  On each panel Simpson's
    rule is applied with ``3 * 2^j`` subintervals, ``j >= min_level``, and
    extrapolated as ``S_j + (S_j - S_{j-1})/15``.  A panel is accepted once
    three successive extrapolants agree to its share of ``target_accuracy``.
    The factor 3 keeps the nodes off the dyadic points where periodic test
    functions are built to vanish.
    """
    cuts = sorted({0.0, 1.0, *[float(k) for k in getattr(f, "kinks", ()) if 0 < k < 1]})
    total = 0.0
    for p, q in zip(cuts, cuts[1:]):
        if q <= p:
            continue
        tol = target_accuracy * (q - p)
        s_prev, history = None, []
        for j in range(min_level, max_level + 1):
            m = 3 * 2**j
            x = p + (q - p) * np.arange(m + 1) / m
            x[-1] = q
            y = np.asarray(f(x), dtype=float)
            s = (q - p) / (3 * m) * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum())
            history.append(s if s_prev is None else s + (s - s_prev) / 15)
            s_prev = s
            if len(history) >= 3 and max(history[-3:]) - min(history[-3:]) <= tol:
                break
        else:
            raise OracleError(f"no convergence on panel [{p}, {q}] by level {max_level}")
        total += history[-1]
    return total


def numeric_seminorms(f, problem: str, cells: int = 2**18, support=None):
    """Finite-difference ``(strong, weak)`` semi-norms from ``cells`` uniform cells.

    If ``support`` (default ``f.support`` when present) is given, ``f`` is
    taken to vanish outside it and the cells cover the support only;
    otherwise they cover [0, 1].
    """
    _check_family(problem)
    if support is None:
        support = getattr(f, "support", None)
    lo, hi = support if support is not None else (0.0, 1.0)
    lo, hi = max(0.0, lo), min(1.0, hi)
    # power-of-two spacing on a snapped origin keeps every abscissa exact;
    # jitter in x would otherwise swamp second differences of narrow bumps
    h = 2.0 ** math.floor(math.log2((hi - lo) / cells))
    lo = math.floor(lo / h) * h
    x = lo + h * np.arange(math.ceil((hi - lo) / h) + 1)
    v = np.asarray(f(x), dtype=float)
    delta = 0.0 if support is not None else v[-1] - v[0]
    d = np.diff(v)
    if problem == "integration":
        return np.abs(np.diff(d)).sum() / h, np.abs(d - delta * h).sum()
    return np.abs(np.diff(d)).max() / h**2, np.abs(d / h - delta).max()


def export_corpus(functions, path) -> int:
    """Write one JSON object per function (``to_record``) to ``path``; returns the count."""
    count = 0
    with open(path, "w") as fh:
        for f in functions:
            fh.write(json.dumps(f.to_record()) + "\n")
            count += 1
    return count
