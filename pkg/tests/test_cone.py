import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coneadapt import _uniform
from coneadapt.cone import (
    ConeSpec,
    ErrorModel,
    InfiniteInflationError,
    SampledFunction,
    UnrepresentableIndexError,
    cost_bounds,
    exact_ceil_sqrt,
    h_inverse,
    inflation_factors,
    run_multi_stage,
    run_non_adaptive,
    run_two_stage,
    tau_min_estimate,
)
from coneadapt.funlab import BumpSpec, make_bump
from coneadapt.trapezoid import TrapezoidFamily, ftilde_integration

MODEL = _uniform.SPLINE_ERROR_MODEL
FAM = TrapezoidFamily()


def square(x):
    return x * x


# error model and inverse ------------------------------------------------------

def test_error_model_validation():
    with pytest.raises(ValueError):
        ErrorModel(h=lambda n: 1, h_minus=lambda n: 0, h_plus=lambda n: 0, rho=0.5)
    with pytest.raises(ValueError):
        ErrorModel(h=lambda n: 1, h_minus=lambda n: 0, h_plus=lambda n: 0, r=1.0)


def test_cone_spec_validation():
    with pytest.raises(ValueError):
        ConeSpec(0.0, 2.0)
    with pytest.raises(ValueError):
        ConeSpec(10.0, 2.0, sigma=-1.0)


@pytest.mark.parametrize("eps, expected", [(1 / 8, 2), (1e-2, 5)])
def test_h_inverse_h(eps, expected):
    assert h_inverse(MODEL, "h", eps) == expected


def test_h_inverse_h1_example():
    # 1/(4(n-1)(2n-2-tau)): n=8 gives 1/112 <= 1e-2, n=7 gives 1/48
    assert h_inverse(MODEL, "h1", 1e-2, ConeSpec(10.0, 2.0)) == 8
    # the stopping threshold eps/tau needs m = 14: 4*14*18 = 1008 >= 1000 > 4*13*16
    assert h_inverse(MODEL, "h1", 1e-3, ConeSpec(10.0, 2.0)) == 15


def test_h_inverse_h2_no_larger_than_h1():
    cone = ConeSpec(100.0, 2.0)
    for eps in (1e-3, 1e-6, 1e-9):
        assert h_inverse(MODEL, "h2", eps, cone) <= h_inverse(MODEL, "h1", eps, cone)


def test_h_inverse_errors():
    with pytest.raises(ValueError):
        h_inverse(MODEL, "h", 0.0)
    with pytest.raises(ValueError):
        h_inverse(MODEL, "h1", 1e-2)
    with pytest.raises(ValueError):
        h_inverse(MODEL, "h3", 1e-2, ConeSpec(10.0, 2.0))
    with pytest.raises(UnrepresentableIndexError):
        h_inverse(MODEL, "h", 1e-30, n_max=1000)


def test_h_inverse_floor_model():
    # h never reaches eps: no admissible index below the ceiling
    model = ErrorModel(h=lambda n: 1.0, h_minus=lambda n: 0.0, h_plus=lambda n: 0.0)
    with pytest.raises(UnrepresentableIndexError):
        h_inverse(model, "h", 0.5, n_max=64)


# inflation factors ------------------------------------------------------------

def test_inflation_factors_example():
    fac = inflation_factors(MODEL, ConeSpec(10.0, 2.0), 7)
    assert fac.c_n == 1 and fac.c_tilde_n == 1
    assert fac.C_n == pytest.approx(6.0, rel=1e-15)


def test_inflation_factors_infinite():
    with pytest.raises(InfiniteInflationError):
        inflation_factors(MODEL, ConeSpec(10.0, 2.0), 6)


def test_inflation_factors_with_h_minus():
    model = ErrorModel(h=_uniform.h, h_minus=lambda n: 1 / n, h_plus=_uniform.h_plus)
    fac = inflation_factors(model, ConeSpec(10.0, 2.0), 20)
    assert fac.c_tilde_n >= fac.c_n >= 1
    assert fac.c_n == pytest.approx(1.1) and fac.c_tilde_n == pytest.approx(1.5)


# tau_min estimate -------------------------------------------------------------

def test_tau_min_estimate_cases():
    assert tau_min_estimate(0.3, 0.0, 0.25) == 0.0
    assert tau_min_estimate(0.0, 0.0, 0.25) == 0.0
    assert tau_min_estimate(0.0, 5.0, 0.25) == 4.0
    assert tau_min_estimate(0.0, 5.0, 0.0) == math.inf
    assert tau_min_estimate(0.5, 1.0, 0.25) == pytest.approx(4 / 3, rel=1e-15)


# sampled functions ------------------------------------------------------------

def test_sampled_function_nested_reuse():
    g = SampledFunction(square)
    v3 = g.grid(3)
    assert g.cost == 3 and g.n_calls == 3
    v5 = g.grid(5)
    assert g.cost == 5 and g.n_calls == 5
    np.testing.assert_array_equal(v5, (np.arange(5) / 4) ** 2)
    np.testing.assert_array_equal(v5[::2], v3)
    g.grid(3)
    assert g.cost == 5 and g.n_calls == 5


def test_sampled_function_non_nested_union():
    g = SampledFunction(square)
    g.grid(3)   # 0, 1/2, 1
    g.grid(4)   # adds 1/3, 2/3
    assert g.cost == 5
    np.testing.assert_allclose(g.grid(4), (np.arange(4) / 3) ** 2, rtol=0, atol=0)
    g.grid(7)   # adds 1/6, 5/6
    assert g.cost == 7


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(2, 60), min_size=1, max_size=6))
def test_sampled_function_cost_is_distinct_abscissae(ns):
    g = SampledFunction(square)
    points = set()
    for n in ns:
        vals = g.grid(n)
        np.testing.assert_array_equal(vals, (np.arange(n) / (n - 1)) ** 2)
        points |= {Fraction(i, n - 1) for i in range(n)}
    assert g.cost == len(points)


def test_sampled_function_scalar_broadcast():
    g = SampledFunction(lambda x: 3.0)
    np.testing.assert_array_equal(g.grid(4), [3.0] * 4)
    with pytest.raises(ValueError):
        g.grid(1)


def test_sampled_function_at_charges_every_point():
    g = SampledFunction(square)
    g.at([0.1, 0.1])
    assert g.cost == 2 and g.n_calls == 2


# engines ----------------------------------------------------------------------

def test_non_adaptive_square():
    r = run_non_adaptive(FAM, 2.0, square, 0.25)
    assert r.cost == 2 and r.answer == 0.5
    assert abs(r.answer - 1 / 3) <= 0.25


def test_non_adaptive_cost_is_input_independent():
    for f in (square, np.sin, lambda x: 0 * x):
        assert run_non_adaptive(FAM, 1.0, f, 1e-8).cost == 3537


def test_non_adaptive_linear_exact():
    r = run_non_adaptive(FAM, 3.0, lambda x: 2 * x - 1, 1e-6)
    assert r.answer == 0.0


def test_two_stage_linear():
    r = run_two_stage(FAM, ConeSpec(10.0, 2.0), lambda x: 3 * x, 1e-8, 7)
    assert r.answer == pytest.approx(1.5, abs=1e-15)
    assert r.cost == 7 and r.cost_nominal == 7 + 2


def test_two_stage_square_example():
    f = square
    ft7 = ftilde_integration((np.arange(7) / 6) ** 2)
    # increments of x^2 on sixths are (2i-1)/36, mean 1/6
    assert ft7 == pytest.approx(sum(abs((2 * i - 1) / 36 - 1 / 6) for i in range(1, 7)), rel=1e-14)
    r = run_two_stage(FAM, ConeSpec(10.0, 2.0), f, 1e-2, 7)
    n_a = h_inverse(MODEL, "h", 1e-2 / (60 * ft7))
    assert r.trace[-1].n == n_a
    assert r.cost_nominal == 7 + n_a
    assert abs(r.answer - 1 / 3) <= 1e-2


def test_two_stage_cost_sandwich():
    cone = ConeSpec(10.0, 2.0)
    lo, up = cost_bounds("two_stage", FAM, cone, 2.0, "F", 1e-6, n_F=7)
    r = run_two_stage(FAM, cone, square, 1e-6, 7)
    assert lo <= r.cost_nominal <= up


def test_two_stage_budget_warning():
    r = run_two_stage(FAM, ConeSpec(10.0, 2.0), square, 1e-12, 7, budget=100)
    assert r.warning and r.trace[-1].n == 100


def test_multi_stage_linear():
    r = run_multi_stage(FAM, ConeSpec(10.0, 2.0), lambda x: 3 * x + 1, 1e-8)
    assert r.answer == 2.5 and r.cost == 7 and r.n_sequence == [7]


def test_multi_stage_rejects_small_tau():
    with pytest.raises(ValueError):
        run_multi_stage(FAM, ConeSpec(1.5, 2.0), square, 1e-8)
    with pytest.raises(ValueError):
        run_multi_stage(FAM, ConeSpec(10.0, 2.0), square, 1e-8, tau_policy="other")
    with pytest.raises(ValueError):
        run_multi_stage(FAM, ConeSpec(10.0, 2.0), square, 0.0)


def test_multi_stage_trace_increasing_and_nested():
    f = make_bump(BumpSpec(0.05, 0.4))
    r = run_multi_stage(FAM, ConeSpec(100.0, 2.0), f, 1e-8)
    ns = r.n_sequence
    assert all(b > a for a, b in zip(ns, ns[1:]))
    assert all((b - 1) % (a - 1) == 0 for a, b in zip(ns, ns[1:]))
    assert r.cost == ns[-1]
    assert abs(r.answer - 1) <= 1e-8


def test_multi_stage_inflation_detects_spike():
    f = make_bump(BumpSpec(0.02, 0.5))       # ratio 100, outside C_10
    r = run_multi_stage(FAM, ConeSpec(10.0, 2.0), f, 1e-8)
    assert r.cone_violation_detected and r.final_tau > 10
    fixed = run_multi_stage(FAM, ConeSpec(10.0, 2.0), f, 1e-8, tau_policy="fixed")
    assert fixed.final_tau == 10 and not fixed.cone_violation_detected


def test_multi_stage_budget_fallback():
    f = make_bump(BumpSpec(0.05, 0.4))
    r = run_multi_stage(FAM, ConeSpec(100.0, 2.0), f, 1e-14, budget=10**5)
    assert r.warning
    n_prev, n_last = r.n_sequence[-2], r.n_sequence[-1]
    assert n_last <= 10**5 and (n_last - 1) % (n_prev - 1) == 0
    assert n_last + (n_prev - 1) > 10**5


def test_multi_stage_budget_below_first_index():
    r = run_multi_stage(FAM, ConeSpec(100.0, 2.0), square, 1e-8, budget=10)
    assert r.warning and r.n_sequence == [10]


# cost bounds ------------------------------------------------------------------

def test_cost_bounds_examples():
    lo, up = cost_bounds("multi_stage", FAM, ConeSpec(10.0, 2.0), 200.0, "F", 1e-2)
    assert lo == 51
    assert up <= math.sqrt(50000) + 14
    assert lo <= up


def test_cost_bounds_generic_brackets_closed_lower():
    cone = ConeSpec(10.0, 2.0)
    lo_c, up_c = cost_bounds("multi_stage", FAM, cone, 200.0, "F", 1e-2)
    lo_g, up_g = cost_bounds("multi_stage", FAM, cone, 200.0, "F", 1e-2, form="generic")
    assert lo_g == lo_c
    assert lo_g <= up_g


@settings(max_examples=50, deadline=None)
@given(st.floats(2.0, 1000.0), st.floats(1e-3, 1e4), st.floats(1e-10, 1e-2),
       st.sampled_from(["F", "Ftilde"]))
def test_cost_bounds_ordered(tau, s, eps, which):
    for form in ("auto", "generic"):
        lo, up = cost_bounds("multi_stage", FAM, ConeSpec(tau, 2.0), s, which, eps, form=form)
        assert lo <= up


def test_cost_bounds_errors():
    cone = ConeSpec(10.0, 2.0)
    with pytest.raises(ValueError):
        cost_bounds("multi_stage", FAM, cone, 0.0, "F", 1e-2)
    with pytest.raises(ValueError):
        cost_bounds("multi_stage", FAM, cone, 1.0, "G", 1e-2)
    with pytest.raises(ValueError):
        cost_bounds("two_stage", FAM, cone, 1.0, "F", 1e-2)
    with pytest.raises(ValueError):
        cost_bounds("three_stage", FAM, cone, 1.0, "F", 1e-2)


@settings(max_examples=200, deadline=None)
@given(st.fractions(min_value=0, max_value=10**12, max_denominator=10**6))
def test_exact_ceil_sqrt(q):
    k = exact_ceil_sqrt(q)
    assert k * k >= q
    assert k == 0 or (k - 1) ** 2 < q
