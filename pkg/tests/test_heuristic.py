import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coneadapt.funlab import oscillatory_fluky
from coneadapt.heuristic import heuristic_trapezoid


def test_linear_stops_immediately():
    r = heuristic_trapezoid(lambda x: 3 * x + 1, 1e-12)
    assert r.stopped_at == 3 and r.cost == 3
    assert r.answer == 2.5 and r.claimed_error == 0.0 and not r.warning


def test_fluky_fools_default_and_min_level():
    f = oscillatory_fluky(8)
    r = heuristic_trapezoid(f, 1e-14)
    assert (r.answer, r.claimed_error, r.stopped_at) == (0.0, 0.0, 3)
    r = heuristic_trapezoid(f, 1e-14, min_level=3)
    assert (r.answer, r.claimed_error, r.stopped_at, r.cost) == (0.0, 0.0, 9, 9)


def test_square_estimate_is_exact():
    # for x^2 the scaled difference of successive sums equals the true error 1/(6 m^2)
    r = heuristic_trapezoid(lambda x: x * x, 1e-3)
    assert abs(r.answer - 1 / 3) <= 4e-3
    m = r.stopped_at - 1
    assert r.claimed_error == pytest.approx(1 / (6 * m * m), rel=1e-12)
    assert abs(r.answer - 1 / 3) == pytest.approx(r.claimed_error, rel=1e-10)


@pytest.mark.parametrize("f, exact", [
    (np.exp, math.e - 1),
    (lambda x: np.sin(3 * x), (1 - math.cos(3)) / 3),
    (lambda x: 1 / (1 + x), math.log(2)),
])
def test_claim_tracks_true_error_on_smooth_functions(f, exact):
    for eps in (1e-4, 1e-6, 1e-8):
        r = heuristic_trapezoid(f, eps)
        true = abs(r.answer - exact)
        assert r.claimed_error <= eps and not r.warning
        assert r.claimed_error / 5 <= true <= 5 * r.claimed_error


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12))
def test_power_of_two_frequency_fools_every_level(j, level):
    # all nodes of the 2^i + 1 grid, i <= j, are zeros of 1 - cos(2 pi 2^j x)
    level = min(level, j)
    r = heuristic_trapezoid(oscillatory_fluky(2**j), 1e-15, min_level=level)
    assert r.answer == 0.0 and r.claimed_error == 0.0
    assert r.stopped_at == 2**level + 1


def test_budget_exhaustion_warns():
    r = heuristic_trapezoid(np.sqrt, 1e-15, max_doublings=4)
    assert r.warning and r.stopped_at == 17 and r.claimed_error > 1e-15


def test_argument_validation():
    with pytest.raises(ValueError):
        heuristic_trapezoid(np.exp, 0.0)
    with pytest.raises(ValueError):
        heuristic_trapezoid(np.exp, 1e-3, min_level=0)
    with pytest.raises(ValueError):
        heuristic_trapezoid(np.exp, 1e-3, max_doublings=2, min_level=3)
