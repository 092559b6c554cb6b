from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from errors import DimensionMismatch
from exact_geometry import (
    Interval,
    Metric,
    Ordering,
    compare_l2,
    distance_linf,
    floor_distance_ratio,
    floor_div,
    floor_sqrt,
    format_point,
    format_rational,
    l2_distance_interval,
    make_point,
    orientation,
    parse_rational,
    squared_l2,
    within,
)
from tests.strategies import points, positive_rationals, rationals


F = Fraction


@pytest.mark.parametrize("u, v, expected", [
    ((0, 0), (F(1, 2), F(1, 3)), F(1, 2)),
    ((F(3, 7), 2), (F(3, 7), 2), F(0)),
    ((0, 0, 0), (1, -2, F(3, 2)), F(2)),
])
def test_distance_linf(u, v, expected):
    assert distance_linf(make_point(u), make_point(v)) == expected


def test_distance_linf_rejects_mixed_dimensions():
    with pytest.raises(DimensionMismatch):
        distance_linf((F(0),), (F(0), F(1)))


@pytest.mark.parametrize("v, threshold, expected", [
    ((3, 4), 5, Ordering.EQUAL),
    ((1, 1), 2, Ordering.LESS),
    ((1, 1), 1, Ordering.GREATER),
])
def test_compare_l2(v, threshold, expected):
    assert compare_l2((F(0), F(0)), make_point(v), F(threshold)) == expected


def test_compare_l2_rejects_negative_threshold():
    with pytest.raises(ValueError):
        compare_l2((F(0), F(0)), (F(1), F(1)), F(-1))


def test_l2_interval_encloses_sqrt2():
    lo, hi = l2_distance_interval((F(0), F(0)), (F(1), F(1)), F(1, 1000))
    assert hi - lo <= F(1, 1000)
    assert lo * lo <= 2 <= hi * hi


def test_l2_interval_exact_cases():
    assert l2_distance_interval((F(0), F(0)), (F(3), F(4)), F(1, 10)) == (F(5), F(5))
    assert l2_distance_interval((F(0), F(0)), (F(0), F(0)), F(1)) == (F(0), F(0))


@pytest.mark.parametrize("x, step, expected", [
    (F(5, 2), F(1), 2),
    (F(-1, 2), F(1), -1),
    (F(3), F(3, 2), 2),
])
def test_floor_div(x, step, expected):
    assert floor_div(x, step) == expected


def test_floor_div_rejects_non_positive_step():
    with pytest.raises(ValueError):
        floor_div(F(1), F(0))


@given(points(3), points(3), points(3))
def test_linf_triangle_inequality(u, v, w):
    assert distance_linf(u, w) <= distance_linf(u, v) + distance_linf(v, w)


@given(points(2), points(2), positive_rationals())
def test_compare_l2_agrees_with_squares(u, v, t):
    difference = squared_l2(u, v) - t * t
    expected = Ordering.LESS if difference < 0 else Ordering.GREATER if difference > 0 else Ordering.EQUAL
    assert compare_l2(u, v, t) == expected


@given(points(2), points(2), st.integers(min_value=1, max_value=20))
def test_l2_intervals_nest(u, v, k):
    coarse = F(1, 2**k)
    lo, hi = l2_distance_interval(u, v, coarse)
    lo2, hi2 = l2_distance_interval(u, v, coarse / 2)
    assert lo <= lo2 <= hi2 <= hi


@given(rationals(), positive_rationals(), st.integers(min_value=-50, max_value=50))
def test_floor_div_shift(x, step, k):
    assert floor_div(x + k * step, step) == floor_div(x, step) + k


@given(st.integers(min_value=0, max_value=10**6))
def test_floor_sqrt_of_integers(n):
    root = floor_sqrt(F(n))
    assert root * root <= n < (root + 1) ** 2


def test_floor_distance_ratio_l2():
    assert floor_distance_ratio((F(0), F(0)), (F(3), F(4)), F(1), Metric.L2) == 5
    assert floor_distance_ratio((F(0), F(0)), (F(1), F(1)), F(1, 2), Metric.L2) == 2


def test_within_is_strict():
    assert not within((F(0),), (F(1),), F(1), Metric.LINF)
    assert within((F(0),), (F(1),), F(3, 2), Metric.LINF)
    assert not within((F(0), F(0)), (F(3), F(4)), F(5), Metric.L2)


def test_rational_text_format():
    assert format_rational(F(-3, 2)) == "-3/2"
    assert format_rational(F(5)) == "5/1"
    assert parse_rational("6/4") == F(3, 2)
    assert format_point(make_point(["1/2", 3])) == ["1/2", "3/1"]


def test_parse_rational_refuses_floats():
    with pytest.raises(ValueError):
        parse_rational(0.5)


def test_orientation():
    a, b = (F(0), F(0)), (F(1), F(0))
    assert orientation(a, b, (F(0), F(1))) == 1
    assert orientation(a, b, (F(0), F(-1))) == -1
    assert orientation(a, b, (F(2), F(0))) == 0


def test_interval_arithmetic_contains_results():
    x, y = Interval(F(1), F(2)), Interval(F(-1), F(3))
    assert (x + y).contains(F(1, 2) + F(2))
    assert (x * y) == Interval(F(-2), F(6))
    assert abs(y) == Interval(F(0), F(3))
    assert (x - y) == Interval(F(-2), F(3))
    root = Interval.sqrt_of(2, F(1, 100))
    assert root.width <= F(1, 100)
    assert root.lo ** 2 <= 2 <= root.hi ** 2
    assert x.certainly_less(F(5, 2))
