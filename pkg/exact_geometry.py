"""
Exact rational geometry.

Points are tuples of Fractions. Distances under the product (L-infinity)
metric are Fractions. Euclidean distances are never turned into numbers:
they are compared through exact squared arithmetic or enclosed in rational
intervals obtained by bisection.

Convexity is read as d(x,z) + d(z,y) = d(x,y) for z on the segment [x, y].
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import floor, isqrt
from typing import Iterable

from errors import BoundaryIndecision, DimensionMismatch


logger = logging.getLogger(__name__)

Rational = Fraction
Point = tuple[Fraction, ...]

# Refinement halvings attempted before an L2 floor is declared undecidable
MAX_REFINEMENT_STEPS = 256


class Metric(str, Enum):
    LINF = "linf"
    L2 = "l2"


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def parse_rational(value) -> Fraction:
    """
    Parse a rational from a "num/den" string, an int or a Fraction.

    Floats are refused so that no binary rounding can leak in.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"Expected a rational, got {value!r}")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Malformed rational {value!r}: {e}")
    raise ValueError(f"Expected a rational, got {value!r}")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def make_point(coords: Iterable) -> Point:
    point = tuple(parse_rational(c) for c in coords)
    if not point:
        raise ValueError("A point needs at least one coordinate")
    return point


def format_point(point: Point) -> list[str]:
    return [format_rational(c) for c in point]


def check_same_dimension(*points: Point) -> int:
    dimensions = {len(p) for p in points}
    if len(dimensions) > 1:
        raise DimensionMismatch(f"Mixed dimensions {sorted(dimensions)}")
    return dimensions.pop() if dimensions else 0


def distance_linf(u: Point, v: Point) -> Fraction:
    check_same_dimension(u, v)
    return max(abs(b - a) for a, b in zip(u, v))


def squared_l2(u: Point, v: Point) -> Fraction:
    check_same_dimension(u, v)
    return sum(((b - a) ** 2 for a, b in zip(u, v)), Fraction(0))


def _ordering(difference: Fraction) -> Ordering:
    if difference < 0:
        return Ordering.LESS
    if difference > 0:
        return Ordering.GREATER
    return Ordering.EQUAL


def compare_l2(u: Point, v: Point, threshold: Fraction) -> Ordering:
    """
    Compare the Euclidean distance d(u,v) with a threshold.

    Args:
        u: First point
        v: Second point
        threshold: Non-negative rational

    Returns:
        Ordering of d(u,v) relative to threshold, decided on squares
    """
    threshold = Fraction(threshold)
    if threshold < 0:
        raise ValueError(f"Negative threshold {threshold}")
    return _ordering(squared_l2(u, v) - threshold * threshold)


def compare_distance(u: Point, v: Point, threshold: Fraction, metric: Metric) -> Ordering:
    if metric == Metric.L2:
        return compare_l2(u, v, threshold)
    threshold = Fraction(threshold)
    if threshold < 0:
        raise ValueError(f"Negative threshold {threshold}")
    return _ordering(distance_linf(u, v) - threshold)


def within(u: Point, v: Point, radius: Fraction, metric: Metric) -> bool:
    """True iff d(u,v) < radius (strict)."""
    return compare_distance(u, v, radius, metric) == Ordering.LESS


def floor_div(x: Fraction, step: Fraction) -> int:
    step = Fraction(step)
    if step <= 0:
        raise ValueError(f"Step must be positive, got {step}")
    return floor(Fraction(x) / step)


def _exact_sqrt(x: Fraction) -> Fraction | None:
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_interval(x: Fraction, precision: Fraction) -> tuple[Fraction, Fraction]:
    """
    Enclose the square root of a non-negative rational.

    Bisection starts from the integer bracket [isqrt(floor x), isqrt(floor x) + 1],
    so a finer precision always continues the same sequence of brackets and
    the returned intervals nest.

    Args:
        x: Non-negative rational
        precision: Maximum width of the result

    Returns:
        (lo, hi) with lo^2 <= x <= hi^2 and hi - lo <= precision
    """
    x, precision = Fraction(x), Fraction(precision)
    if x < 0:
        raise ValueError(f"Square root of negative {x}")
    if precision <= 0:
        raise ValueError(f"Precision must be positive, got {precision}")

    exact = _exact_sqrt(x)
    if exact is not None:
        return exact, exact

    lo = Fraction(isqrt(floor(x)))
    hi = lo + 1
    while hi - lo > precision:
        mid = (lo + hi) / 2
        if mid * mid <= x:
            lo = mid
        else:
            hi = mid
    return lo, hi


def l2_distance_interval(u: Point, v: Point, precision: Fraction) -> tuple[Fraction, Fraction]:
    return sqrt_interval(squared_l2(u, v), precision)


def floor_sqrt(x: Fraction) -> int:
    """Exact floor of sqrt(x), found by refining enclosures until both ends agree."""
    precision = Fraction(1)
    for _ in range(MAX_REFINEMENT_STEPS):
        lo, hi = sqrt_interval(x, precision)
        if floor(lo) == floor(hi):
            return floor(lo)
        precision /= 2
    raise BoundaryIndecision(f"Could not decide floor(sqrt({x}))")


def floor_distance_ratio(u: Point, v: Point, step: Fraction, metric: Metric) -> int:
    """
    Compute floor(d(u,v) / step).

    Exact under L-infinity. Under L2 the ratio is sqrt(|u-v|^2 / step^2) and its
    floor comes from interval refinement.
    """
    step = Fraction(step)
    if step <= 0:
        raise ValueError(f"Step must be positive, got {step}")
    if metric == Metric.LINF:
        return floor_div(distance_linf(u, v), step)
    return floor_sqrt(squared_l2(u, v) / (step * step))


def orientation(a: Point, b: Point, c: Point) -> int:
    """Sign of the 2x2 determinant of (b - a, c - a); 0 means collinear."""
    check_same_dimension(a, b, c)
    if len(a) != 2:
        raise DimensionMismatch("orientation is defined for planar points")
    det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (det > 0) - (det < 0)


@dataclass(frozen=True)
class Interval:
    """
    Closed interval [lo, hi] with exact rational endpoints.

    Arithmetic is outward-exact: the result of every operation contains all
    values obtainable from members of the operands. mpmath `iv` and pyinterval
    keep binary floating-point endpoints, so exact sides such as k^2 - m^2
    would be rounded outward and a rational margin could not be stated exactly.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"Empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value) -> "Interval":
        value = Fraction(value)
        return cls(value, value)

    @classmethod
    def sqrt_of(cls, x, precision: Fraction) -> "Interval":
        return cls(*sqrt_interval(Fraction(x), precision))

    @staticmethod
    def _coerce(other) -> "Interval":
        if isinstance(other, Interval):
            return other
        return Interval.point(other)

    def __add__(self, other):
        other = self._coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        products = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def sqrt(self, precision: Fraction) -> "Interval":
        if self.lo < 0:
            raise ValueError(f"Square root of interval reaching below zero: {self}")
        return Interval(sqrt_interval(self.lo, precision)[0], sqrt_interval(self.hi, precision)[1])

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value) -> bool:
        return self.lo <= Fraction(value) <= self.hi

    def certainly_positive(self) -> bool:
        return self.lo > 0

    def certainly_less(self, other) -> bool:
        return self.hi < self._coerce(other).lo

    def to_json(self) -> list[str]:
        return [format_rational(self.lo), format_rational(self.hi)]

    def __str__(self):
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"


def distance_interval(u: Point, v: Point, metric: Metric, precision: Fraction) -> Interval:
    if metric == Metric.LINF:
        return Interval.point(distance_linf(u, v))
    return Interval(*l2_distance_interval(u, v, precision))
