"""
Delta-free planar sets: no two points at distance exactly delta.

Two finite point sets can only be isometric when their multisets of squared
distances agree. The demo builds two delta-free sets of equal size from the
same universe whose distance multisets differ, a rational stand-in for the
irrational point (2^(1/4), 0) that separates a delta-free set from its
extension.
"""

import logging
from collections import Counter
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from errors import BudgetExhausted, MalformedRequest
from exact_geometry import Point, format_point, format_rational, parse_rational, squared_l2
from lazy_graph import UniverseEnumerator, enumerate_point, index_of


logger = logging.getLogger(__name__)


def _is_free_of(point: Point, kept: Sequence[Point], delta_squared: Fraction) -> bool:
    return all(squared_l2(point, q) != delta_squared for q in kept)


def delta_free_filter(universe: UniverseEnumerator, delta: Fraction, count: int) -> list[Point]:
    """The first `count` enumerated points, greedily skipping any point at distance exactly delta from one kept."""
    if universe.dimension != 2:
        raise MalformedRequest("delta-free sets are planar")
    delta = parse_rational(delta)
    if delta <= 0:
        raise MalformedRequest(f"delta must be positive, got {delta}")
    delta_squared = delta * delta
    kept: list[Point] = []
    index = 0
    while len(kept) < count:
        point = enumerate_point(universe, index)
        if _is_free_of(point, kept, delta_squared):
            kept.append(point)
        index += 1
    return kept


def distance_profile(points: Sequence[Point]) -> list[Fraction]:
    """Sorted squared distances over all unordered pairs."""
    return sorted(squared_l2(a, b) for a, b in combinations(points, 2))


def profiles_compatible(P: Sequence[Point], Q: Sequence[Point]) -> bool:
    """False rules out an isometry between P and Q; True decides nothing."""
    return len(P) == len(Q) and Counter(distance_profile(P)) == Counter(distance_profile(Q))


def delta_free_demo(universe: UniverseEnumerator, delta: Fraction, count: int, search: int = 10_000) -> dict:
    """
    Two delta-free sets of `count` points with incompatible distance profiles.

    V is the greedy filter. W replaces the last point of V by the first later
    universe point that keeps W delta-free and changes the profile.

    Returns:
        dict: Both sets, their profiles' verdict and the substitution note
    """
    if count < 2:
        raise MalformedRequest("The demo needs at least two points")
    delta = parse_rational(delta)
    V = delta_free_filter(universe, delta, count)
    base = V[:-1]
    start = max(index_of(universe, p) for p in V) + 1
    for index in range(start, start + search):
        candidate = enumerate_point(universe, index)
        W = base + [candidate]
        if _is_free_of(candidate, base, delta * delta) and not profiles_compatible(V, W):
            logger.info("delta-free demo: replaced %s by %s", format_point(V[-1]), format_point(candidate))
            return {
                "delta": format_rational(delta),
                "V": [format_point(p) for p in V],
                "W": [format_point(p) for p in W],
                "profiles_compatible": False,
                "substitution": "rational replacement of the irrational point (2^(1/4), 0)",
            }
    raise BudgetExhausted(f"No replacement point among {search} candidates", {"count": count})
