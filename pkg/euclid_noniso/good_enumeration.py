import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Sequence

import networkx as nx

from errors import BudgetExhausted, MalformedRequest
from exact_geometry import Metric, Point, distance_interval, format_point, format_rational, make_point, orientation, parse_rational, within
from lazy_graph import UniverseEnumerator, points_in_ball


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GoodEnumeration:
    """
    A finite ordering of planar points with every consecutive gap below delta
    and a first triple that is not collinear.
    """

    points: tuple[Point, ...]
    delta: Fraction
    metric: Metric = Metric.L2

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(make_point(p) for p in self.points))
        object.__setattr__(self, "delta", parse_rational(self.delta))
        if len(self.points) < 3:
            raise MalformedRequest("A good enumeration starts with three points")
        if len(set(self.points)) != len(self.points):
            raise MalformedRequest("A good enumeration lists every point once")
        if any(len(p) != 2 for p in self.points):
            raise MalformedRequest("Good enumerations are planar")
        if orientation(*self.points[:3]) == 0:
            raise MalformedRequest("The first three points are collinear")
        for a, b in zip(self.points, self.points[1:]):
            if not within(a, b, self.delta, self.metric):
                raise MalformedRequest(f"Gap from {format_point(a)} to {format_point(b)} is not below delta")

    def __len__(self) -> int:
        return len(self.points)

    def prefix(self, n: int) -> tuple[Point, ...]:
        return self.points[:n]

    def path_graph(self) -> nx.Graph:
        """Consecutive points joined; connected by construction."""
        graph = nx.path_graph(len(self.points))
        nx.set_node_attributes(graph, {i: format_point(p) for i, p in enumerate(self.points)}, "point")
        return graph

    def to_json(self) -> dict:
        return {
            "delta": format_rational(self.delta),
            "metric": self.metric.value,
            "points": [format_point(p) for p in self.points],
        }


def _nearby(
    universe: UniverseEnumerator,
    center: Point,
    radius: Fraction,
    metric: Metric,
    taken: set[Point],
    budget: int,
) -> Point:
    """The first universe point inside B_radius(center) not taken yet."""
    for trials, (_, point) in enumerate(points_in_ball(universe, center, radius, metric), start=1):
        if point not in taken:
            return point
        if trials >= budget:
            break
    raise BudgetExhausted(
        f"No free universe point near {format_point(center)}",
        {"center": format_point(center), "radius": format_rational(radius)},
    )


def _starting_triple(points: list[Point], delta: Fraction, universe: UniverseEnumerator, metric: Metric, budget: int) -> list[Point]:
    if len(points) >= 3:
        a, b, c = points[:3]
        if orientation(a, b, c) != 0 and all(within(p, q, delta, metric) for p, q in ((a, b), (b, c), (a, c))):
            return [a, b, c]
    v1 = points[0]
    radius = delta / 2
    taken = set(points)
    triple = [v1]
    trials = 0
    for _, point in points_in_ball(universe, v1, radius, metric):
        trials += 1
        if trials > budget:
            break
        if point in taken or point in triple:
            continue
        if len(triple) == 1 or orientation(triple[0], triple[1], point) != 0:
            triple.append(point)
        if len(triple) == 3:
            return triple
    raise BudgetExhausted(f"No non-collinear triple near {format_point(v1)}", {"v1": format_point(v1)})


def good_enumeration(
    points: Sequence[Point],
    delta: Fraction,
    universe: UniverseEnumerator,
    budget: int,
    metric: Metric = Metric.L2,
) -> GoodEnumeration:
    """
    Order the given points into a good enumeration, adding universe points as connectors.

    Starts from three non-collinear points pairwise closer than delta: the
    first three inputs if they qualify, else the first input and two universe
    points within delta/2 of it. Each later input joins directly when it is
    closer than delta to the last point. Otherwise a path of connectors
    follows the segment to it: the segment is cut into l hops shorter than
    3*delta/4 and each cut point is replaced by a free universe point within
    delta/8 of it, so every gap stays below delta.

    Args:
        points: Planar rational points to enumerate
        delta: Gap bound
        universe: Source of connector points
        budget: Candidates examined per connector
        metric: Distance used for the gaps

    Raises:
        BudgetExhausted: A connector or the starting triple was not found
    """
    points = [make_point(p) for p in points]
    delta = parse_rational(delta)
    if not points:
        raise MalformedRequest("good_enumeration needs at least one point")
    if any(len(p) != 2 for p in points) or universe.dimension != 2:
        raise MalformedRequest("Good enumerations are planar")
    if delta <= 0:
        raise MalformedRequest(f"delta must be positive, got {delta}")

    order = _starting_triple(points, delta, universe, metric, budget)
    taken = set(order) | set(points)
    hop, radius = 3 * delta / 4, delta / 8
    connectors = 0
    for u in points:
        if u in order:
            continue
        last = order[-1]
        if not within(last, u, delta, metric):
            length = distance_interval(last, u, metric, radius).hi
            hops = floor(length / hop) + 1
            for i in range(1, hops):
                waypoint = tuple(a + (b - a) * Fraction(i, hops) for a, b in zip(last, u))
                connector = _nearby(universe, waypoint, radius, metric, taken, budget)
                taken.add(connector)
                order.append(connector)
                connectors += 1
        order.append(u)

    logger.info("Good enumeration of %d inputs: %d points, %d connectors", len(points), len(order), connectors)
    return GoodEnumeration(points=tuple(order), delta=delta, metric=metric)
