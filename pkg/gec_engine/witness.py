"""
Witness search for the geometric existentially closed property.

Given x, disjoint A and B inside B_delta(x) and delta' < delta, a witness is a
vertex z with d(x,z) < delta', within delta of every member of A and B,
adjacent to all of A and to none of B.

Over an oracle the search walks the universe enumeration inside B_eps(x),
where eps = min(delta - max d(x,u), delta') for u in A and B. Every point of
that ball already satisfies the distance clauses, so each candidate succeeds
independently with probability p^|A| (1-p)^|B| and the number of trials is
geometric. Over a finite snapshot the candidates are its vertices that
satisfy the distance clauses, in vertex order.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from errors import MalformedRequest
from exact_geometry import Metric, Point, distance_interval, make_point, parse_rational, within
from lazy_graph import AdjacencyOracle, GraphSnapshot, adjacent, points_in_ball


logger = logging.getLogger(__name__)

# Starting enclosure width when eps has to be bounded from below under L2
_RADIUS_PRECISION = Fraction(1, 2**20)


@dataclass(frozen=True)
class WitnessRequest:
    x: Point
    A: tuple[Point, ...]
    B: tuple[Point, ...]
    delta: Fraction
    delta_prime: Fraction
    max_trials: int = 10_000

    def __post_init__(self):
        object.__setattr__(self, "x", make_point(self.x))
        object.__setattr__(self, "A", tuple(make_point(a) for a in self.A))
        object.__setattr__(self, "B", tuple(make_point(b) for b in self.B))
        object.__setattr__(self, "delta", parse_rational(self.delta))
        object.__setattr__(self, "delta_prime", parse_rational(self.delta_prime))

    def validate(self, metric: Metric) -> None:
        """Raise MalformedRequest unless the request satisfies its invariants."""
        if not 0 < self.delta_prime < self.delta:
            raise MalformedRequest(f"Need 0 < delta' < delta, got delta'={self.delta_prime}, delta={self.delta}")
        if set(self.A) & set(self.B):
            raise MalformedRequest("A and B must be disjoint")
        if self.x in self.A or self.x in self.B:
            raise MalformedRequest("x must not belong to A or B")
        for u in self.A + self.B:
            if len(u) != len(self.x):
                raise MalformedRequest(f"{u} has the wrong dimension")
            if not within(u, self.x, self.delta, metric):
                raise MalformedRequest(f"{u} is not strictly within delta of x")
        if self.max_trials < 0:
            raise MalformedRequest("max_trials must be non-negative")


@dataclass(frozen=True)
class Witness:
    point: Point
    trials: int
    index: int | None = None
    found: bool = field(default=True, init=False)


@dataclass(frozen=True)
class NotFound:
    trials: int
    found: bool = field(default=False, init=False)


def check_threshold(g: GraphSnapshot, delta: Fraction, metric: Metric) -> bool:
    """
    Check that every edge joins points at distance strictly below delta.

    Returns:
        bool: True iff the snapshot has threshold delta
    """
    delta = parse_rational(delta)
    return all(within(g.vertices[i], g.vertices[j], delta, metric) for i, j in g.edges)


def search_radius(req: WitnessRequest, metric: Metric) -> Fraction:
    """eps = min(delta - max d(x,u), delta'); under L2 a positive rational lower bound of it."""
    others = req.A + req.B
    if not others:
        return req.delta_prime
    if metric == Metric.LINF:
        far = max(distance_interval(req.x, u, metric, 1).hi for u in others)
        return min(req.delta - far, req.delta_prime)
    precision = _RADIUS_PRECISION
    while True:
        far = max(distance_interval(req.x, u, metric, precision).hi for u in others)
        if far < req.delta:
            return min(req.delta - far, req.delta_prime)
        precision /= 2


def _joined(graph: AdjacencyOracle | GraphSnapshot, u: Point, v: Point) -> bool:
    if isinstance(graph, GraphSnapshot):
        return graph.has_edge(u, v)
    return adjacent(graph, u, v)


def _candidates(graph: AdjacencyOracle | GraphSnapshot, req: WitnessRequest) -> Iterator[tuple[int | None, Point]]:
    metric = graph.metric
    if isinstance(graph, GraphSnapshot):
        for i, z in enumerate(graph.vertices):
            if within(z, req.x, req.delta_prime, metric) and all(within(z, u, req.delta, metric) for u in req.A + req.B):
                yield i, z
        return
    if graph.universe is None:
        raise MalformedRequest("Witness search over an oracle needs a universe")
    yield from points_in_ball(graph.universe, req.x, search_radius(req, metric), metric)


def correctly_joined(graph: AdjacencyOracle | GraphSnapshot, z: Point, A, B) -> bool:
    return all(_joined(graph, z, a) for a in A) and not any(_joined(graph, z, b) for b in B)


def verify_witness(graph: AdjacencyOracle | GraphSnapshot, req: WitnessRequest, z: Point) -> bool:
    """Exact post-hoc check of the three witness clauses."""
    metric = graph.metric
    if z == req.x or z in req.A or z in req.B:
        return False
    if not within(z, req.x, req.delta_prime, metric):
        return False
    if not all(within(z, u, req.delta, metric) for u in req.A + req.B):
        return False
    return correctly_joined(graph, z, req.A, req.B)


def find_witness(
    graph: AdjacencyOracle | GraphSnapshot,
    req: WitnessRequest,
    exclude: frozenset = frozenset(),
) -> Witness | NotFound:
    """
    Search for a vertex correctly joined to A and B near x.

    Args:
        graph: Oracle (searched through its universe) or finite snapshot
        req: The witness request; validated before any search
        exclude: Further points that may not be returned

    Returns:
        Witness with the point and the number of candidates examined, or NotFound
        once max_trials candidates were examined
    """
    req.validate(graph.metric)
    banned = set(req.A) | set(req.B) | {req.x} | set(exclude)
    trials = 0
    for index, z in _candidates(graph, req):
        if trials >= req.max_trials:
            break
        if z in banned:
            continue
        trials += 1
        if correctly_joined(graph, z, req.A, req.B):
            logger.debug("Witness %s after %d trials", z, trials)
            return Witness(point=z, trials=trials, index=index)
    logger.debug("No witness among %d candidates near %s", trials, req.x)
    return NotFound(trials=trials)
