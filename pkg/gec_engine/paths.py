"""
Graph distance in geometric delta-graphs over convex regions.

For d(u,v) > delta the graph distance is floor(d(u,v)/delta) + 1. A path of
that length is built hop by hop: with eps = (k*delta - d)/k the straight
segment is cut into k equal gaps of length delta - eps, and each interior
vertex is a witness found within eps/2 of its waypoint. The last interior
vertex is joined to both its predecessor and v. No shorter path exists since
every hop covers less than delta.
"""

import logging
from fractions import Fraction

import networkx as nx

from errors import BoundaryIndecision, BudgetExhausted, MalformedRequest
from exact_geometry import (
    Metric,
    Ordering,
    Point,
    compare_distance,
    distance_interval,
    distance_linf,
    floor_sqrt,
    format_point,
    format_rational,
    make_point,
    parse_rational,
    squared_l2,
    within,
)
from gec_engine.witness import WitnessRequest, find_witness
from lazy_graph import AdjacencyOracle, adjacent, sample_larg


logger = logging.getLogger(__name__)


def _ratio_is_integral(u: Point, v: Point, delta: Fraction, metric: Metric) -> bool:
    if metric == Metric.LINF:
        return (distance_linf(u, v) / delta).denominator == 1
    ratio = squared_l2(u, v) / (delta * delta)
    root = floor_sqrt(ratio)
    return root * root == ratio


def expected_graph_distance(u: Point, v: Point, delta: Fraction, metric: Metric = Metric.LINF) -> int:
    """
    Graph distance between far-apart vertices: floor(d(u,v)/delta) + 1.

    Args:
        u: First vertex
        v: Second vertex, with d(u,v) > delta
        delta: Threshold
        metric: Distance of the space

    Returns:
        int: The graph distance

    Raises:
        BoundaryIndecision: d(u,v)/delta is an integer under L2
    """
    u, v, delta = make_point(u), make_point(v), parse_rational(delta)
    if compare_distance(u, v, delta, metric) != Ordering.GREATER:
        raise MalformedRequest("expected_graph_distance needs d(u,v) > delta")
    if _ratio_is_integral(u, v, delta, metric):
        if metric == Metric.L2:
            raise BoundaryIndecision(f"d({u}, {v})/{delta} is an integer under L2")
        logger.warning("d(u,v)/delta is an integer for u=%s, v=%s: boundary case", u, v)
    if metric == Metric.LINF:
        return int(distance_linf(u, v) // delta) + 1
    return floor_sqrt(squared_l2(u, v) / (delta * delta)) + 1


def _slack(u: Point, v: Point, delta: Fraction, k: int, metric: Metric) -> Fraction:
    """eps = (k*delta - d(u,v))/k, or a positive rational lower bound of it under L2."""
    precision = delta
    while True:
        far = distance_interval(u, v, metric, precision).hi
        if far < k * delta:
            return (k * delta - far) / k
        precision /= 2


def construct_path(oracle: AdjacencyOracle, u: Point, v: Point, trial_budget: int) -> list[Point]:
    """
    Build a shortest path from u to v in the oracle's graph.

    Args:
        oracle: Oracle over a universe with convex closure
        u: Start vertex
        v: End vertex, d(u,v) > delta
        trial_budget: Candidates examined per hop

    Returns:
        list: u = p_0, ..., p_k = v with consecutive vertices adjacent
    """
    u, v = make_point(u), make_point(v)
    delta, metric = oracle.delta, oracle.metric
    k = expected_graph_distance(u, v, delta, metric)
    eps = _slack(u, v, delta, k, metric)
    waypoints = [tuple(a + Fraction(i, k) * (b - a) for a, b in zip(u, v)) for i in range(k + 1)]

    path = [u]
    for i in range(1, k):
        A = (path[-1], v) if i == k - 1 else (path[-1],)
        req = WitnessRequest(x=waypoints[i], A=A, B=(), delta=delta, delta_prime=eps / 2, max_trials=trial_budget)
        result = find_witness(oracle, req, exclude=frozenset(path + [v]))
        if not result.found:
            raise BudgetExhausted(
                f"No vertex for hop {i} of {k} within {trial_budget} candidates",
                {"segment": i, "k": k, "waypoint": format_point(waypoints[i])},
            )
        path.append(result.point)
    path.append(v)
    logger.debug("Path of length %d from %s to %s", k, u, v)
    return path


def certify_path(oracle: AdjacencyOracle, path: list[Point]) -> dict:
    """
    Exact certificate for a path returned by construct_path.

    Returns:
        dict: length, hop checks, the lower bound (k-1)*delta <= d(u,v), and the
        BFS distance between the endpoints in the graph induced on the path
    """
    delta, metric = oracle.delta, oracle.metric
    u, v = path[0], path[-1]
    k = len(path) - 1
    hops = list(zip(path, path[1:]))

    if metric == Metric.LINF:
        lower_bound = (k - 1) * delta <= distance_linf(u, v)
    else:
        lower_bound = ((k - 1) * delta) ** 2 <= squared_l2(u, v)

    induced = sample_larg(path, delta, oracle.p, oracle.seed, metric).to_networkx()
    return {
        "u": format_point(u),
        "v": format_point(v),
        "delta": format_rational(delta),
        "metric": metric.value,
        "k": k,
        "expected": expected_graph_distance(u, v, delta, metric),
        "path": [format_point(p) for p in path],
        "all_hops_adjacent": all(adjacent(oracle, a, b) for a, b in hops),
        "all_hops_below_delta": all(within(a, b, delta, metric) for a, b in hops),
        "lower_bound_certified": lower_bound,
        "induced_bfs_distance": nx.shortest_path_length(induced, 0, k),
    }
