"""
Finite-scale evidence that a delta-ball induces an existentially closed graph.

Inside U = B_delta(c), any disjoint A and B drawn from U lie within delta of
the center, so a witness close enough to c is correctly joined and stays in
U. The check samples such A and B from a pool of ball members and searches
for the witness near the center. A failure means the budget was too small,
not that the property fails.
"""

import logging
from fractions import Fraction
from itertools import islice
from typing import TypedDict

import numpy as np

from exact_geometry import Point, format_point, make_point, parse_rational, within
from gec_engine.witness import WitnessRequest, find_witness
from lazy_graph import AdjacencyOracle, GraphSnapshot, points_in_ball


logger = logging.getLogger(__name__)


class BallECReport(TypedDict):
    center: list[str]
    samples: int
    successes: int
    success_rate: float
    mean_trials: float
    failures: list[dict]


def ball_pool(graph: AdjacencyOracle | GraphSnapshot, center: Point, delta: Fraction, pool_size: int) -> list[Point]:
    """Members of B_delta(center) other than the center: the first pool_size universe points, or every snapshot vertex."""
    if isinstance(graph, GraphSnapshot):
        return [v for v in graph.vertices if v != center and within(v, center, delta, graph.metric)]
    members = (p for _, p in points_in_ball(graph.universe, center, delta, graph.metric) if p != center)
    return list(islice(members, pool_size))


def check_ball_ec(
    graph: AdjacencyOracle | GraphSnapshot,
    center: Point,
    delta: Fraction,
    trial_budget: int,
    samples: int = 100,
    max_set_size: int = 3,
    pool_size: int = 12,
    seed: int = 0,
) -> BallECReport:
    """
    Sample disjoint A, B from the ball pool and look for correctly joined vertices.

    Args:
        graph: Oracle or snapshot
        center: Center of the ball
        delta: Radius of the ball, the graph's threshold
        trial_budget: Candidates examined per sample
        samples: Number of (A, B) samples
        max_set_size: Upper bound on |A| + |B|
        pool_size: Ball members drawn from an oracle's universe
        seed: Seed for sampling A and B

    Returns:
        BallECReport with the observed success rate
    """
    center = make_point(center)
    delta = parse_rational(delta)
    pool = ball_pool(graph, center, delta, pool_size)
    rng = np.random.default_rng(seed)

    successes, total_trials = 0, 0
    failures = []
    for _ in range(samples):
        k = int(rng.integers(0, min(max_set_size, len(pool)) + 1))
        chosen = [pool[i] for i in rng.choice(len(pool), size=k, replace=False)] if k else []
        split = int(rng.integers(0, k + 1))
        A, B = tuple(chosen[:split]), tuple(chosen[split:])

        req = WitnessRequest(x=center, A=A, B=B, delta=delta, delta_prime=delta / 2, max_trials=trial_budget)
        result = find_witness(graph, req)
        total_trials += result.trials
        if result.found:
            successes += 1
        else:
            failures.append({"A": [format_point(a) for a in A], "B": [format_point(b) for b in B], "trials": result.trials})

    logger.info("Ball check at %s: %d/%d samples succeeded", center, successes, samples)
    return {
        "center": format_point(center),
        "samples": samples,
        "successes": successes,
        "success_rate": successes / samples if samples else 1.0,
        "mean_trials": total_trials / samples if samples else 0.0,
        "failures": failures,
    }
