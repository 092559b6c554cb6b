"""
Deterministic construction of a geometric delta-graph GR(V, delta, sigma).

R_1 is the single vertex sigma(1). Stage t turns R_t into R_{t+1}: every pair
(A, x) with A inside B_delta(x) gets a fresh witness z, the least point in
sigma order with

    B_delta(z) & V(R_t) == B_delta(x) & V(R_t)   and   d(z, x) < min(1/t, delta),

joined to exactly A among the vertices of R_t. sigma(t+1) is then added as an
isolated vertex if it is not present yet.

Pairs are processed in the order (max sigma-rank of A and x, sigma-rank of x,
sorted sigma-ranks of A). With pair_scope="all" the pairs range over all of
V(R_t), as in the definition; their number doubles with every ball member, so
only a few stages are feasible. pair_scope="prefix" restricts A and x to
sigma(1..t), which still hands every (A, x) a witness at every later stage.
"""

import json
import logging
from fractions import Fraction
from itertools import combinations
from typing import Iterator

from langgraph.graph import END, START, StateGraph

from errors import BudgetExhausted, InvariantViolation
from exact_geometry import Metric, Point, distance_interval, within
from gec_engine.construction_state import ConstructionState, PairRecord
from gec_engine.witness import WitnessRequest, check_threshold, find_witness, verify_witness
from lazy_graph import GraphSnapshot, UniverseEnumerator, enumerate_point, points_in_ball


logger = logging.getLogger(__name__)

PAIR_SCOPES = ("all", "prefix")


def sigma_at(sigma: list[int], position: int) -> int:
    """Universe index of sigma(position), 1-based; past the prefix sigma follows the universe order."""
    if position <= len(sigma):
        return sigma[position - 1]
    index = position - len(sigma) - 1
    for used in sorted(sigma):
        if used <= index:
            index += 1
    return index


def sigma_rank(sigma: list[int], index: int) -> int:
    if index in sigma:
        return sigma.index(index) + 1
    return len(sigma) + 1 + index - sum(1 for used in sigma if used < index)


def _points(state: ConstructionState, indices: list[int]) -> dict[int, Point]:
    return {i: enumerate_point(state["universe"], i) for i in indices}


def _snapshot(state: ConstructionState, vertices: list[int], edges: list[tuple[int, int]]) -> GraphSnapshot:
    points = _points(state, vertices)
    return GraphSnapshot(
        vertices=tuple(points[i] for i in vertices),
        edges=frozenset(edges),
        delta=state["delta"],
        metric=state["metric"],
    )


def _pairs(state: ConstructionState, points: dict[int, Point]) -> list[tuple[tuple[int, ...], int]]:
    sigma, delta, metric = state["sigma"], state["delta"], state["metric"]
    if state["pair_scope"] == "prefix":
        scope = [sigma_at(sigma, i) for i in range(1, state["t"] + 1)]
    else:
        scope = list(state["vertices"])

    balls = {
        x: [w for w in scope if w != x and within(points[w], points[x], delta, metric)]
        for x in scope
    }
    total = sum(2 ** len(ball) for ball in balls.values())
    if total > state["max_pairs"]:
        raise BudgetExhausted(
            f"Stage {state['t']} has {total} pairs, above the cap of {state['max_pairs']}",
            {"t": state["t"], "pairs": total},
        )

    rank = {i: sigma_rank(sigma, i) for i in scope}
    pairs = []
    for x, ball in balls.items():
        for size in range(len(ball) + 1):
            for A in combinations(ball, size):
                pairs.append((A, x))

    def order(pair):
        A, x = pair
        return (max([rank[x]] + [rank[a] for a in A]), rank[x], sorted(rank[a] for a in A))

    return sorted(pairs, key=order)


def _candidates(state: ConstructionState, center: Point, radius: Fraction) -> Iterator[tuple[int, Point]]:
    universe, sigma, metric = state["universe"], state["sigma"], state["metric"]
    for i in sigma:
        point = enumerate_point(universe, i)
        if within(point, center, radius, metric):
            yield i, point
    prefix = set(sigma)
    for i, point in points_in_ball(universe, center, radius, metric):
        if i not in prefix:
            yield i, point


def start_construction(state: ConstructionState) -> ConstructionState:
    """R_1: the trivial graph on sigma(1)."""
    first = sigma_at(state["sigma"], 1)
    vertices = [first]
    return {
        "t": 1,
        "vertices": vertices,
        "edges": [],
        "chosen_witnesses": [],
        "stage_sizes": [],
        "snapshot": _snapshot(state, vertices, []),
    }


def extend_stage(state: ConstructionState) -> ConstructionState:
    """Build R_{t+1} from R_t."""
    t, delta, metric = state["t"], state["delta"], state["metric"]
    vertices = list(state["vertices"])
    position = {v: i for i, v in enumerate(vertices)}
    points = _points(state, vertices)
    radius = min(Fraction(1, t), delta)

    edges = list(state["edges"])
    chosen = list(state["chosen_witnesses"])
    used = set(vertices) | set(chosen)
    records: list[PairRecord] = []

    for A, x in _pairs(state, points):
        ball_x = [within(points[w], points[x], delta, metric) for w in vertices]
        trials = 0
        found = None
        for z, z_point in _candidates(state, points[x], radius):
            if trials >= state["budget"]:
                break
            trials += 1
            if z in used:
                continue
            if [within(points[w], z_point, delta, metric) for w in vertices] == ball_x:
                found = z, z_point
                break
        if found is None:
            raise BudgetExhausted(
                f"No witness for pair (A={list(A)}, x={x}) at stage {t} within {state['budget']} candidates",
                {"t": t, "x": x, "A": list(A)},
            )
        z, z_point = found
        used.add(z)
        chosen.append(z)
        position[z] = len(position)
        points[z] = z_point
        edges.extend((position[a], position[z]) for a in A)
        records.append({"t": t, "x": x, "A": list(A), "chosen_z": z, "trials_used": trials})

    stage_vertices = vertices + chosen[len(state["chosen_witnesses"]):]
    following = sigma_at(state["sigma"], t + 1)
    if following not in position:
        stage_vertices.append(following)

    snapshot = _snapshot(state, stage_vertices, edges)
    if not check_threshold(snapshot, delta, metric):
        raise InvariantViolation(f"R_{t + 1} lost the threshold property", {"t": t + 1})

    logger.info("Stage %d: %d pairs, %d vertices, %d edges", t, len(records), len(stage_vertices), len(edges))
    return {
        "t": t + 1,
        "vertices": stage_vertices,
        "edges": edges,
        "chosen_witnesses": chosen,
        "processed_pairs": records,
        "stage_sizes": state["stage_sizes"] + [len(vertices)],
        "snapshot": snapshot,
    }


def should_extend(state: ConstructionState) -> bool:
    return state["t"] < state["t_max"]


def create_workflow() -> StateGraph:
    """
    Create the LangGraph workflow for the staged construction.

    Returns:
        Compiled StateGraph workflow
    """
    workflow = StateGraph(ConstructionState)

    workflow.add_node("start_construction", start_construction)
    workflow.add_node("extend_stage", extend_stage)

    workflow.add_edge(START, "start_construction")
    workflow.add_conditional_edges("start_construction", should_extend, {
        True: "extend_stage",
        False: END,
    })
    workflow.add_conditional_edges("extend_stage", should_extend, {
        True: "extend_stage",
        False: END,
    })

    return workflow.compile()


construction_graph = create_workflow()


def build_gr(
    universe: UniverseEnumerator,
    delta: Fraction,
    sigma: list[int] | None = None,
    t_max: int = 1,
    metric: Metric = Metric.LINF,
    pair_scope: str = "all",
    budget: int = 100_000,
    max_pairs: int = 50_000,
) -> ConstructionState:
    """
    Run the construction up to R_{t_max}.

    Args:
        universe: The dense universe V
        delta: Threshold of the graph
        sigma: Leading part of the ordering sigma (universe indices); the rest follows
            the universe enumeration
        t_max: Last stage to build, at least 1
        metric: Distance of the universe
        pair_scope: "all" or "prefix"
        budget: Candidates examined per pair before giving up
        max_pairs: Largest number of pairs a stage may process

    Returns:
        Final ConstructionState holding R_{t_max} and the log of processed pairs
    """
    if t_max < 1:
        raise ValueError(f"t_max must be at least 1, got {t_max}")
    if pair_scope not in PAIR_SCOPES:
        raise ValueError(f"pair_scope must be one of {PAIR_SCOPES}, got {pair_scope!r}")
    sigma = list(sigma or [])
    if len(set(sigma)) != len(sigma):
        raise ValueError("sigma must not repeat an index")

    initial_state = {
        "t": 1,
        "t_max": t_max,
        "universe": universe,
        "delta": Fraction(delta),
        "metric": Metric(metric),
        "sigma": sigma,
        "pair_scope": pair_scope,
        "budget": budget,
        "max_pairs": max_pairs,
        "vertices": [],
        "edges": [],
        "processed_pairs": [],
        "chosen_witnesses": [],
        "stage_sizes": [],
        "snapshot": None,
    }
    return construction_graph.invoke(initial_state, config={"recursion_limit": t_max + 10})


def _replay_radius(x: Point, z: Point, bound: Fraction, metric: Metric) -> Fraction:
    """A rational strictly between d(x, z) and bound."""
    precision = bound
    while True:
        far = distance_interval(x, z, metric, precision).hi
        if far < bound:
            return (far + bound) / 2
        precision /= 2


def replay_construction(state: ConstructionState) -> list[str]:
    """
    Re-check every logged pair against the finished graph.

    For a pair (A, x) processed at stage t, B is V(R_t) & B_delta(x) minus A and x.
    The logged witness must satisfy the three witness clauses in the final
    snapshot, and a search over that snapshot must succeed.

    Returns:
        list: Failure descriptions, empty when the replay passes
    """
    final = state["snapshot"]
    delta, metric = state["delta"], state["metric"]
    universe = state["universe"]
    failures = []
    for record in state["processed_pairs"]:
        t = record["t"]
        stage_vertices = state["vertices"][: state["stage_sizes"][t - 1]]
        x = enumerate_point(universe, record["x"])
        A = tuple(enumerate_point(universe, a) for a in record["A"])
        B = tuple(
            w for w in (enumerate_point(universe, i) for i in stage_vertices)
            if w != x and w not in A and within(w, x, delta, metric)
        )
        z = enumerate_point(universe, record["chosen_z"])
        req = WitnessRequest(
            x=x,
            A=A,
            B=B,
            delta=delta,
            delta_prime=_replay_radius(x, z, min(Fraction(1, t), delta), metric),
            max_trials=len(final.vertices),
        )
        if not verify_witness(final, req, z):
            failures.append(f"stage {t}: witness {record['chosen_z']} fails for x={record['x']}, A={record['A']}")
        elif not find_witness(final, req).found:
            failures.append(f"stage {t}: search found nothing for x={record['x']}, A={record['A']}")
    return failures


def construction_log_lines(state: ConstructionState) -> list[str]:
    """The construction log as JSON lines."""
    return [json.dumps(record, sort_keys=True) for record in state["processed_pairs"]]
