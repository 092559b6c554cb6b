import json
import logging
from itertools import combinations
from pathlib import Path

from exact_geometry import Metric, floor_distance_ratio, format_point, format_rational, make_point
from lazy_graph import adjacent
from step_isometry import lemma_violations
from back_and_forth.partial_isomorphism import InfiniteGraphHandle, PartialIsomorphism


logger = logging.getLogger(__name__)


def verify_partial(state: PartialIsomorphism, G: InfiniteGraphHandle, H: InfiniteGraphHandle) -> dict:
    """
    Re-check a partial isomorphism over all of its pairs.

    Adjacency is queried on both oracles and the floor equality
    floor(d(u,v)/delta) = floor(d(f(u),f(v))/gamma) is decided exactly.
    Discrepancies are listed, never raised.

    Returns:
        dict: Certificate with the violations found and a top-level "valid" flag
    """
    pairs = list(zip(state.sources, state.targets))
    adjacency_violations, floor_violations = [], []
    edges = 0
    for (u, fu), (v, fv) in combinations(pairs, 2):
        joined = adjacent(G.oracle, u, v)
        edges += joined
        if joined != adjacent(H.oracle, fu, fv):
            adjacency_violations.append([format_point(u), format_point(v)])
        source_floor = floor_distance_ratio(u, v, state.delta, Metric.LINF)
        target_floor = floor_distance_ratio(fu, fv, state.gamma, Metric.LINF)
        if source_floor != target_floor:
            floor_violations.append({"pair": [format_point(u), format_point(v)], "source": source_floor, "target": target_floor})

    condition_violations = []
    if pairs:
        condition_violations = lemma_violations(state.as_map(), state.delta, state.gamma, state.anchors)

    certificate = {
        "size": len(pairs),
        "edges": edges,
        "delta": format_rational(state.delta),
        "gamma": format_rational(state.gamma),
        "anchors": [format_point(p) for p in state.anchors] if pairs else [],
        "source_graph": G.to_json(),
        "target_graph": H.to_json(),
        "adjacency_violations": adjacency_violations,
        "floor_violations": floor_violations,
        "condition_violations": condition_violations,
        "valid": not (adjacency_violations or floor_violations or condition_violations),
    }
    logger.info(
        "Verified map of size %d: %d adjacency, %d floor, %d condition violations",
        len(pairs), len(adjacency_violations), len(floor_violations), len(condition_violations),
    )
    return certificate


def write_certificate(path: str | Path, certificate: dict) -> None:
    Path(path).write_text(json.dumps(certificate, sort_keys=True, indent=2))


def write_transcript(path: str | Path, records: list[dict]) -> None:
    """One JSON object per line: the base pair first, then every extension step."""
    with open(path, "w") as f:
        for record in records:
            f.write(json.dumps(record, sort_keys=True) + "\n")


def read_transcript(path: str | Path) -> list[dict]:
    with open(path) as f:
        return [json.loads(line) for line in f if line.strip()]


def base_record(state: PartialIsomorphism) -> dict:
    v0, w0 = state.anchors
    return {
        "direction": "base",
        "point": format_point(v0),
        "image": format_point(w0),
        "delta": format_rational(state.delta),
        "gamma": format_rational(state.gamma),
    }


def replay_transcript(records: list[dict], G: InfiniteGraphHandle, H: InfiniteGraphHandle) -> tuple[PartialIsomorphism, dict]:
    """
    Rebuild the map recorded in a transcript without searching, and verify it.

    Returns:
        tuple: The rebuilt map and its certificate
    """
    sources, targets = [], []
    for record in records:
        point, image = make_point(record["point"]), make_point(record["image"])
        if record["direction"] == "back":
            sources.append(image)
            targets.append(point)
        else:
            sources.append(point)
            targets.append(image)
    state = PartialIsomorphism(sources=tuple(sources), targets=tuple(targets), delta=G.delta, gamma=H.delta)
    return state, verify_partial(state, G, H)
