import logging
from typing import Callable

from exact_geometry import Point
from lazy_graph import UniverseEnumerator, enumerate_point
from back_and_forth.extension import extend_forth
from back_and_forth.state import BackAndForthState


logger = logging.getLogger(__name__)


def next_unmapped(universe: UniverseEnumerator, cursor: int, mapped: Callable[[Point], bool]) -> tuple[int, Point]:
    """The first enumeration index at or after cursor whose point is not mapped yet."""
    index = cursor
    while True:
        point = enumerate_point(universe, index)
        if not mapped(point):
            return index, point
        index += 1


def go_forth(state: BackAndForthState) -> BackAndForthState:
    """
    Map the least source vertex that has no image yet.

    Returns:
        dict: The extended map, the advanced source cursor and the step record
    """
    G, H, partial = state["G"], state["H"], state["partial"]
    index, v = next_unmapped(G.universe, state["source_cursor"], partial.maps_source)
    partial, step = extend_forth(partial, G, H, v, state["budget"], guide=state.get("guide"))
    logger.info("Round %d forth: source index %d, map size %d", state["round"] + 1, index, len(partial))
    return {
        "partial": partial,
        "source_cursor": index + 1,
        "transcript": [step.to_json()],
    }
