import logging

from back_and_forth.extension import extend_back
from back_and_forth.nodes.go_forth import next_unmapped
from back_and_forth.state import BackAndForthState


logger = logging.getLogger(__name__)


def go_back(state: BackAndForthState) -> BackAndForthState:
    """
    Give the least unmapped target vertex a preimage and close the round.

    Returns:
        dict: The extended map, the advanced target cursor, the round counter and the step record
    """
    G, H, partial = state["G"], state["H"], state["partial"]
    index, w = next_unmapped(H.universe, state["target_cursor"], partial.maps_target)
    partial, step = extend_back(partial, G, H, w, state["budget"], guide=state.get("guide"))
    logger.info("Round %d back: target index %d, map size %d", state["round"] + 1, index, len(partial))
    return {
        "partial": partial,
        "target_cursor": index + 1,
        "round": state["round"] + 1,
        "transcript": [step.to_json()],
    }
