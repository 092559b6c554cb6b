import logging

from errors import GuideViolation, MalformedRequest
from exact_geometry import Metric, floor_distance_ratio, format_point, make_point
from step_isometry import check_guide_conditions
from back_and_forth.state import BackAndForthState


logger = logging.getLogger(__name__)


def check_guide(state: BackAndForthState) -> BackAndForthState:
    """
    Check the guide and the guided conditions after a round.

    The guide's floor equality is checked on every source vertex mapped since
    the last check; the three guided conditions on the whole map.

    Raises:
        MalformedRequest: The guide is not a step-isometry on the queried pairs
        GuideViolation: The map breaks a guided condition
    """
    partial, guide = state["partial"], state["guide"]
    delta, gamma = partial.delta, partial.gamma
    sources = partial.sources
    images = [make_point(guide.on_point(s)) for s in sources]
    for k in range(state["guide_checked"], len(sources)):
        for i in range(k):
            source_floor = floor_distance_ratio(sources[i], sources[k], delta, Metric.LINF)
            guide_floor = floor_distance_ratio(images[i], images[k], gamma, Metric.LINF)
            if source_floor != guide_floor:
                raise MalformedRequest(
                    f"Guide is not a step-isometry on {format_point(sources[i])}, {format_point(sources[k])}: "
                    f"floors {source_floor} and {guide_floor}"
                )

    violations = check_guide_conditions(partial.as_map(), guide.on_point, delta, gamma, partial.anchors)
    if violations:
        raise GuideViolation(
            f"Round {state['round']} broke a guided condition: {violations[0]}",
            {"round": state["round"], "violations": violations},
        )
    logger.debug("Guide and guided conditions hold on %d source vertices", len(sources))
    return {"guide_checked": len(sources)}
