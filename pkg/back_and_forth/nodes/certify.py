import logging

from errors import InvariantViolation
from step_isometry import check_guide_conditions
from back_and_forth.certificate import verify_partial
from back_and_forth.state import BackAndForthState


logger = logging.getLogger(__name__)


def certify(state: BackAndForthState) -> BackAndForthState:
    """
    Verify the finished map over all of its pairs.

    With a guide, the three guided conditions are part of the verdict.

    Raises:
        InvariantViolation: The map is not a step-isometric isomorphism, or breaks a guided condition
    """
    partial = state["partial"]
    certificate = verify_partial(partial, state["G"], state["H"])
    guide = state.get("guide")
    if guide is not None:
        violations = check_guide_conditions(
            partial.as_map(), guide.on_point, partial.delta, partial.gamma, partial.anchors,
        )
        certificate["guide_condition_violations"] = violations
        certificate["guide_followed"] = sum(
            1 for record in state["transcript"] if record.get("guide_admissible")
        )
        certificate["valid"] = certificate["valid"] and not violations
    if not certificate["valid"]:
        raise InvariantViolation(
            f"Back-and-forth produced an invalid map of size {certificate['size']}",
            {"certificate": certificate},
        )
    return {"certificate": certificate}
