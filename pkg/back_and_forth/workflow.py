"""
The back-and-forth construction as a LangGraph workflow.

A round maps the least unmapped source vertex (go_forth) and then gives the
least unmapped target vertex a preimage (go_back). A guided run checks the
guide and the guided conditions after each round. When the rounds are used up the map is certified.
"""

import logging
from typing import Optional, Sequence

from langgraph.graph import END, START, StateGraph

from errors import BudgetExhausted, InvariantViolation, MalformedRequest
from exact_geometry import Metric, format_point, make_point
from lazy_graph import adjacent
from step_isometry import FiniteMap, is_step_isometry, lemma_violations
from back_and_forth.certificate import base_record
from back_and_forth.nodes import certify, check_guide, go_back, go_forth
from back_and_forth.partial_isomorphism import Guide, InfiniteGraphHandle, PartialIsomorphism, ProductGuide
from back_and_forth.state import BackAndForthState


logger = logging.getLogger(__name__)


def should_continue(state: BackAndForthState) -> bool:
    return state["round"] < state["rounds"]


def create_workflow(guided: bool = False) -> StateGraph:
    """
    Create the LangGraph workflow for the back-and-forth construction.

    Args:
        guided: Insert the guide check after every round

    Returns:
        Compiled StateGraph workflow
    """
    workflow = StateGraph(BackAndForthState)

    workflow.add_node("go_forth", go_forth)
    workflow.add_node("go_back", go_back)
    workflow.add_node("certify", certify)
    if guided:
        workflow.add_node("check_guide", check_guide)

    workflow.add_conditional_edges(START, should_continue, {
        True: "go_forth",
        False: "certify",
    })
    workflow.add_edge("go_forth", "go_back")
    last = "go_back"
    if guided:
        workflow.add_edge("go_back", "check_guide")
        last = "check_guide"
    workflow.add_conditional_edges(last, should_continue, {
        True: "go_forth",
        False: "certify",
    })
    workflow.add_edge("certify", END)

    return workflow.compile()


back_and_forth_graph = create_workflow()
guided_graph = create_workflow(guided=True)


def _check_handles(G: InfiniteGraphHandle, H: InfiniteGraphHandle) -> None:
    if G.dimension != H.dimension:
        raise MalformedRequest(f"Graphs have dimensions {G.dimension} and {H.dimension}")
    if G.metric != Metric.LINF or H.metric != Metric.LINF:
        raise MalformedRequest("Back-and-forth needs the L-infinity metric on both sides")


def run_workflow(
    G: InfiniteGraphHandle,
    H: InfiniteGraphHandle,
    steps: int,
    budget: int,
    guide: Optional[Guide] = None,
    initial: Optional[PartialIsomorphism] = None,
) -> BackAndForthState:
    """
    Run `steps` rounds of back-and-forth and certify the result.

    Args:
        G: Source graph handle
        H: Target graph handle
        steps: Number of forth/back rounds
        budget: Candidate cap per extension step
        guide: Step-isometry proposing images, for a guided run
        initial: Map to start from instead of the base pair

    Returns:
        Final BackAndForthState with the map, the transcript and the certificate

    Raises:
        BudgetExhausted: A step found no image; the context holds the transcript so far
        InvariantViolation: The map broke a property the construction keeps
        GuideViolation: A guided run could not keep the guided conditions
    """
    _check_handles(G, H)
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    partial = initial if initial is not None else PartialIsomorphism.base(G, H)
    transcript = [base_record(partial)]
    initial_state = {
        "G": G,
        "H": H,
        "guide": guide,
        "partial": partial,
        "rounds": steps,
        "round": 0,
        "budget": budget,
        "source_cursor": 0,
        "target_cursor": 0,
        "guide_checked": 0,
        "transcript": transcript,
        "certificate": None,
    }
    graph = guided_graph if guide is not None else back_and_forth_graph
    final = initial_state
    try:
        for final in graph.stream(initial_state, config={"recursion_limit": 3 * steps + 10}, stream_mode="values"):
            pass
    except (BudgetExhausted, InvariantViolation) as e:
        e.context.setdefault("transcript", final["transcript"])
        raise
    logger.info("Back-and-forth finished: %d rounds, map of size %d", final["round"], len(final["partial"]))
    return final


def run_back_and_forth(G: InfiniteGraphHandle, H: InfiniteGraphHandle, steps: int, budget: int) -> PartialIsomorphism:
    """Alternate forth and back steps along both enumerations."""
    return run_workflow(G, H, steps, budget)["partial"]


def check_guide_anchor(G: InfiniteGraphHandle, H: InfiniteGraphHandle, F: Guide) -> None:
    """Raise MalformedRequest unless F sends the first source vertex to the first target vertex."""
    anchor, image_anchor = PartialIsomorphism.base(G, H).anchors
    if make_point(F.on_point(anchor)) != image_anchor:
        raise MalformedRequest(f"Guide sends {format_point(anchor)} to {format_point(make_point(F.on_point(anchor)))}, not {format_point(image_anchor)}")


def run_guided(G: InfiniteGraphHandle, H: InfiniteGraphHandle, F: Guide, steps: int, budget: int) -> PartialIsomorphism:
    """
    Back-and-forth whose every step keeps the map on terms with F.

    Each new vertex first tries its image under F, then the nearby vertices of
    the box allowed by the guided conditions. When f differs from F somewhere,
    the run eventually stops with GuideViolation, or with BudgetExhausted
    when no nearby vertex is correctly joined.
    """
    check_guide_anchor(G, H, F)
    return run_workflow(G, H, steps, budget, guide=F)["partial"]


def run_componentwise(
    G: InfiniteGraphHandle,
    H: InfiniteGraphHandle,
    guides: Sequence[Guide],
    steps: int,
    budget: int,
) -> PartialIsomorphism:
    """Guided run whose guide is the product of one-dimensional guides, one per coordinate."""
    if len(guides) != G.dimension:
        raise MalformedRequest(f"Need {G.dimension} guides, got {len(guides)}")
    return run_guided(G, H, ProductGuide(tuple(guides)), steps, budget)


def extend_automorphism(
    G: InfiniteGraphHandle,
    seed_map: FiniteMap,
    steps: int,
    budget: int,
    anchor_pair: Optional[tuple] = None,
) -> PartialIsomorphism:
    """
    Extend a finite partial automorphism of G by back-and-forth.

    The seed must be a step-isometry at level (delta, delta) satisfying the
    engine's order conditions against its anchor pair (its first pair unless
    given), and an isomorphism of the induced subgraphs.
    """
    delta = G.delta
    if len(seed_map) == 0:
        raise MalformedRequest("The seed map is empty")
    pairs = list(seed_map.pairs)
    if anchor_pair is not None:
        anchor = (make_point(anchor_pair[0]), make_point(anchor_pair[1]))
        if anchor not in pairs:
            raise MalformedRequest("The anchor pair is not a pair of the seed map")
        pairs.remove(anchor)
        pairs.insert(0, anchor)
    if not all(G.universe.contains(u) and G.universe.contains(fu) for u, fu in pairs):
        raise MalformedRequest("The seed map leaves the universe")
    if not is_step_isometry(seed_map, delta, delta):
        raise MalformedRequest("The seed map is not a step-isometry")
    problems = lemma_violations(FiniteMap(tuple(pairs)), delta, delta, pairs[0])
    if problems:
        raise MalformedRequest(f"The seed map breaks the order conditions: {problems[0]}")
    for i, (u, fu) in enumerate(pairs):
        for v, fv in pairs[i + 1:]:
            if adjacent(G.oracle, u, v) != adjacent(G.oracle, fu, fv):
                raise MalformedRequest(f"The seed map is not an isomorphism on {format_point(u)}, {format_point(v)}")
    initial = PartialIsomorphism(
        sources=tuple(u for u, _ in pairs),
        targets=tuple(fu for _, fu in pairs),
        delta=delta,
        gamma=delta,
    )
    return run_workflow(G, G, steps, budget, initial=initial)["partial"]
