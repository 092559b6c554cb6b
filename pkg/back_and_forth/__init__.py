from .partial_isomorphism import (
    InfiniteGraphHandle,
    PartialIsomorphism,
    ExtensionStep,
    Guide,
    IdentityGuide,
    ProductGuide,
)
from .extension import extend, extend_forth, extend_back, region_points
from .certificate import verify_partial, write_certificate, write_transcript, read_transcript, replay_transcript
from .workflow import (
    back_and_forth_graph,
    guided_graph,
    run_workflow,
    run_back_and_forth,
    check_guide_anchor,
    run_guided,
    run_componentwise,
    extend_automorphism,
)


__all__ = [
    "InfiniteGraphHandle",
    "PartialIsomorphism",
    "ExtensionStep",
    "Guide",
    "IdentityGuide",
    "ProductGuide",
    "extend",
    "extend_forth",
    "extend_back",
    "region_points",
    "verify_partial",
    "write_certificate",
    "write_transcript",
    "read_transcript",
    "replay_transcript",
    "back_and_forth_graph",
    "guided_graph",
    "run_workflow",
    "run_back_and_forth",
    "check_guide_anchor",
    "run_guided",
    "run_componentwise",
    "extend_automorphism",
]
