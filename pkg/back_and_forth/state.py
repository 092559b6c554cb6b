import operator
from typing import Annotated, Optional, TypedDict

from back_and_forth.partial_isomorphism import Guide, InfiniteGraphHandle, PartialIsomorphism


class BackAndForthState(TypedDict):
    """State for the back-and-forth workflow."""
    G: InfiniteGraphHandle
    H: InfiniteGraphHandle
    guide: Optional[Guide]
    partial: PartialIsomorphism
    rounds: int
    round: int
    budget: int
    source_cursor: int
    target_cursor: int
    guide_checked: int
    transcript: Annotated[list[dict], operator.add]
    certificate: Optional[dict]
