import operator
from fractions import Fraction
from typing import Annotated, Optional, TypedDict

from exact_geometry import Metric
from lazy_graph import GraphSnapshot, UniverseEnumerator


class PairRecord(TypedDict):
    """One processed pair (A, x) of the construction log."""
    t: int
    x: int
    A: list[int]
    chosen_z: int
    trials_used: int


class ConstructionState(TypedDict):
    """State for the deterministic geometric graph construction."""
    t: int
    t_max: int
    universe: UniverseEnumerator
    delta: Fraction
    metric: Metric
    sigma: list[int]
    pair_scope: str
    budget: int
    max_pairs: int
    vertices: list[int]
    edges: list[tuple[int, int]]
    processed_pairs: Annotated[list[PairRecord], operator.add]
    chosen_witnesses: list[int]
    stage_sizes: list[int]
    snapshot: Optional[GraphSnapshot]
