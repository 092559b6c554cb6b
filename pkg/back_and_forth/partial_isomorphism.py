from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Protocol

from errors import MalformedRequest
from exact_geometry import Metric, Point, format_point, format_rational, make_point, parse_rational
from lazy_graph import AdjacencyOracle, UniverseEnumerator, enumerate_point
from step_isometry import FiniteMap


@dataclass(frozen=True)
class InfiniteGraphHandle:
    """A lazily realized geometric graph: an oracle together with its vertex universe."""

    oracle: AdjacencyOracle
    universe: UniverseEnumerator
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "delta", parse_rational(self.delta))
        if self.oracle.delta != self.delta:
            raise MalformedRequest(f"Oracle threshold {self.oracle.delta} differs from handle delta {self.delta}")
        if self.oracle.universe != self.universe:
            raise MalformedRequest("Oracle universe differs from handle universe")

    @classmethod
    def from_oracle(cls, oracle: AdjacencyOracle) -> "InfiniteGraphHandle":
        if oracle.universe is None:
            raise MalformedRequest("A graph handle needs an oracle with a universe")
        return cls(oracle=oracle, universe=oracle.universe, delta=oracle.delta)

    @property
    def metric(self) -> Metric:
        return self.oracle.metric

    @property
    def dimension(self) -> int:
        return self.universe.dimension

    def to_json(self) -> dict:
        return {**self.oracle.provenance(), "universe": self.universe.to_json()}


@dataclass(frozen=True)
class PartialIsomorphism:
    """
    Finite isomorphism f_i between induced subgraphs G[V_i] and H[W_i].

    sources[k] is mapped to targets[k]; the first pair is the anchor pair.
    """

    sources: tuple[Point, ...]
    targets: tuple[Point, ...]
    delta: Fraction
    gamma: Fraction

    def __post_init__(self):
        object.__setattr__(self, "sources", tuple(make_point(p) for p in self.sources))
        object.__setattr__(self, "targets", tuple(make_point(p) for p in self.targets))
        object.__setattr__(self, "delta", parse_rational(self.delta))
        object.__setattr__(self, "gamma", parse_rational(self.gamma))
        if len(self.sources) != len(self.targets):
            raise MalformedRequest("sources and targets must have the same length")
        if len(set(self.sources)) != len(self.sources) or len(set(self.targets)) != len(self.targets):
            raise MalformedRequest("A partial isomorphism must be injective")

    @classmethod
    def base(cls, G: InfiniteGraphHandle, H: InfiniteGraphHandle) -> "PartialIsomorphism":
        """f_0: the first point of G's enumeration mapped to the first point of H's."""
        return cls(
            sources=(enumerate_point(G.universe, 0),),
            targets=(enumerate_point(H.universe, 0),),
            delta=G.delta,
            gamma=H.delta,
        )

    @classmethod
    def from_map(cls, f: FiniteMap, delta, gamma) -> "PartialIsomorphism":
        return cls(sources=tuple(f.sources), targets=tuple(f.targets), delta=delta, gamma=gamma)

    @cached_property
    def _forward(self) -> dict[Point, Point]:
        return dict(zip(self.sources, self.targets))

    @cached_property
    def _backward(self) -> dict[Point, Point]:
        return dict(zip(self.targets, self.sources))

    @property
    def anchors(self) -> tuple[Point, Point]:
        if not self.sources:
            raise MalformedRequest("An empty map has no anchors")
        return self.sources[0], self.targets[0]

    def __len__(self) -> int:
        return len(self.sources)

    def maps_source(self, v: Point) -> bool:
        return make_point(v) in self._forward

    def maps_target(self, w: Point) -> bool:
        return make_point(w) in self._backward

    def image(self, v: Point) -> Point:
        return self._forward[make_point(v)]

    def preimage(self, w: Point) -> Point:
        return self._backward[make_point(w)]

    def pairs(self, forth: bool = True) -> list[tuple[Point, Point]]:
        """(source, target) pairs, or (target, source) pairs for the back direction."""
        if forth:
            return list(zip(self.sources, self.targets))
        return list(zip(self.targets, self.sources))

    def extended(self, v: Point, w: Point) -> "PartialIsomorphism":
        return PartialIsomorphism(
            sources=self.sources + (make_point(v),),
            targets=self.targets + (make_point(w),),
            delta=self.delta,
            gamma=self.gamma,
        )

    def as_map(self) -> FiniteMap:
        return FiniteMap(tuple(zip(self.sources, self.targets)))

    def to_json(self) -> dict:
        return self.as_map().to_json(self.delta, self.gamma)


@dataclass(frozen=True)
class ExtensionStep:
    """
    Record of one forth or back step.

    lower/upper are the bounds a_j, b_j on the image representative. A fixed
    coordinate has lower == upper and an interval with lo == hi.
    """

    direction: str
    point: Point
    image: Point
    lower: tuple[Fraction, ...]
    upper: tuple[Fraction, ...]
    interval: tuple[tuple[Fraction, Fraction], ...]
    chosen_x: Point
    trials_used: int
    search: str
    guide_admissible: Optional[bool] = None
    fixed: tuple[int, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        record = {
            "direction": self.direction,
            "point": format_point(self.point),
            "image": format_point(self.image),
            "lower": [format_rational(a) for a in self.lower],
            "upper": [format_rational(b) for b in self.upper],
            "interval": [[format_rational(lo), format_rational(hi)] for lo, hi in self.interval],
            "chosen_x": format_point(self.chosen_x),
            "trials_used": self.trials_used,
            "search": self.search,
            "fixed": list(self.fixed),
        }
        if self.guide_admissible is not None:
            record["guide_admissible"] = self.guide_admissible
        return record


class Guide(Protocol):
    """A bijective step-isometry F between the two vertex sets, evaluable both ways."""

    def on_point(self, point: Point) -> Point: ...

    def inverse_on_point(self, point: Point) -> Point: ...


class IdentityGuide:
    def on_point(self, point: Point) -> Point:
        return make_point(point)

    def inverse_on_point(self, point: Point) -> Point:
        return make_point(point)


@dataclass(frozen=True)
class ProductGuide:
    """Coordinate-wise product of one-dimensional guides."""

    components: tuple

    def on_point(self, point: Point) -> Point:
        if len(point) != len(self.components):
            raise MalformedRequest(f"Product guide has {len(self.components)} components, point has {len(point)}")
        return tuple(g.on_point((x,))[0] for g, x in zip(self.components, point))

    def inverse_on_point(self, point: Point) -> Point:
        if len(point) != len(self.components):
            raise MalformedRequest(f"Product guide has {len(self.components)} components, point has {len(point)}")
        return tuple(g.inverse_on_point((y,))[0] for g, y in zip(self.components, point))
