"""
Quotient/representative decompositions and step-isometries.

A value v decomposes against an anchor v0 and an offset delta as
v = v0 + q*delta + r with 0 <= r < delta. A map f is a step-isometry at level
(delta, gamma) when floor(d(u,v)/delta) = floor(d(f(u),f(v))/gamma) on every
pair. The image decomposition is anchored at the image of the source anchor.

In one dimension, f is a step-isometry when q is preserved and the
representatives keep their order (r(u) <= r(v) iff r(f(u)) <= r(f(v))). The
back-and-forth engine keeps exactly these conditions. Their converse fails
on some finite maps, for instance reflections and maps splitting a tie
between representatives (0 -> 0, 1 -> 3/2 at level (1, 1)). The tie-broken
form orders values by the key (r, q) and asks f to keep that order both
ways. It is still sufficient, and it accepts a split tie when the larger
representative goes with the larger quotient.
"""

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

from errors import BoundaryIndecision, DimensionMismatch, MalformedRequest
from exact_geometry import (
    Metric,
    Point,
    check_same_dimension,
    floor_distance_ratio,
    floor_div,
    format_point,
    format_rational,
    make_point,
    parse_rational,
)


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Representation:
    anchor: Fraction
    offset: Fraction
    q: int
    r: Fraction

    def __post_init__(self):
        if not 0 <= self.r < self.offset:
            raise ValueError(f"Representative {self.r} outside [0, {self.offset})")

    @property
    def value(self) -> Fraction:
        return self.anchor + self.q * self.offset + self.r

    @property
    def key(self) -> tuple[Fraction, int]:
        return (self.r, self.q)


@dataclass(frozen=True)
class CoordinateDecomposition:
    anchors: Point
    offset: Fraction
    coords: tuple[Representation, ...]


def decompose(value: Fraction, anchor: Fraction, offset: Fraction) -> Representation:
    """
    Split value into anchor + q*offset + r.

    Args:
        value: Rational to decompose
        anchor: Anchor v0
        offset: Positive offset

    Returns:
        Representation with q = floor((value - anchor)/offset)
    """
    value, anchor, offset = Fraction(value), Fraction(anchor), Fraction(offset)
    q = floor_div(value - anchor, offset)
    return Representation(anchor=anchor, offset=offset, q=q, r=value - anchor - q * offset)


def decompose_point(point: Point, anchors: Point, offset: Fraction) -> CoordinateDecomposition:
    check_same_dimension(point, anchors)
    return CoordinateDecomposition(
        anchors=anchors,
        offset=Fraction(offset),
        coords=tuple(decompose(v, a, offset) for v, a in zip(point, anchors)),
    )


@dataclass(frozen=True)
class FiniteMap:
    """A bijection between finite point sets, stored as (source, target) pairs."""

    pairs: tuple[tuple[Point, Point], ...]

    def __post_init__(self):
        pairs = tuple((make_point(s), make_point(t)) for s, t in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        sources = [s for s, _ in pairs]
        targets = [t for _, t in pairs]
        if len(set(sources)) != len(sources):
            raise MalformedRequest("FiniteMap sources must be pairwise distinct")
        if len(set(targets)) != len(targets):
            raise MalformedRequest("FiniteMap targets must be pairwise distinct")
        if pairs:
            check_same_dimension(*sources, *targets)

    @classmethod
    def from_function(cls, function: Callable[[Point], Point], points: Iterable[Point]) -> "FiniteMap":
        return cls(tuple((p, function(p)) for p in points))

    @property
    def sources(self) -> list[Point]:
        return [s for s, _ in self.pairs]

    @property
    def targets(self) -> list[Point]:
        return [t for _, t in self.pairs]

    @property
    def dimension(self) -> int:
        return len(self.pairs[0][0]) if self.pairs else 0

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, point: Point) -> bool:
        return point in dict(self.pairs)

    def image(self, point: Point) -> Point:
        mapping = dict(self.pairs)
        if point not in mapping:
            raise MalformedRequest(f"{point} is not in the domain")
        return mapping[point]

    def inverse(self) -> "FiniteMap":
        return FiniteMap(tuple((t, s) for s, t in self.pairs))

    def compose(self, after: "FiniteMap") -> "FiniteMap":
        """The map s -> after(self(s))."""
        return FiniteMap(tuple((s, after.image(t)) for s, t in self.pairs))

    def to_json(self, delta: Fraction, gamma: Fraction) -> dict:
        return {
            "pairs": [[format_point(s), format_point(t)] for s, t in self.pairs],
            "delta": format_rational(delta),
            "gamma": format_rational(gamma),
        }

    @classmethod
    def from_json(cls, data: dict) -> tuple["FiniteMap", Fraction, Fraction]:
        pairs = tuple((make_point(s), make_point(t)) for s, t in data["pairs"])
        return cls(pairs), parse_rational(data["delta"]), parse_rational(data["gamma"])

    def dumps(self, delta: Fraction, gamma: Fraction) -> str:
        return json.dumps(self.to_json(delta, gamma), sort_keys=True)


def step_violations(f: FiniteMap, delta: Fraction, gamma: Fraction, metric: Metric = Metric.LINF) -> list[tuple[Point, Point]]:
    """Source pairs on which floor(d/delta) differs from floor(d'/gamma)."""
    delta, gamma = parse_rational(delta), parse_rational(gamma)
    failing = []
    for (u, fu), (v, fv) in combinations(f.pairs, 2):
        if floor_distance_ratio(u, v, delta, metric) != floor_distance_ratio(fu, fv, gamma, metric):
            failing.append((u, v))
    return failing


def is_step_isometry(f: FiniteMap, delta: Fraction, gamma: Fraction, metric: Metric = Metric.LINF) -> bool:
    """
    Decide whether f is a step-isometry at level (delta, gamma) on its domain.

    Raises:
        BoundaryIndecision: an L2 floor could not be decided
    """
    try:
        return not step_violations(f, delta, gamma, metric)
    except BoundaryIndecision:
        logger.warning("L2 floor undecided while checking a map of size %d", len(f))
        raise


def _anchors(f: FiniteMap, anchor_pair: tuple[Point, Point]) -> tuple[Point, Point]:
    v0, w0 = make_point(anchor_pair[0]), make_point(anchor_pair[1])
    if v0 not in f:
        raise MalformedRequest(f"Anchor {v0} is not in the domain")
    if f.image(v0) != w0:
        raise MalformedRequest(f"Anchor image {w0} differs from f({v0}) = {f.image(v0)}")
    return v0, w0


def _compare(a, b) -> int:
    return (a > b) - (a < b)


def coordinate_violations(
    pairs: Sequence[tuple[Fraction, Fraction]],
    anchor: Fraction,
    image_anchor: Fraction,
    delta: Fraction,
    gamma: Fraction,
    break_ties: bool = False,
) -> list[str]:
    """
    Violations of the quotient/representative conditions on scalar pairs (u, f(u)).

    With break_ties=False the conditions are: q(u) = q(f(u)), and r(u) <= r(v)
    iff r(f(u)) <= r(f(v)). With break_ties=True the second becomes: f keeps
    the order of the keys (r, q) both ways, equal keys included.
    """
    source = [decompose(u, anchor, delta) for u, _ in pairs]
    target = [decompose(w, image_anchor, gamma) for _, w in pairs]
    problems = []
    for s, t in zip(source, target):
        if s.q != t.q:
            problems.append(f"quotient of {format_rational(s.value)} is {s.q}, image quotient is {t.q}")
    for i, j in combinations(range(len(pairs)), 2):
        si, sj, ti, tj = source[i], source[j], target[i], target[j]
        if break_ties:
            if _compare(si.key, sj.key) != _compare(ti.key, tj.key):
                problems.append(
                    f"key order of {format_rational(si.value)}, {format_rational(sj.value)} is not preserved"
                )
        else:
            if (si.r <= sj.r) != (ti.r <= tj.r) or (sj.r <= si.r) != (tj.r <= ti.r):
                problems.append(
                    f"representative order of {format_rational(si.value)}, {format_rational(sj.value)} is not preserved"
                )
    return problems


def lemma_violations(
    f: FiniteMap,
    delta: Fraction,
    gamma: Fraction,
    anchor_pair: tuple[Point, Point],
    break_ties: bool = False,
) -> list[str]:
    """Per-coordinate condition violations of f against the anchors (v0, f(v0))."""
    delta, gamma = parse_rational(delta), parse_rational(gamma)
    v0, w0 = _anchors(f, anchor_pair)
    problems = []
    for j in range(f.dimension):
        scalar_pairs = [(s[j], t[j]) for s, t in f.pairs]
        for problem in coordinate_violations(scalar_pairs, v0[j], w0[j], delta, gamma, break_ties):
            problems.append(f"coordinate {j}: {problem}" if f.dimension > 1 else problem)
    return problems


def check_lemma_conditions(
    f: FiniteMap,
    delta: Fraction,
    gamma: Fraction,
    anchor_pair: tuple[Point, Point],
    break_ties: bool = False,
) -> bool:
    """
    Check the one-dimensional quotient/representative conditions.

    Args:
        f: Map on 1-dimensional points
        delta: Source offset
        gamma: Target offset
        anchor_pair: (v0, f(v0)) with v0 in the domain
        break_ties: Use the tie-broken order on keys (r, q)

    Returns:
        bool: True iff both conditions hold
    """
    if f.dimension not in (0, 1):
        raise DimensionMismatch("check_lemma_conditions works on 1-dimensional maps")
    return not lemma_violations(f, delta, gamma, anchor_pair, break_ties)


def check_lemma_conditions_nd(
    f: FiniteMap,
    delta: Fraction,
    gamma: Fraction,
    anchor_pair: tuple[Point, Point],
    break_ties: bool = False,
) -> bool:
    """Coordinate-wise conditions; sufficient (not necessary) for an L-infinity step-isometry."""
    v0, w0 = make_point(anchor_pair[0]), make_point(anchor_pair[1])
    if f.pairs:
        check_same_dimension(f.pairs[0][0], v0, w0)
    return not lemma_violations(f, delta, gamma, (v0, w0), break_ties)


def check_guide_conditions(
    f: FiniteMap,
    F: Callable[[Point], Point],
    delta: Fraction,
    gamma: Fraction,
    anchor_pair: tuple[Point, Point],
) -> list[str]:
    """
    Literal invariants of a construction guided by a step-isometry F, per coordinate.

    (1) r(u) <= r(v) iff r(f(u)) <= r(f(v)); (2) r(u) <= r(v) iff
    r(f(u)) <= r(F(v)), over ordered pairs including u = v; (3) q(u) = q(f(u)).
    Representations of images are anchored at w0 = f(v0), which must equal F(v0).

    Returns:
        list: One message per violation, empty when all three hold
    """
    delta, gamma = parse_rational(delta), parse_rational(gamma)
    v0, w0 = _anchors(f, anchor_pair)
    problems = []
    if make_point(F(v0)) != w0:
        problems.append(f"guide sends the anchor to {format_point(make_point(F(v0)))}, not {format_point(w0)}")
    guided = {s: make_point(F(s)) for s in f.sources}
    for j in range(f.dimension):
        prefix = f"coordinate {j}: " if f.dimension > 1 else ""
        source = {s: decompose(s[j], v0[j], delta) for s in f.sources}
        image = {s: decompose(t[j], w0[j], gamma) for s, t in f.pairs}
        guide = {s: decompose(guided[s][j], w0[j], gamma) for s in f.sources}
        for s in f.sources:
            if source[s].q != image[s].q:
                problems.append(f"{prefix}(3) quotient of {format_rational(s[j])} is not preserved")
        for u in f.sources:
            for v in f.sources:
                before = source[u].r <= source[v].r
                if u != v and before != (image[u].r <= image[v].r):
                    problems.append(f"{prefix}(1) order of {format_rational(u[j])}, {format_rational(v[j])} is not preserved by f")
                if before != (image[u].r <= guide[v].r):
                    problems.append(f"{prefix}(2) order of {format_rational(u[j])}, {format_rational(v[j])} disagrees between f and the guide")
    return problems


def guide_pair_violations(
    mapped: Sequence[tuple[Point, Point, Point]],
    new: tuple[Point, Point, Point],
    delta: Fraction,
    gamma: Fraction,
    anchor_pair: tuple[Point, Point],
) -> list[str]:
    """
    The guided conditions of check_guide_conditions restricted to ordered pairs that involve new.

    Entries are (u, f(u), F(u)). Checking each added pair this way keeps all
    three conditions on the whole map when they held before the addition.
    """
    v0, w0 = anchor_pair
    s, t, g = new
    problems = []
    for j in range(len(s)):
        prefix = f"coordinate {j}: " if len(s) > 1 else ""
        rs = decompose(s[j], v0[j], delta)
        rt, rg = decompose(t[j], w0[j], gamma), decompose(g[j], w0[j], gamma)
        if rs.q != rt.q:
            problems.append(f"{prefix}(3) quotient of {format_rational(s[j])} is not preserved")
        if rt.r > rg.r:
            problems.append(f"{prefix}(2) order of {format_rational(s[j])}, {format_rational(s[j])} disagrees between f and the guide")
        for u, fu, gu in mapped:
            ru = decompose(u[j], v0[j], delta).r
            rfu, rgu = decompose(fu[j], w0[j], gamma).r, decompose(gu[j], w0[j], gamma).r
            pair = f"{format_rational(u[j])}, {format_rational(s[j])}"
            if (ru <= rs.r) != (rfu <= rt.r) or (rs.r <= ru) != (rt.r <= rfu):
                problems.append(f"{prefix}(1) order of {pair} is not preserved by f")
            if (ru <= rs.r) != (rfu <= rg.r) or (rs.r <= ru) != (rt.r <= rgu):
                problems.append(f"{prefix}(2) order of {pair} disagrees between f and the guide")
    return problems


@dataclass(frozen=True)
class IntervalStepIsometry:
    """
    Piecewise-linear step-isometry from [a, b) onto [a2, b2).

    Quotients against a (offset delta) and a2 (offset gamma) are kept. With
    split the length of the last block of [a, b), in (0, delta], the
    representative r goes to image_split*r/split when r <= split, and to
    image_split + (gamma - image_split)*(r - split)/(delta - split) otherwise.
    Both pieces are increasing and meet at split.
    """

    a: Fraction
    b: Fraction
    a2: Fraction
    b2: Fraction
    delta: Fraction
    gamma: Fraction

    @property
    def blocks(self) -> int:
        return -floor_div(self.a - self.b, self.delta)

    @property
    def split(self) -> Fraction:
        return self.b - self.a - (self.blocks - 1) * self.delta

    @property
    def image_split(self) -> Fraction:
        return self.b2 - self.a2 - (self.blocks - 1) * self.gamma

    def _representative(self, r: Fraction) -> Fraction:
        rb, rb2 = self.split, self.image_split
        if r <= rb:
            return rb2 * r / rb
        return rb2 + (self.gamma - rb2) * (r - rb) / (self.delta - rb)

    def _inverse_representative(self, r2: Fraction) -> Fraction:
        rb, rb2 = self.split, self.image_split
        if r2 <= rb2:
            return rb * r2 / rb2
        return rb + (self.delta - rb) * (r2 - rb2) / (self.gamma - rb2)

    def __call__(self, x) -> Fraction:
        x = parse_rational(x[0] if isinstance(x, tuple) else x)
        if not self.a <= x < self.b:
            raise ValueError(f"{x} lies outside [{self.a}, {self.b})")
        rep = decompose(x, self.a, self.delta)
        return self.a2 + rep.q * self.gamma + self._representative(rep.r)

    def inverse(self, y) -> Fraction:
        y = parse_rational(y[0] if isinstance(y, tuple) else y)
        if not self.a2 <= y < self.b2:
            raise ValueError(f"{y} lies outside [{self.a2}, {self.b2})")
        rep = decompose(y, self.a2, self.gamma)
        return self.a + rep.q * self.delta + self._inverse_representative(rep.r)

    def on_point(self, point: Point) -> Point:
        return (self(point[0]),)

    def inverse_on_point(self, point: Point) -> Point:
        return (self.inverse(point[0]),)


def interval_step_isometry(a, b, a2, b2, delta, gamma) -> IntervalStepIsometry:
    """
    Build the explicit step-isometry between [a, b) and [a2, b2).

    The two intervals must meet equally many blocks:
    ceil((b - a)/delta) = ceil((b2 - a2)/gamma). When there is more than one
    block, the last blocks must be both full or both partial, otherwise no
    bijection keeps quotients and floors.
    """
    a, b, a2, b2 = (parse_rational(v) for v in (a, b, a2, b2))
    delta, gamma = parse_rational(delta), parse_rational(gamma)
    if delta <= 0 or gamma <= 0:
        raise MalformedRequest("Offsets must be positive")
    if a >= b or a2 >= b2:
        raise MalformedRequest("Intervals must be non-empty")
    blocks, image_blocks = -floor_div(a - b, delta), -floor_div(a2 - b2, gamma)
    if blocks != image_blocks:
        raise MalformedRequest(f"[a, b) meets {blocks} blocks of length delta, [a2, b2) meets {image_blocks} of length gamma")
    F = IntervalStepIsometry(a, b, a2, b2, delta, gamma)
    if blocks > 1 and (F.split == delta) != (F.image_split == gamma):
        raise MalformedRequest("One interval ends on a block boundary and the other does not")
    return F
