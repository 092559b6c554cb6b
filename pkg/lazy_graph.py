"""
Lazily realized random geometric graphs over dense rational universes.

A universe is a computable bijection from the naturals onto a dense set of
rational points, either all of Q^n or a half-open box. An adjacency oracle
fixes one outcome of the local area random graph on that universe: a pair at
distance below delta is an edge iff a keyed hash of the pair falls below p.
Nothing is stored, so the back-and-forth engine can ask about points it
discovers adaptively.

Coordinate enumeration, one axis:
- all of Q: level h holds the reduced n/d with max(|n|, d) = h. Level 1 is
  {0, 1, -1}. Inside a level values are ordered by (d, |n|, sign), so index 0
  is 0/1.
- box [lo, hi): lo + (hi - lo) * t with t in [0, 1) in Farey order. The level
  of t is its denominator and level 1 is {0}, so index 0 is lo.

A point's level is the largest level among its coordinates. Points are
enumerated level by level and, inside a level, lexicographically by the
per-axis indices.

A lattice universe replaces the grid by rank-1 lattices with prime moduli
inside a box, so that no two points share a coordinate, or even a
representative modulo the graph threshold.
"""

import bisect
import hashlib
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, product
from math import ceil, gcd, isqrt, prod
from typing import Iterator, Sequence

import networkx as nx

from errors import DimensionMismatch, MalformedRequest
from exact_geometry import (
    Metric,
    Point,
    check_same_dimension,
    format_point,
    format_rational,
    make_point,
    parse_rational,
    within,
)


logger = logging.getLogger(__name__)

# Hash verdicts are read as uniform integers in [0, 2**64)
HASH_BITS = 64

_TOTIENTS: list[int] = [0, 1]
_CUMULATIVE: dict[bool, list[int]] = {True: [0], False: [0]}


def _extend_totients(limit: int) -> None:
    phi = list(range(limit))
    for i in range(2, limit):
        if phi[i] == i:
            for j in range(i, limit, i):
                phi[j] -= phi[j] // i
    _TOTIENTS[:] = phi


def totient(n: int) -> int:
    if n >= len(_TOTIENTS):
        _extend_totients(max(n + 1, 2 * len(_TOTIENTS)))
    return _TOTIENTS[n]


@lru_cache(maxsize=4096)
def prime_factors(n: int) -> tuple[int, ...]:
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return tuple(factors)


def count_coprime_below(n: int, modulus: int) -> int:
    """Number of m with 1 <= m < n and gcd(m, modulus) = 1 (inclusion-exclusion)."""
    if n <= 1:
        return 0
    primes = prime_factors(modulus)
    total = 0
    for size in range(len(primes) + 1):
        sign = -1 if size % 2 else 1
        for subset in combinations(primes, size):
            total += sign * ((n - 1) // prod(subset))
    return total


def _kth_coprime(k: int, modulus: int) -> int:
    """The k-th (0-based) m >= 1 with gcd(m, modulus) = 1."""
    lo, hi = 1, modulus
    while lo < hi:
        mid = (lo + hi) // 2
        if count_coprime_below(mid + 1, modulus) >= k + 1:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _level_size(bounded: bool, level: int) -> int:
    if level == 1:
        return 1 if bounded else 3
    phi = totient(level)
    return phi if bounded else 4 * phi


def cumulative_count(bounded: bool, level: int) -> int:
    """Number of axis values whose level is at most `level`."""
    table = _CUMULATIVE[bounded]
    while len(table) <= level:
        table.append(table[-1] + _level_size(bounded, len(table)))
    return table[level]


def _axis_level_for_index(bounded: bool, index: int) -> int:
    table = _CUMULATIVE[bounded]
    while table[-1] <= index:
        cumulative_count(bounded, 2 * len(table))
    return bisect.bisect_right(table, index)


@dataclass(frozen=True)
class Axis:
    """One coordinate's enumeration: a box side [lower, upper) or the whole line."""

    lower: Fraction | None = None
    upper: Fraction | None = None

    @property
    def bounded(self) -> bool:
        return self.lower is not None

    def value(self, index: int) -> Fraction:
        level = _axis_level_for_index(self.bounded, index)
        k = index - cumulative_count(self.bounded, level - 1)
        if self.bounded:
            t = Fraction(0) if level == 1 else Fraction(_kth_coprime(k, level), level)
            return self.lower + (self.upper - self.lower) * t
        if level == 1:
            return Fraction((0, 1, -1)[k])
        phi = totient(level)
        sign = -1 if k % 2 else 1
        if k < 2 * phi:
            return sign * Fraction(level, _kth_coprime(k // 2, level))
        return sign * Fraction(_kth_coprime((k - 2 * phi) // 2, level), level)

    def level(self, value: Fraction) -> int:
        if self.bounded:
            return self._box_parameter(value).denominator
        return max(abs(value.numerator), value.denominator)

    def index(self, value: Fraction) -> int:
        if self.bounded:
            t = self._box_parameter(value)
            level = t.denominator
            k = 0 if level == 1 else count_coprime_below(t.numerator, level)
            return cumulative_count(True, level - 1) + k
        n, d = value.numerator, value.denominator
        level = max(abs(n), d)
        base = cumulative_count(False, level - 1)
        if level == 1:
            return base + (0, 1, -1).index(n)
        negative = 1 if n < 0 else 0
        if d < level:
            return base + 2 * count_coprime_below(d, level) + negative
        return base + 2 * totient(level) + 2 * count_coprime_below(abs(n), level) + negative

    def members(self, level: int, a: Fraction, b: Fraction) -> list[tuple[int, Fraction]]:
        """Values of exactly this level inside [a, b), sorted by index."""
        if self.bounded:
            return self._box_members(level, a, b)
        return self._line_members(level, a, b)

    def _box_parameter(self, value: Fraction) -> Fraction:
        t = (Fraction(value) - self.lower) / (self.upper - self.lower)
        if not 0 <= t < 1:
            raise ValueError(f"{value} lies outside [{self.lower}, {self.upper})")
        return t

    def _box_members(self, level: int, a: Fraction, b: Fraction) -> list[tuple[int, Fraction]]:
        span = self.upper - self.lower
        t_a, t_b = (a - self.lower) / span, (b - self.lower) / span
        base = cumulative_count(True, level - 1)
        if level == 1:
            return [(base, self.lower)] if t_a <= 0 < t_b else []
        first, last = max(1, ceil(t_a * level)), min(level - 1, ceil(t_b * level) - 1)
        if first > last:
            return []
        rank = count_coprime_below(first, level)
        found = []
        for n in range(first, last + 1):
            if gcd(n, level) == 1:
                found.append((base + rank, self.lower + span * Fraction(n, level)))
                rank += 1
        return found

    def _line_members(self, level: int, a: Fraction, b: Fraction) -> list[tuple[int, Fraction]]:
        base = cumulative_count(False, level - 1)
        if level == 1:
            candidates = [(base + k, Fraction(v)) for k, v in enumerate((0, 1, -1))]
        else:
            candidates = []
            rank = 0
            for d in range(1, level):
                if gcd(d, level) == 1:
                    candidates.append((base + 2 * rank, Fraction(level, d)))
                    candidates.append((base + 2 * rank + 1, -Fraction(level, d)))
                    rank += 1
            offset = base + 2 * rank
            rank = 0
            for m in range(1, level):
                if gcd(m, level) == 1:
                    candidates.append((offset + 2 * rank, Fraction(m, level)))
                    candidates.append((offset + 2 * rank + 1, -Fraction(m, level)))
                    rank += 1
        return sorted((i, v) for i, v in candidates if a <= v < b)


def _tuple_rank(indices: Sequence[int], low: int, high: int) -> int:
    """Lexicographic rank of `indices` among tuples in [0, high)^n with a coordinate >= low."""
    n = len(indices)
    rank, has_high = 0, False
    for j, i in enumerate(indices):
        rest = n - j - 1
        if has_high:
            rank += i * high**rest
        else:
            rank += min(i, low) * (high**rest - low**rest) + max(0, i - low) * high**rest
        has_high = has_high or i >= low
    return rank


def _tuple_unrank(rank: int, n: int, low: int, high: int) -> tuple[int, ...]:
    indices, has_high = [], False
    for j in range(n):
        rest = n - j - 1
        full = high**rest
        if has_high:
            c, rank = divmod(rank, full)
        else:
            partial = full - low**rest
            if rank < low * partial:
                c, rank = divmod(rank, partial)
            else:
                rank -= low * partial
                c, rank = divmod(rank, full)
                c += low
        has_high = has_high or c >= low
        indices.append(c)
    return tuple(indices)


@dataclass(frozen=True)
class UniverseEnumerator:
    """
    A dense, enumerable universe of rational points.

    Args:
        dimension: Number of coordinates
        region: Per-coordinate half-open bounds [lo, hi), or None for all of Q^n
        removed: Raw enumeration indices deleted from the universe
    """

    dimension: int = 1
    region: tuple[tuple[Fraction, Fraction], ...] | None = None
    removed: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"Dimension must be positive, got {self.dimension}")
        if self.region is not None:
            region = tuple((parse_rational(lo), parse_rational(hi)) for lo, hi in self.region)
            if len(region) != self.dimension:
                raise DimensionMismatch(f"Region has {len(region)} sides for dimension {self.dimension}")
            if any(lo >= hi for lo, hi in region):
                raise ValueError(f"Empty region {region}")
            object.__setattr__(self, "region", region)
        removed = frozenset(int(i) for i in self.removed)
        if any(i < 0 for i in removed):
            raise ValueError("Removed indices must be non-negative")
        object.__setattr__(self, "removed", removed)

    @cached_property
    def axes(self) -> tuple[Axis, ...]:
        if self.region is None:
            return tuple(Axis() for _ in range(self.dimension))
        return tuple(Axis(lo, hi) for lo, hi in self.region)

    @property
    def bounded(self) -> bool:
        return self.region is not None

    @cached_property
    def _removed_sorted(self) -> list[int]:
        return sorted(self.removed)

    def to_raw(self, index: int) -> int:
        raw = index
        for r in self._removed_sorted:
            if r <= raw:
                raw += 1
        return raw

    def from_raw(self, raw: int) -> int:
        return raw - bisect.bisect_left(self._removed_sorted, raw)

    def raw_point(self, raw: int) -> Point:
        n = self.dimension
        level = self._point_level(raw)
        low = cumulative_count(self.bounded, level - 1)
        high = cumulative_count(self.bounded, level)
        indices = _tuple_unrank(raw - low**n, n, low, high)
        return tuple(axis.value(i) for axis, i in zip(self.axes, indices))

    def raw_index(self, point: Point) -> int:
        if len(point) != self.dimension:
            raise DimensionMismatch(f"Point {point} is not {self.dimension}-dimensional")
        indices = [axis.index(c) for axis, c in zip(self.axes, point)]
        level = max(_axis_level_for_index(self.bounded, i) for i in indices)
        low = cumulative_count(self.bounded, level - 1)
        high = cumulative_count(self.bounded, level)
        return low**self.dimension + _tuple_rank(indices, low, high)

    def _point_level(self, raw: int) -> int:
        n = self.dimension
        hi = 1
        while cumulative_count(self.bounded, hi) ** n <= raw:
            hi *= 2
        lo = 1
        while lo < hi:
            mid = (lo + hi) // 2
            if cumulative_count(self.bounded, mid) ** n > raw:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def contains(self, point: Point) -> bool:
        if len(point) != self.dimension:
            return False
        if self.region is not None and not all(lo <= c < hi for c, (lo, hi) in zip(point, self.region)):
            return False
        return self.raw_index(point) not in self.removed

    def to_json(self) -> dict:
        return {
            "kind": "grid",
            "dimension": self.dimension,
            "region": None if self.region is None else [[format_rational(lo), format_rational(hi)] for lo, hi in self.region],
            "removed": sorted(self.removed),
        }


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, isqrt(n) + 1))


def next_prime(n: int) -> int:
    candidate = n + 1
    while not is_prime(candidate):
        candidate += 1
    return candidate


def golden_multiplier(p: int) -> int:
    """Nearest integer to p*(sqrt(5) - 1)/2, kept in [1, p - 1]."""
    return min(max((isqrt(5 * p * p) - p + 1) // 2, 1), p - 1)


@dataclass(frozen=True)
class LatticeUniverse(UniverseEnumerator):
    """
    A box universe in general position: no two points share a representative.

    Level 1 is the lower corner. Level l >= 2 uses the (l-1)-th admissible
    prime p and the multiplier g = golden_multiplier(p), and holds the p - 1
    points with parameters t_j = (a * g**j mod p)/p, a = 1, ..., p - 1, in
    order of a. A prime is admissible unless it divides the numerator of some
    side length over the offset. Then coordinate j of two distinct points
    never differs by a whole number of offsets, and t_0 alone determines the
    point.

    Grid universes repeat representatives across many points, and a
    step-isometric map has to keep every such tie, which leaves little room
    for the back-and-forth search.
    """

    offset: Fraction = Fraction(1)

    def __post_init__(self):
        if self.region is None:
            raise ValueError("A lattice universe needs a bounded region")
        super().__post_init__()
        offset = parse_rational(self.offset)
        if offset <= 0:
            raise ValueError(f"offset must be positive, got {offset}")
        object.__setattr__(self, "offset", offset)

    @cached_property
    def _blocked(self) -> frozenset[int]:
        return frozenset(p for lo, hi in self.region for p in prime_factors(((hi - lo) / self.offset).numerator))

    @cached_property
    def _moduli(self) -> list[int]:
        return [1]

    @cached_property
    def _cumulative(self) -> list[int]:
        return [0, 1]

    def _extend(self) -> None:
        p = next_prime(self._moduli[-1])
        while p in self._blocked:
            p = next_prime(p)
        self._moduli.append(p)
        self._cumulative.append(self._cumulative[-1] + p - 1)

    def _modulus(self, level: int) -> int:
        while len(self._moduli) < level:
            self._extend()
        return self._moduli[level - 1]

    def _cumulative_count(self, level: int) -> int:
        self._modulus(level)
        return self._cumulative[level]

    def _admissible(self, n: int) -> bool:
        return is_prime(n) and n not in self._blocked

    def _level_of_modulus(self, n: int) -> int | None:
        if n == 1:
            return 1
        if not self._admissible(n):
            return None
        while self._moduli[-1] < n:
            self._extend()
        return bisect.bisect_left(self._moduli, n) + 1

    def _lattice_point(self, n: int, a: int) -> Point:
        g = golden_multiplier(n) if n > 1 else 0
        return tuple(
            lo + (hi - lo) * Fraction(a * pow(g, j, n) % n, n)
            for j, (lo, hi) in enumerate(self.region)
        )

    def raw_point(self, raw: int) -> Point:
        level = 1
        while self._cumulative_count(level) <= raw:
            level += 1
        if level == 1:
            return self._lattice_point(1, 0)
        return self._lattice_point(self._modulus(level), raw - self._cumulative_count(level - 1) + 1)

    def raw_index(self, point: Point) -> int:
        if len(point) != self.dimension:
            raise DimensionMismatch(f"Point {point} is not {self.dimension}-dimensional")
        lo, hi = self.region[0]
        t = (Fraction(point[0]) - lo) / (hi - lo)
        n = t.denominator
        if not 0 <= t < 1 or (n > 1 and not self._admissible(n)) or self._lattice_point(n, t.numerator) != tuple(point):
            raise ValueError(f"{format_point(tuple(point))} is not a lattice point")
        if n == 1:
            return 0
        return self._cumulative_count(self._level_of_modulus(n) - 1) + t.numerator - 1

    def contains(self, point: Point) -> bool:
        if len(point) != self.dimension:
            return False
        if not all(lo <= c < hi for c, (lo, hi) in zip(point, self.region)):
            return False
        try:
            return self.raw_index(point) not in self.removed
        except ValueError:
            return False

    def point_with_coordinate(self, j: int, value: Fraction) -> Point | None:
        """The unique lattice point whose j-th coordinate equals value, if any."""
        lo, hi = self.region[j]
        t = (Fraction(value) - lo) / (hi - lo)
        if not 0 <= t < 1:
            return None
        n = t.denominator
        if n == 1:
            point = self._lattice_point(1, 0)
        elif self._admissible(n):
            point = self._lattice_point(n, t.numerator * pow(golden_multiplier(n), -j, n) % n)
        else:
            return None
        return point if self.contains(point) else None

    def box_points(self, lo: Point, hi: Point) -> Iterator[tuple[int, Point]]:
        """Lattice points in [lo, hi) in index order; scans the first coordinate's window per level."""
        windows = [(max(a, r_lo), min(b, r_hi)) for a, b, (r_lo, r_hi) in zip(lo, hi, self.region)]
        if any(a >= b for a, b in windows):
            return
        r_lo, r_hi = self.region[0]
        t_a = (windows[0][0] - r_lo) / (r_hi - r_lo)
        t_b = (windows[0][1] - r_lo) / (r_hi - r_lo)
        corner = self._lattice_point(1, 0)
        if all(a <= c < b for c, (a, b) in zip(corner, windows)) and 0 not in self.removed:
            yield self.from_raw(0), corner
        level = 2
        while True:
            n = self._modulus(level)
            base = self._cumulative_count(level - 1)
            for a in range(max(1, ceil(t_a * n)), min(n - 1, ceil(t_b * n) - 1) + 1):
                raw = base + a - 1
                if raw in self.removed:
                    continue
                point = self._lattice_point(n, a)
                if all(lo_j <= c < hi_j for c, (lo_j, hi_j) in zip(point, windows)):
                    yield self.from_raw(raw), point
            level += 1

    def to_json(self) -> dict:
        return {**super().to_json(), "kind": "lattice", "offset": format_rational(self.offset)}


def enumerate_point(universe: UniverseEnumerator, index: int) -> Point:
    if index < 0:
        raise ValueError(f"Negative index {index}")
    return universe.raw_point(universe.to_raw(index))


def index_of(universe: UniverseEnumerator, point: Point) -> int:
    raw = universe.raw_index(point)
    if raw in universe.removed:
        raise ValueError(f"{point} was removed from the universe")
    return universe.from_raw(raw)


def points_in_box(universe: UniverseEnumerator, lo: Point, hi: Point) -> Iterator[tuple[int, Point]]:
    """
    Yield (index, point) for the universe points inside the box [lo, hi).

    Points come in increasing index order. The generator is infinite whenever
    the box meets the region, so callers bound it.
    """
    if len(lo) != universe.dimension or len(hi) != universe.dimension:
        raise DimensionMismatch(f"Box corners must be {universe.dimension}-dimensional")
    if isinstance(universe, LatticeUniverse):
        yield from universe.box_points(lo, hi)
        return
    windows = []
    for axis, a, b in zip(universe.axes, lo, hi):
        if axis.bounded:
            a, b = max(a, axis.lower), min(b, axis.upper)
        if a >= b:
            return
        windows.append((a, b))

    seen: list[list[tuple[int, Fraction]]] = [[] for _ in windows]
    n = universe.dimension
    level = 1
    while True:
        low = cumulative_count(universe.bounded, level - 1)
        high = cumulative_count(universe.bounded, level)
        fresh = [axis.members(level, a, b) for axis, (a, b) in zip(universe.axes, windows)]
        if any(fresh):
            pools = [old + new for old, new in zip(seen, fresh)]
            for combo in product(*pools):
                indices = [i for i, _ in combo]
                if max(indices) < low:
                    continue
                raw = low**n + _tuple_rank(indices, low, high)
                if raw in universe.removed:
                    continue
                yield universe.from_raw(raw), tuple(v for _, v in combo)
            seen = pools
        level += 1


def points_in_ball(universe: UniverseEnumerator, center: Point, radius: Fraction, metric: Metric) -> Iterator[tuple[int, Point]]:
    """Universe points strictly inside B_radius(center), in index order."""
    lo = tuple(c - radius for c in center)
    hi = tuple(c + radius for c in center)
    for index, point in points_in_box(universe, lo, hi):
        if within(point, center, radius, metric):
            yield index, point


def pair_key(u: Point, v: Point) -> bytes:
    """Canonical encoding of an unordered pair: smaller point first, exact num/den text."""
    a, b = sorted((u, v))
    return ("|".join(",".join(format_point(p)) for p in (a, b))).encode("utf-8")


def hash_uniform(seed: int, key: bytes) -> int:
    digest = hashlib.blake2b(
        key,
        digest_size=HASH_BITS // 8,
        key=(seed % 2**HASH_BITS).to_bytes(HASH_BITS // 8, "big"),
    ).digest()
    return int.from_bytes(digest, "big")


@dataclass(frozen=True)
class AdjacencyOracle:
    """
    One fixed outcome of LARG(V, delta, p).

    p = 0 and p = 1 are accepted for degenerate checks.
    """

    seed: int
    delta: Fraction
    p: Fraction
    metric: Metric = Metric.LINF
    universe: UniverseEnumerator | None = None

    def __post_init__(self):
        object.__setattr__(self, "delta", parse_rational(self.delta))
        object.__setattr__(self, "p", parse_rational(self.p))
        object.__setattr__(self, "metric", Metric(self.metric))
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not 0 <= self.p <= 1:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")

    def provenance(self) -> dict:
        return {
            "seed": self.seed,
            "delta": format_rational(self.delta),
            "p": format_rational(self.p),
            "metric": self.metric.value,
        }


def adjacent(oracle: AdjacencyOracle, u: Point, v: Point) -> bool:
    """
    Decide whether u and v are joined in the oracle's outcome.

    Returns:
        False when d(u,v) >= delta, otherwise the Bernoulli(p) verdict of the pair hash
    """
    check_same_dimension(u, v)
    if oracle.universe is not None and len(u) != oracle.universe.dimension:
        raise DimensionMismatch(f"Oracle is {oracle.universe.dimension}-dimensional")
    if u == v:
        raise MalformedRequest(f"A vertex is never adjacent to itself: {u}")
    if not within(u, v, oracle.delta, oracle.metric):
        return False
    h = hash_uniform(oracle.seed, pair_key(u, v))
    return h * oracle.p.denominator < oracle.p.numerator * 2**HASH_BITS


@dataclass(frozen=True)
class GraphSnapshot:
    """A finite graph on explicit rational points; edges are index pairs (i < j)."""

    vertices: tuple[Point, ...]
    edges: frozenset[tuple[int, int]]
    delta: Fraction
    metric: Metric = Metric.LINF
    p: Fraction | None = None
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(make_point(v) for v in self.vertices))
        object.__setattr__(self, "edges", frozenset((min(i, j), max(i, j)) for i, j in self.edges))
        object.__setattr__(self, "delta", parse_rational(self.delta))
        object.__setattr__(self, "metric", Metric(self.metric))
        if self.p is not None:
            object.__setattr__(self, "p", parse_rational(self.p))
        if self.vertices:
            check_same_dimension(*self.vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise MalformedRequest("Snapshot vertices must be pairwise distinct")
        for i, j in self.edges:
            if i == j or not 0 <= i < len(self.vertices) or not 0 <= j < len(self.vertices):
                raise MalformedRequest(f"Edge {(i, j)} is out of bounds")

    @property
    def dimension(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0

    @property
    def constructed(self) -> bool:
        return self.seed is None

    @cached_property
    def position(self) -> dict[Point, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def has_edge(self, u: Point, v: Point) -> bool:
        i, j = self.position[u], self.position[v]
        return (min(i, j), max(i, j)) in self.edges

    def restrict(self, keep: Sequence[int]) -> "GraphSnapshot":
        """Induced subgraph on the given vertex positions, renumbered in the given order."""
        renumber = {old: new for new, old in enumerate(keep)}
        edges = {(renumber[i], renumber[j]) for i, j in self.edges if i in renumber and j in renumber}
        return GraphSnapshot(
            vertices=tuple(self.vertices[i] for i in keep),
            edges=frozenset(edges),
            delta=self.delta,
            metric=self.metric,
            p=self.p,
            seed=self.seed,
        )

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        for i, v in enumerate(self.vertices):
            graph.add_node(i, point=v)
        graph.add_edges_from(self.edges)
        return graph

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "metric": self.metric.value,
            "delta": format_rational(self.delta),
            "p": None if self.p is None else format_rational(self.p),
            "seed": self.seed,
            "provenance": "constructed" if self.constructed else "larg",
            "vertices": [format_point(v) for v in self.vertices],
            "edges": sorted([i, j] for i, j in self.edges),
        }

    @classmethod
    def from_json(cls, data: dict) -> "GraphSnapshot":
        return cls(
            vertices=tuple(make_point(v) for v in data["vertices"]),
            edges=frozenset(tuple(e) for e in data["edges"]),
            delta=data["delta"],
            metric=data.get("metric", "linf"),
            p=data.get("p"),
            seed=data.get("seed"),
        )


def sample_larg(points: Sequence[Point], delta: Fraction, p: Fraction, seed: int, metric: Metric = Metric.LINF) -> GraphSnapshot:
    """
    Sample LARG(points, delta, p) with the same verdicts as an oracle of that seed.

    Args:
        points: Pairwise distinct points of one dimension
        delta: Threshold
        p: Edge probability
        seed: Oracle seed
        metric: Distance used for the threshold

    Returns:
        GraphSnapshot carrying the (seed, delta, p, metric) provenance
    """
    points = [make_point(v) for v in points]
    if len(set(points)) != len(points):
        raise MalformedRequest("sample_larg needs pairwise distinct points")
    oracle = AdjacencyOracle(seed=seed, delta=delta, p=p, metric=metric)
    edges = {(i, j) for i, j in combinations(range(len(points)), 2) if adjacent(oracle, points[i], points[j])}
    logger.debug("Sampled %d vertices, %d edges (seed=%s)", len(points), len(edges), seed)
    return GraphSnapshot(
        vertices=tuple(points),
        edges=frozenset(edges),
        delta=oracle.delta,
        metric=oracle.metric,
        p=oracle.p,
        seed=seed,
    )


def snapshot(oracle: AdjacencyOracle, indices: Sequence[int]) -> GraphSnapshot:
    """Induced subgraph of the oracle's outcome on the given universe indices."""
    if oracle.universe is None:
        raise MalformedRequest("snapshot needs an oracle with a universe")
    if len(set(indices)) != len(indices):
        raise MalformedRequest("snapshot indices must be distinct")
    points = [enumerate_point(oracle.universe, i) for i in indices]
    return sample_larg(points, oracle.delta, oracle.p, oracle.seed, oracle.metric)
