"""
One forth or back step of the step-isometric back-and-forth construction.

To map a new vertex v of G, each coordinate j of v is decomposed against the
anchor v0 with offset delta, with k_j = q(v_j). If a mapped u has the same
representative, r(u_j) = r(v_j), the image coordinate is fixed at
w0_j + k_j*gamma + r(f(u)_j), since a step-isometry keeps representative
ties. Otherwise it must fall in the open interval
(k_j*gamma + a_j, k_j*gamma + b_j) anchored at w0, where a_j is the largest
image representative among mapped u with r(u_j) < r(v_j) and b_j the
smallest among those with r(u_j) > r(v_j). The anchor has representative 0,
so a_j starts at 0; an empty upper set gives gamma. Any point of that box
keeps quotients and the order of representatives, hence the floor equality
on every pair.

The first target point x of the box is tried as the image itself. Otherwise
a vertex correctly joined to f(N(v)) and to nothing else in W_i is searched
in B_eps(x), with eps half the distance from x to the box boundary, or along
the fixed slice when some coordinate is fixed. The back step is the same
routine with G and H exchanged.

A guided step also takes r(F(u)) into a_j and b_j, and centers the search at
x = F(v) instead of the first box point. F(v) has to lie in the box, else the
run stops with GuideViolation. Candidates are F(v) itself and then the
points of B_eps(F(v)), kept only when every pair they form satisfies the
guided conditions of check_guide_conditions.
"""

import logging
from fractions import Fraction
from itertools import chain, islice
from typing import Iterator, Optional

from errors import BudgetExhausted, GuideViolation, InvariantViolation, MalformedRequest
from exact_geometry import Metric, Point, floor_distance_ratio, format_point, format_rational, make_point, within
from gec_engine.witness import WitnessRequest, correctly_joined, find_witness
from lazy_graph import LatticeUniverse, UniverseEnumerator, adjacent, points_in_box
from step_isometry import coordinate_violations, decompose, guide_pair_violations
from back_and_forth.partial_isomorphism import ExtensionStep, Guide, InfiniteGraphHandle, PartialIsomorphism


logger = logging.getLogger(__name__)


def _bounds(
    pairs: list[tuple[Point, Point]],
    v: Point,
    anchor: Point,
    image_anchor: Point,
    offset: Fraction,
    image_offset: Fraction,
    guided: Optional[list[Point]] = None,
) -> tuple[list[Fraction], list[Fraction], list[tuple[Fraction, Fraction]], list[int]]:
    """
    Per-coordinate a_j, b_j, the absolute interval and the fixed coordinates.

    guided holds the guide image of each pair's source; its representatives
    bound the interval alongside those of the images.
    """
    lower, upper, interval, fixed = [], [], [], []
    for j in range(len(v)):
        rep = decompose(v[j], anchor[j], offset)
        r, base = rep.r, image_anchor[j] + rep.q * image_offset
        mapped = [(decompose(u[j], anchor[j], offset).r, decompose(fu[j], image_anchor[j], image_offset).r) for u, fu in pairs]
        tied = next((r_image for r_u, r_image in mapped if r_u == r), None)
        if tied is not None:
            lower.append(tied)
            upper.append(tied)
            interval.append((base + tied, base + tied))
            fixed.append(j)
            continue

        if guided is None:
            limits = [(r_u, r_image, r_image) for r_u, r_image in mapped]
        else:
            limits = [(r_u, r_image, decompose(g[j], image_anchor[j], image_offset).r) for (r_u, r_image), g in zip(mapped, guided)]
        a = max((max(r_image, r_guide) for r_u, r_image, r_guide in limits if r_u < r), default=Fraction(0))
        b = min((min(r_image, r_guide) for r_u, r_image, r_guide in limits if r_u > r), default=image_offset)
        if a >= b:
            # guided: r(f(u)) = r(F(u')) is allowed for r(u) < r(u') and leaves no room
            error = InvariantViolation if guided is None else GuideViolation
            raise error(
                f"Empty image interval in coordinate {j}: a={a}, b={b}",
                {"point": format_point(v), "coordinate": j, "a": format_rational(a), "b": format_rational(b)},
            )
        lower.append(a)
        upper.append(b)
        interval.append((base + a, base + b))
    return lower, upper, interval, fixed


def _in_region(z: Point, interval: list[tuple[Fraction, Fraction]]) -> bool:
    return all(c == lo if lo == hi else lo < c < hi for c, (lo, hi) in zip(z, interval))


def _in_free_region(z: Point, interval: list[tuple[Fraction, Fraction]]) -> bool:
    return all(lo < c < hi for c, (lo, hi) in zip(z, interval) if lo != hi)


def region_points(universe: UniverseEnumerator, interval: list[tuple[Fraction, Fraction]]) -> Iterator[Point]:
    """
    Universe points of the open box, fixed coordinates held at their value.

    Free coordinates are enumerated through the universe restricted to them, so
    the order is the universe's index order whenever nothing is fixed. In a
    lattice universe a fixed coordinate determines the point.
    """
    free = [j for j, (lo, hi) in enumerate(interval) if lo != hi]
    if not free:
        point = tuple(lo for lo, _ in interval)
        if universe.contains(point):
            yield point
        return
    if isinstance(universe, LatticeUniverse):
        if len(free) < universe.dimension:
            j = next(j for j in range(len(interval)) if j not in free)
            point = universe.point_with_coordinate(j, interval[j][0])
            if point is not None and _in_region(point, interval):
                yield point
            return
        sub = universe
    elif len(free) == universe.dimension:
        sub = universe
    else:
        region = None if universe.region is None else tuple(universe.region[j] for j in free)
        sub = UniverseEnumerator(dimension=len(free), region=region)
    box_lo = tuple(interval[j][0] for j in free)
    box_hi = tuple(interval[j][1] for j in free)
    for _, y in points_in_box(sub, box_lo, box_hi):
        z = [lo for lo, _ in interval]
        for j, c in zip(free, y):
            z[j] = c
        z = tuple(z)
        if _in_region(z, interval) and (sub is universe or universe.contains(z)):
            yield z


def _boundary_margin(x: Point, interval: list[tuple[Fraction, Fraction]]) -> Fraction:
    return min(min(c - lo, hi - c) for c, (lo, hi) in zip(x, interval) if lo != hi)


def _step_violations(
    pairs: list[tuple[Point, Point]],
    source: InfiniteGraphHandle,
    target: InfiniteGraphHandle,
    anchor: Point,
    image_anchor: Point,
    v: Point,
    z: Point,
) -> list[str]:
    """Conditions, floor equality and adjacency of the new pair (v, z) against every mapped pair."""
    problems = []
    for u, fu in pairs:
        for j in range(len(v)):
            scalar = [(u[j], fu[j]), (v[j], z[j])]
            problems.extend(coordinate_violations(scalar, anchor[j], image_anchor[j], source.delta, target.delta))
        if floor_distance_ratio(u, v, source.delta, Metric.LINF) != floor_distance_ratio(fu, z, target.delta, Metric.LINF):
            problems.append(f"floor ratio differs for {format_point(u)}, {format_point(v)}")
        if adjacent(source.oracle, u, v) != adjacent(target.oracle, fu, z):
            problems.append(f"adjacency differs for {format_point(u)}, {format_point(v)}")
    return problems


def _guided_candidates(
    guide: Guide,
    target: InfiniteGraphHandle,
    point: Point,
    interval: list[tuple[Fraction, Fraction]],
    forth: bool,
) -> tuple[Point, Iterator[Point]]:
    """
    The guide image x of point, then x itself if it is a vertex, then the points of B_eps(x) in the box.

    Raises:
        GuideViolation: x is outside the box, so no image keeps the guided conditions
    """
    x = make_point(guide.on_point(point) if forth else guide.inverse_on_point(point))
    if not _in_free_region(x, interval):
        raise GuideViolation(
            f"Guide image {format_point(x)} of {format_point(point)} is outside the box of allowed images",
            {
                "direction": "forth" if forth else "back",
                "point": format_point(point),
                "x": format_point(x),
                "interval": [[format_rational(lo), format_rational(hi)] for lo, hi in interval],
            },
        )
    box = interval
    if any(lo != hi for lo, hi in interval):
        eps = _boundary_margin(x, interval) / 2
        box = [(lo, hi) if lo == hi else (c - eps, c + eps) for c, (lo, hi) in zip(x, interval)]
    head = [x] if target.universe.contains(x) else []
    return x, chain(head, (c for c in region_points(target.universe, box) if c != x))


def extend(
    state: PartialIsomorphism,
    G: InfiniteGraphHandle,
    H: InfiniteGraphHandle,
    point: Point,
    budget: int,
    forth: bool = True,
    guide: Optional[Guide] = None,
) -> tuple[PartialIsomorphism, Optional[ExtensionStep]]:
    """
    Add point to the map, on the source side (forth) or the target side (back).

    Args:
        state: Current partial isomorphism
        G: Source graph handle
        H: Target graph handle
        point: Vertex of G (forth) or of H (back)
        budget: Cap on candidates for x and on witness trials
        forth: Direction of the step
        guide: Step-isometry F from G onto H steering the step

    Returns:
        tuple: The extended map and the step record; (state, None) if point is already mapped

    Raises:
        BudgetExhausted: No point of the box, or no witness, within the budget
        GuideViolation: The guide image of point is outside the box of a guided step
        InvariantViolation: A property the construction guarantees failed
    """
    point = make_point(point)
    source, target = (G, H) if forth else (H, G)
    direction = "forth" if forth else "back"
    if (state.maps_source(point) if forth else state.maps_target(point)):
        return state, None
    if not source.universe.contains(point):
        raise MalformedRequest(f"{format_point(point)} is not a vertex of the {'source' if forth else 'target'} graph")

    pairs = state.pairs(forth)
    anchor, image_anchor = state.anchors if forth else state.anchors[::-1]
    offset, image_offset = source.delta, target.delta
    guided = None
    if guide is not None:
        to_target = guide.on_point if forth else guide.inverse_on_point
        guided = [make_point(to_target(u)) for u, _ in pairs]
    lower, upper, interval, fixed = _bounds(pairs, point, anchor, image_anchor, offset, image_offset, guided)

    nearby = [(u, fu) for u, fu in pairs if within(u, point, offset, Metric.LINF)]
    A = tuple(fu for u, fu in nearby if adjacent(source.oracle, point, u))
    mapped = frozenset(fu for _, fu in pairs)

    def neighbourhood(x: Point) -> tuple[Point, ...]:
        return tuple(w for w in mapped if w not in A and within(w, x, image_offset, Metric.LINF))

    def contained(x: Point) -> bool:
        return all(within(fu, x, image_offset, Metric.LINF) for _, fu in nearby)

    z, x, trials, search, guide_admissible = None, None, 0, "center", None
    if guide is not None:
        triples = [(u, fu, make_point(guide.on_point(u))) for u, fu in state.pairs(True)]

        def keeps_guide(c: Point) -> bool:
            new = (point, c, x) if forth else (c, point, make_point(guide.on_point(c)))
            return not guide_pair_violations(triples, new, state.delta, state.gamma, state.anchors)

        x, candidates = _guided_candidates(guide, target, point, interval, forth)
        search = "guide_ball"
        for candidate in islice(candidates, budget):
            trials += 1
            if (
                candidate not in mapped
                and contained(candidate)
                and correctly_joined(target.oracle, candidate, A, neighbourhood(candidate))
                and keeps_guide(candidate)
            ):
                z = candidate
                break
        guide_admissible = z is not None and z == x
        if guide_admissible:
            search = "guide"
        else:
            logger.info("Guide image %s of %s is not admissible", format_point(x), format_point(point))
    else:
        candidates = islice((c for c in region_points(target.universe, interval) if c not in mapped), budget)
        x = next(candidates, None)
        if x is None:
            raise BudgetExhausted(
                f"No {'target' if forth else 'source'} vertex in the image box of {format_point(point)}",
                {"direction": direction, "point": format_point(point), "interval": [[format_rational(lo), format_rational(hi)] for lo, hi in interval]},
            )
        if not contained(x):
            raise InvariantViolation(
                f"Images of the delta-ball around {format_point(point)} are not within reach of {format_point(x)}",
                {"direction": direction, "point": format_point(point), "x": format_point(x)},
            )
        trials = 1
        if correctly_joined(target.oracle, x, A, neighbourhood(x)):
            z = x
        elif fixed:
            search = "region"
            for candidate in candidates:
                trials += 1
                if contained(candidate) and correctly_joined(target.oracle, candidate, A, neighbourhood(candidate)):
                    z = candidate
                    break
        else:
            search = "ball"
            req = WitnessRequest(
                x=x,
                A=A,
                B=neighbourhood(x),
                delta=image_offset,
                delta_prime=_boundary_margin(x, interval) / 2,
                max_trials=budget,
            )
            result = find_witness(target.oracle, req, exclude=mapped)
            trials += result.trials
            if result.found:
                z = result.point

    if z is None:
        raise BudgetExhausted(
            f"No correctly joined image for {format_point(point)} within {budget} candidates",
            {"direction": direction, "point": format_point(point), "x": format_point(x), "trials": trials, "mapped": len(pairs)},
        )

    problems = _step_violations(pairs, source, target, anchor, image_anchor, point, z)
    if problems:
        raise InvariantViolation(
            f"Extension of {format_point(point)} broke the map: {problems[0]}",
            {"direction": direction, "point": format_point(point), "image": format_point(z), "violations": problems},
        )

    extended = state.extended(point, z) if forth else state.extended(z, point)
    step = ExtensionStep(
        direction=direction,
        point=point,
        image=z,
        lower=tuple(lower),
        upper=tuple(upper),
        interval=tuple(interval),
        chosen_x=x,
        trials_used=trials,
        search=search,
        guide_admissible=guide_admissible,
        fixed=tuple(fixed),
    )
    logger.debug("%s %s -> %s after %d trials (%s)", direction, point, z, trials, search)
    return extended, step


def extend_forth(
    state: PartialIsomorphism,
    G: InfiniteGraphHandle,
    H: InfiniteGraphHandle,
    v: Point,
    budget: int,
    guide: Optional[Guide] = None,
) -> tuple[PartialIsomorphism, Optional[ExtensionStep]]:
    """Find an image in H for the vertex v of G."""
    return extend(state, G, H, v, budget, forth=True, guide=guide)


def extend_back(
    state: PartialIsomorphism,
    G: InfiniteGraphHandle,
    H: InfiniteGraphHandle,
    w: Point,
    budget: int,
    guide: Optional[Guide] = None,
) -> tuple[PartialIsomorphism, Optional[ExtensionStep]]:
    """Find a preimage in G for the vertex w of H."""
    return extend(state, G, H, w, budget, forth=False, guide=guide)
