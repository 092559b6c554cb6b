from fractions import Fraction
from itertools import islice, takewhile

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import MalformedRequest
from exact_geometry import Metric, within
from lazy_graph import (
    AdjacencyOracle,
    GraphSnapshot,
    LatticeUniverse,
    UniverseEnumerator,
    adjacent,
    enumerate_point,
    index_of,
    points_in_ball,
    points_in_box,
    sample_larg,
    snapshot,
)
from step_isometry import decompose
from tests.strategies import points, positive_rationals


F = Fraction

UNIT_SQUARE = ((F(0), F(1)), (F(0), F(1)))


def test_line_enumeration_starts_at_zero():
    universe = UniverseEnumerator(1)
    first = [enumerate_point(universe, i)[0] for i in range(7)]
    assert first == [F(0), F(1), F(-1), F(2), F(-2), F(1, 2), F(-1, 2)]


def test_box_enumeration_starts_at_lower_corner():
    universe = UniverseEnumerator(1, region=((F(2), F(4)),))
    first = [enumerate_point(universe, i)[0] for i in range(4)]
    assert first == [F(2), F(3), F(8, 3), F(10, 3)]


@pytest.mark.parametrize("universe", [
    UniverseEnumerator(1),
    UniverseEnumerator(2),
    UniverseEnumerator(3),
    UniverseEnumerator(2, region=UNIT_SQUARE),
    LatticeUniverse(2, region=UNIT_SQUARE),
    LatticeUniverse(3, region=((F(0), F(4)),) * 3),
])
def test_enumeration_is_injective_and_invertible(universe):
    seen = set()
    for i in range(300):
        point = enumerate_point(universe, i)
        assert point not in seen
        seen.add(point)
        assert index_of(universe, point) == i
        assert universe.contains(point)


def test_removed_indices_shift_the_enumeration():
    full = UniverseEnumerator(1)
    trimmed = UniverseEnumerator(1, removed=frozenset({0}))
    assert enumerate_point(trimmed, 0) == enumerate_point(full, 1)
    assert not trimmed.contains((F(0),))
    with pytest.raises(ValueError):
        index_of(trimmed, (F(0),))


@settings(max_examples=40, deadline=None)
@given(points(2, -5, 5), positive_rationals(hi=1, max_denominator=8))
def test_universe_is_dense(center, radius):
    index, point = next(points_in_ball(UniverseEnumerator(2), center, radius, Metric.LINF))
    assert within(point, center, radius, Metric.LINF)
    assert enumerate_point(UniverseEnumerator(2), index) == point


@pytest.mark.parametrize("universe, lo, hi", [
    (UniverseEnumerator(1), (F(-1, 2),), (F(3, 2),)),
    (UniverseEnumerator(2), (F(0), F(-1)), (F(1), F(1, 3))),
    (UniverseEnumerator(2, region=UNIT_SQUARE), (F(1, 4), F(0)), (F(3, 4), F(1, 2))),
    (LatticeUniverse(2, region=UNIT_SQUARE), (F(1, 4), F(0)), (F(3, 4), F(1, 2))),
    (LatticeUniverse(2, region=((F(0), F(40)),) * 2), (F(10), F(5)), (F(20), F(30))),
])
def test_points_in_box_matches_brute_force(universe, lo, hi):
    limit = 400
    expected = [
        i for i in range(limit)
        if all(a <= c < b for c, a, b in zip(enumerate_point(universe, i), lo, hi))
    ]
    found = [i for i, _ in takewhile(lambda item: item[0] < limit, points_in_box(universe, lo, hi))]
    assert found == expected


def test_lattice_first_points():
    universe = LatticeUniverse(2, region=UNIT_SQUARE)
    first = [enumerate_point(universe, i) for i in range(4)]
    assert first == [(F(0), F(0)), (F(1, 2), F(1, 2)), (F(1, 3), F(2, 3)), (F(2, 3), F(1, 3))]


def test_lattice_coordinates_never_repeat():
    universe = LatticeUniverse(3, region=((F(0), F(10)),) * 3)
    pts = [enumerate_point(universe, i) for i in range(500)]
    for j in range(3):
        assert len({p[j] for p in pts}) == len(pts)


def test_lattice_point_with_coordinate():
    universe = LatticeUniverse(2, region=UNIT_SQUARE)
    for i in range(1, 100):
        point = enumerate_point(universe, i)
        assert universe.point_with_coordinate(0, point[0]) == point
        assert universe.point_with_coordinate(1, point[1]) == point
    assert universe.point_with_coordinate(0, F(2, 4) + F(1, 7)) is None
    assert not universe.contains((F(1, 2), F(1, 3)))


def test_lattice_needs_a_region():
    with pytest.raises(ValueError):
        LatticeUniverse(2)


@pytest.mark.parametrize("region, offset", [
    (((F(0), F(100)),), F(1)),
    (((F(0), F(40)), (F(0), F(40))), F(1)),
    (((F(0), F(60)), (F(0), F(60))), F(3, 2)),
])
def test_lattice_representatives_never_tie(region, offset):
    universe = LatticeUniverse(len(region), region=region, offset=offset)
    pts = [enumerate_point(universe, i) for i in range(300)]
    for j in range(len(region)):
        assert len({decompose(p[j], F(0), offset).r for p in pts}) == len(pts)


def test_lattice_skips_primes_dividing_the_side():
    universe = LatticeUniverse(1, region=((F(0), F(100)),), offset=F(1))
    denominators = {(enumerate_point(universe, i)[0] / 100).denominator for i in range(60)}
    assert 2 not in denominators and 5 not in denominators
    assert {1, 3, 7, 11} <= denominators
    assert not universe.contains((F(50),))
    assert universe.contains((F(100, 3),))


def test_scaled_lattices_match():
    G = LatticeUniverse(2, region=((F(0), F(40)),) * 2, offset=F(1))
    H = LatticeUniverse(2, region=((F(0), F(60)),) * 2, offset=F(3, 2))
    for i in range(200):
        assert tuple(F(3, 2) * c for c in enumerate_point(G, i)) == enumerate_point(H, i)

def test_oracle_threshold_symmetry_and_determinism(line_oracle):
    u, v, far = (F(0),), (F(1, 3),), (F(1),)
    assert adjacent(line_oracle, u, v) == adjacent(line_oracle, v, u)
    assert not adjacent(line_oracle, u, far)
    twin = AdjacencyOracle(seed=7, delta=F(1), p=F(1, 2), metric=Metric.LINF, universe=UniverseEnumerator(1))
    pts = [enumerate_point(line_oracle.universe, i) for i in range(30)]
    for a in pts:
        for b in pts:
            if a != b:
                assert adjacent(line_oracle, a, b) == adjacent(twin, a, b)


def test_oracle_rejects_loops(line_oracle):
    with pytest.raises(MalformedRequest):
        adjacent(line_oracle, (F(0),), (F(0),))


def test_p_one_gives_the_geometric_graph():
    oracle = AdjacencyOracle(seed=3, delta=F(1), p=F(1), universe=UniverseEnumerator(2))
    snap = snapshot(oracle, list(range(40)))
    for i, u in enumerate(snap.vertices):
        for j in range(i + 1, len(snap.vertices)):
            assert ((i, j) in snap.edges) == within(u, snap.vertices[j], F(1), Metric.LINF)


def test_large_delta_gives_binomial_graph():
    universe = UniverseEnumerator(2, region=UNIT_SQUARE)
    oracle = AdjacencyOracle(seed=5, delta=F(2), p=F(1, 2), universe=universe)
    snap = snapshot(oracle, list(range(60)))
    pairs = 60 * 59 // 2
    # every pair is a Bernoulli(1/2) draw
    assert abs(len(snap.edges) - pairs / 2) < 4 * (pairs / 4) ** 0.5


def test_p_zero_has_no_edges():
    oracle = AdjacencyOracle(seed=3, delta=F(1), p=F(0), universe=UniverseEnumerator(1))
    assert not snapshot(oracle, list(range(30))).edges


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=200), min_size=2, max_size=25, unique=True), st.data())
def test_snapshot_restriction_is_coherent(indices, data):
    oracle = AdjacencyOracle(seed=13, delta=F(1), p=F(1, 2), universe=UniverseEnumerator(1))
    keep = data.draw(st.lists(st.integers(min_value=0, max_value=len(indices) - 1), unique=True))
    restricted = snapshot(oracle, indices).restrict(keep)
    assert restricted == snapshot(oracle, [indices[k] for k in keep])


def test_sample_larg_agrees_with_oracle(plane_oracle):
    pts = [enumerate_point(plane_oracle.universe, i) for i in range(25)]
    snap = sample_larg(pts, plane_oracle.delta, plane_oracle.p, plane_oracle.seed)
    for i, j in snap.edges:
        assert adjacent(plane_oracle, pts[i], pts[j])
    assert sample_larg(pts, F(1), F(1, 2), 11).to_json() == snap.to_json()


def test_snapshot_json_and_networkx(plane_oracle):
    snap = snapshot(plane_oracle, list(range(15)))
    assert GraphSnapshot.from_json(snap.to_json()) == snap
    graph = snap.to_networkx()
    assert graph.number_of_nodes() == 15
    assert graph.number_of_edges() == len(snap.edges)
    assert nx.utils.graphs_equal(graph, snap.restrict(range(15)).to_networkx())


def test_snapshot_rejects_bad_edges():
    with pytest.raises(MalformedRequest):
        GraphSnapshot(vertices=((F(0),), (F(1),)), edges=frozenset({(0, 2)}), delta=F(1))
