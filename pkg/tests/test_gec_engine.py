import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import BoundaryIndecision, BudgetExhausted, MalformedRequest
from exact_geometry import Metric, distance_linf
from gec_engine import (
    WitnessRequest,
    build_gr,
    certify_path,
    check_ball_ec,
    check_threshold,
    construct_path,
    construction_log_lines,
    expected_graph_distance,
    find_witness,
    replay_construction,
    verify_witness,
)
from gec_engine.construction import sigma_at, sigma_rank
from gec_engine.witness import search_radius
from lazy_graph import AdjacencyOracle, GraphSnapshot, UniverseEnumerator
from tests.strategies import rationals


F = Fraction


def request(x, A=(), B=(), delta_prime=F(1, 4), max_trials=1000):
    return WitnessRequest(x=x, A=A, B=B, delta=F(1), delta_prime=delta_prime, max_trials=max_trials)


def test_witness_on_the_line(line_oracle):
    req = request((F(0),), A=((F(1, 2),),), B=((F(-1, 2),),))
    result = find_witness(line_oracle, req)
    assert result.found
    assert result.trials >= 1
    assert distance_linf(result.point, (F(0),)) < F(1, 4)
    assert verify_witness(line_oracle, req, result.point)


@settings(max_examples=25, deadline=None)
@given(
    rationals(-10, 10),
    st.lists(st.integers(min_value=-7, max_value=7).filter(bool), max_size=3, unique=True),
    st.data(),
)
def test_found_witnesses_verify(x, offsets, data):
    oracle = AdjacencyOracle(seed=21, delta=F(1), p=F(1, 2), universe=UniverseEnumerator(1))
    split = data.draw(st.integers(min_value=0, max_value=len(offsets)))
    others = [(x + F(k, 8),) for k in offsets]
    req = request((x,), A=tuple(others[:split]), B=tuple(others[split:]), max_trials=2000)
    result = find_witness(oracle, req)
    assert result.found
    assert verify_witness(oracle, req, result.point)


def test_witness_over_a_snapshot():
    x, a, near, good = (F(0),), (F(1, 2),), (F(1, 10),), (F(1, 5),)
    snap = GraphSnapshot(vertices=(x, a, near, good), edges=frozenset({(1, 3)}), delta=F(1))
    result = find_witness(snap, request(x, A=(a,)))
    assert result.found
    assert result.point == good
    assert result.index == 3
    assert result.trials == 2


def test_certain_and_impossible_edges():
    universe = UniverseEnumerator(1)
    req = request((F(0),), A=((F(1, 2),),), max_trials=50)
    always = AdjacencyOracle(seed=1, delta=F(1), p=F(1), universe=universe)
    never = AdjacencyOracle(seed=1, delta=F(1), p=F(0), universe=universe)
    assert find_witness(always, req).trials == 1
    missing = find_witness(never, req)
    assert not missing.found
    assert missing.trials == 50


def test_zero_budget_examines_nothing(line_oracle):
    result = find_witness(line_oracle, request((F(0),), max_trials=0))
    assert not result.found
    assert result.trials == 0


@pytest.mark.parametrize("req", [
    request((F(0),), A=((F(1, 2),),), B=((F(1, 2),),)),
    request((F(0),), A=((F(0),),)),
    request((F(0),), A=((F(1),),)),
    request((F(0),), delta_prime=F(1)),
    request((F(0),), delta_prime=F(0)),
    request((F(0),), A=((F(0), F(0)),)),
])
def test_malformed_requests(line_oracle, req):
    with pytest.raises(MalformedRequest):
        find_witness(line_oracle, req)


def test_search_radius_shrinks_with_far_members():
    req = request((F(0),), A=((F(1, 2),),), delta_prime=F(3, 4))
    assert search_radius(req, Metric.LINF) == F(1, 2)
    assert search_radius(request((F(0),)), Metric.LINF) == F(1, 4)
    assert 0 < search_radius(request((F(0), F(0)), A=((F(1, 2), F(1, 2)),), delta_prime=F(3, 4)), Metric.L2) < 1 - F(7, 10)


def test_verify_witness_rejects_bad_points(line_oracle):
    req = request((F(0),), A=((F(1, 2),),))
    assert not verify_witness(line_oracle, req, (F(0),))
    assert not verify_witness(line_oracle, req, (F(1, 2),))
    assert not verify_witness(line_oracle, req, (F(1, 3),))


def test_check_threshold():
    pts = ((F(0),), (F(1, 2),), (F(2),))
    assert check_threshold(GraphSnapshot(vertices=pts, edges=frozenset({(0, 1)}), delta=F(1)), F(1), Metric.LINF)
    assert not check_threshold(GraphSnapshot(vertices=pts, edges=frozenset({(0, 2)}), delta=F(1)), F(1), Metric.LINF)
    assert not check_threshold(GraphSnapshot(vertices=pts, edges=frozenset({(0, 1)}), delta=F(1)), F(1, 2), Metric.LINF)


def test_sigma_positions_and_ranks_agree():
    sigma = [3, 1]
    assert [sigma_at(sigma, p) for p in range(1, 6)] == [3, 1, 0, 2, 4]
    for position in range(1, 30):
        assert sigma_rank(sigma, sigma_at(sigma, position)) == position


@pytest.mark.parametrize("pair_scope, t_max", [("prefix", 4), ("all", 3)])
def test_construction_replays(pair_scope, t_max):
    state = build_gr(UniverseEnumerator(1), F(1), t_max=t_max, pair_scope=pair_scope)
    assert state["t"] == t_max
    assert state["processed_pairs"]
    snap = state["snapshot"]
    assert snap.constructed
    assert check_threshold(snap, F(1), Metric.LINF)
    assert replay_construction(state) == []
    lines = construction_log_lines(state)
    assert len(lines) == len(state["processed_pairs"])
    assert set(json.loads(lines[0])) == {"t", "x", "A", "chosen_z", "trials_used"}


def test_construction_is_deterministic():
    universe = UniverseEnumerator(2, region=((F(0), F(2)), (F(0), F(2))))
    first = build_gr(universe, F(1), sigma=[2, 0], t_max=3, pair_scope="prefix")
    second = build_gr(universe, F(1), sigma=[2, 0], t_max=3, pair_scope="prefix")
    assert construction_log_lines(first) == construction_log_lines(second)
    assert first["snapshot"] == second["snapshot"]
    assert first["vertices"][0] == 2


def test_single_stage_is_one_vertex():
    state = build_gr(UniverseEnumerator(1), F(1), sigma=[5], t_max=1)
    assert state["vertices"] == [5]
    assert not state["edges"]


@pytest.mark.parametrize("kwargs", [
    {"t_max": 0},
    {"pair_scope": "some"},
    {"sigma": [1, 1]},
])
def test_construction_rejects_bad_arguments(kwargs):
    with pytest.raises(ValueError):
        build_gr(UniverseEnumerator(1), F(1), **kwargs)


def test_construction_pair_cap():
    with pytest.raises(BudgetExhausted):
        build_gr(UniverseEnumerator(1), F(1), t_max=2, max_pairs=0)


@pytest.mark.parametrize("u, v, delta, metric, expected", [
    ((F(0),), (F(5, 2),), F(1), Metric.LINF, 3),
    ((F(0), F(0)), (F(7, 2), F(1)), F(1), Metric.LINF, 4),
    ((F(0), F(0)), (F(3), F(0)), F(1), Metric.LINF, 4),
    ((F(0), F(0)), (F(2), F(1)), F(1), Metric.L2, 3),
    ((F(0), F(0)), (F(3), F(3)), F(2), Metric.L2, 3),
])
def test_expected_graph_distance(u, v, delta, metric, expected):
    assert expected_graph_distance(u, v, delta, metric) == expected


def test_expected_graph_distance_edge_cases():
    with pytest.raises(BoundaryIndecision):
        expected_graph_distance((F(0), F(0)), (F(3), F(4)), F(1), Metric.L2)
    with pytest.raises(MalformedRequest):
        expected_graph_distance((F(0),), (F(1, 2),), F(1))


@pytest.mark.parametrize("oracle, u, v, k", [
    (AdjacencyOracle(seed=7, delta=F(1), p=F(1, 2), universe=UniverseEnumerator(1)), (F(0),), (F(5, 2),), 3),
    (AdjacencyOracle(seed=11, delta=F(1), p=F(1, 2), universe=UniverseEnumerator(2)), (F(0), F(0)), (F(7, 2), F(1)), 4),
    (AdjacencyOracle(seed=3, delta=F(1), p=F(1, 2), metric=Metric.L2, universe=UniverseEnumerator(2)), (F(0), F(0)), (F(2), F(1)), 3),
])
def test_paths_are_shortest(oracle, u, v, k):
    path = construct_path(oracle, u, v, trial_budget=10_000)
    assert len(path) == k + 1
    assert path[0] == u and path[-1] == v
    assert len(set(path)) == len(path)
    certificate = certify_path(oracle, path)
    assert certificate["k"] == certificate["expected"] == k
    assert certificate["all_hops_adjacent"]
    assert certificate["all_hops_below_delta"]
    assert certificate["lower_bound_certified"]
    assert certificate["induced_bfs_distance"] == k


def test_path_budget_exhaustion():
    never = AdjacencyOracle(seed=7, delta=F(1), p=F(0), universe=UniverseEnumerator(1))
    with pytest.raises(BudgetExhausted) as info:
        construct_path(never, (F(0),), (F(5, 2),), trial_budget=20)
    assert info.value.context["segment"] == 1


def test_ball_is_existentially_closed(line_oracle):
    report = check_ball_ec(line_oracle, (F(0),), F(1), trial_budget=2000, samples=20)
    assert report["samples"] == 20
    assert report["success_rate"] == 1.0
    assert not report["failures"]


def test_ball_check_over_a_snapshot():
    center = (F(0),)
    snap = GraphSnapshot(vertices=(center, (F(2),)), edges=frozenset(), delta=F(1))
    report = check_ball_ec(snap, center, F(1), trial_budget=10, samples=5)
    assert report["successes"] == 0
    assert len(report["failures"]) == 5
