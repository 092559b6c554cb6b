import csv
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from errors import MalformedRequest
from exact_geometry import Metric, make_point, squared_l2
from lazy_graph import AdjacencyOracle, UniverseEnumerator
from step_isometry import FiniteMap
from euclid_noniso import (
    ClaimCertificate,
    GoodEnumeration,
    Inequality,
    analytic_bound,
    build_claim1_config,
    build_claim2_config,
    compatibility_mc,
    delta_free_demo,
    delta_free_filter,
    discrepancy,
    distance_profile,
    good_enumeration,
    max_discrepancy,
    p_star,
    profiles_compatible,
    random_claim_inputs,
    verify_claim1_chain,
    verify_claim2_chain,
    write_compatibility_csv,
)
from euclid_noniso.compatibility import CSV_COLUMNS


F = Fraction

PRECISION = F(1, 10**12)

SMALL_ENUMERATION = GoodEnumeration(
    points=((F(0), F(0)), (F(1, 2), F(0)), (F(0), F(1, 2)), (F(1, 2), F(1, 2)), (F(1), F(1, 2))),
    delta=F(1),
)


def l2_oracle(seed, p=F(1, 2), delta=F(1)):
    return AdjacencyOracle(seed=seed, delta=delta, p=p, metric=Metric.L2)


def test_claim_one_on_a_long_pair():
    config = build_claim1_config((F(0), F(0)), (F(50), F(0)), F(1, 2))
    assert config.k == 26
    certificate = verify_claim1_chain(config, PRECISION)
    assert certificate.valid, [i.name for i in certificate.failed]
    assert certificate.min_margin() > 0
    assert any(i.conditional for i in certificate.inequalities)
    assert certificate.to_json()["claim"] == "claim1"


def test_chain_steps_need_a_positive_margin():
    assert not Inequality("tight", F(1), F(1), "<=").holds
    assert Inequality("loose", F(1), F(3, 2), "<=").holds
    assert Inequality("equal", F(1), F(1), "=").holds
    certificate = ClaimCertificate("claim1", {}, (Inequality("0 < 1", 0, 1), Inequality("2 <= 2", 2, 2, "<=")))
    assert not certificate.valid
    assert [i.name for i in certificate.failed] == ["2 <= 2"]
    assert certificate.min_margin() == 0


def test_claim_one_needs_a_long_pair():
    with pytest.raises(MalformedRequest):
        build_claim1_config((F(0), F(0)), (F(30), F(0)), F(1, 2))
    config = build_claim1_config((F(0), F(0)), (F(30), F(0)), F(1, 2), check_separation=False)
    certificate = verify_claim1_chain(config, PRECISION)
    assert not certificate.valid
    assert not certificate.get("hypothesis: d(x1,x2) > 40").holds


@pytest.mark.parametrize("kwargs", [
    {"epsilon": F(0)},
    {"epsilon": F(1)},
    {"epsilon": F(1, 2), "xi": F(1, 4 * 26)},
])
def test_claim_one_rejections(kwargs):
    with pytest.raises(MalformedRequest):
        build_claim1_config((F(0), F(0)), (F(50), F(0)), **kwargs)


def test_claim_two_on_a_short_pair():
    config = build_claim2_config((F(0), F(0)), (F(10), F(0)), F(1, 2))
    assert config.c == F(1, 64)
    certificate = verify_claim2_chain(config, PRECISION)
    assert certificate.valid, [i.name for i in certificate.failed]
    assert certificate.get("d(x3,x4) > 40").holds


@pytest.mark.parametrize("x2, epsilon, c", [
    ((F(40), F(0)), F(1, 2), None),
    ((F(0), F(0)), F(1, 2), None),
    ((F(10), F(0)), F(1, 2), F(1, 10)),
    ((F(10), F(0)), F(3, 2), None),
])
def test_claim_two_rejections(x2, epsilon, c):
    with pytest.raises(MalformedRequest):
        build_claim2_config((F(0), F(0)), x2, epsilon, c)


@pytest.mark.parametrize("long_pair", [True, False])
def test_random_claim_inputs_are_admissible(long_pair):
    rng = np.random.default_rng(0)
    for _ in range(5):
        x1, x2, epsilon = random_claim_inputs(rng, long_pair)
        assert 0 < epsilon < 1
        if long_pair:
            assert squared_l2(x1, x2) > 40**2
            certificate = verify_claim1_chain(build_claim1_config(x1, x2, epsilon), PRECISION)
        else:
            assert 0 < squared_l2(x1, x2) < 40**2
            certificate = verify_claim2_chain(build_claim2_config(x1, x2, epsilon), PRECISION)
        assert certificate.valid


def test_discrepancy_encloses_the_gap():
    f = FiniteMap((
        ((F(0), F(0)), (F(0), F(0))),
        ((F(3), F(4)), (F(5), F(0))),
        ((F(1), F(1)), (F(2), F(0))),
    ))
    exact = discrepancy(f, (F(0), F(0)), (F(3), F(4)), F(1, 1000))
    assert exact.D.contains(0)
    report = discrepancy(f, (F(0), F(0)), (F(1), F(1)), F(1, 1000))
    assert report.D.width <= F(1, 1000)
    assert report.D.lo <= F(58579, 100000) and report.D.hi >= F(58578, 100000)
    assert max_discrepancy(f, F(1, 1000)).pair[1] in {(F(1), F(1)), (F(3), F(4))}
    assert max_discrepancy(FiniteMap((((F(0), F(0)), (F(0), F(0))),)), F(1, 1000)) is None
    with pytest.raises(MalformedRequest):
        discrepancy(f, (F(0), F(0)), (F(9), F(9)), F(1, 1000))


def test_good_enumeration_adds_connectors():
    enum = good_enumeration([(F(0), F(0)), (F(10), F(0))], F(1), UniverseEnumerator(2), budget=10_000)
    assert enum.points[0] == (F(0), F(0))
    assert enum.points[-1] == (F(10), F(0))
    assert len(enum) > 12
    assert nx.is_connected(enum.path_graph())


def test_good_enumeration_keeps_a_good_start():
    start = [(F(0), F(0)), (F(1, 2), F(0)), (F(0), F(1, 2)), (F(3, 4), F(3, 4))]
    enum = good_enumeration(start, F(1), UniverseEnumerator(2), budget=1000)
    assert enum.points == tuple(start)


def test_good_enumeration_validation():
    with pytest.raises(MalformedRequest):
        GoodEnumeration(points=((F(0), F(0)), (F(1, 2), F(0)), (F(3, 4), F(0))), delta=F(1))
    with pytest.raises(MalformedRequest):
        GoodEnumeration(points=((F(0), F(0)), (F(1, 2), F(0)), (F(0), F(3))), delta=F(1))
    with pytest.raises(MalformedRequest):
        good_enumeration([], F(1), UniverseEnumerator(2), budget=10)


def test_p_star_and_bound():
    assert p_star(F(1, 2)) == F(1, 2)
    assert p_star(F(1, 4)) == F(5, 8)
    assert p_star(F(1)) == 1
    assert analytic_bound(3, F(1, 2)) == F(27, 4)


@pytest.mark.parametrize("p", [F(0), F(1)])
def test_compatibility_is_certain_at_the_extremes(p):
    stats = compatibility_mc(l2_oracle(1, p), l2_oracle(2, p), SMALL_ENUMERATION, trials=20, n_values=[5])
    assert stats[0].survivors == 20
    assert stats[0].pair_rate == 1


def test_compatibility_pair_rate():
    stats = compatibility_mc(l2_oracle(1), l2_oracle(2), SMALL_ENUMERATION, trials=200, n_values=[2, 5], seed=3)
    assert [s.n for s in stats] == [2, 5]
    assert stats[1].pairs_checked == 800
    assert abs(stats[1].pair_rate - F(1, 2)) < F(1, 10)
    assert all(s.survivors <= s.trials for s in stats)
    again = compatibility_mc(l2_oracle(1), l2_oracle(2), SMALL_ENUMERATION, trials=200, n_values=[2, 5], seed=3)
    assert again == stats


def test_compatibility_rejections():
    with pytest.raises(MalformedRequest):
        compatibility_mc(l2_oracle(1), l2_oracle(2, F(1, 3)), SMALL_ENUMERATION, trials=1)
    with pytest.raises(MalformedRequest):
        compatibility_mc(l2_oracle(1, delta=F(2)), l2_oracle(2, delta=F(2)), SMALL_ENUMERATION, trials=1)
    linf = AdjacencyOracle(seed=1, delta=F(1), p=F(1, 2), metric=Metric.LINF)
    with pytest.raises(MalformedRequest):
        compatibility_mc(linf, linf, SMALL_ENUMERATION, trials=1)
    with pytest.raises(MalformedRequest):
        compatibility_mc(l2_oracle(1), l2_oracle(2), SMALL_ENUMERATION, trials=1, n_values=[6])


def test_compatibility_csv(tmp_path):
    stats = compatibility_mc(l2_oracle(1), l2_oracle(2), SMALL_ENUMERATION, trials=10, n_values=[3])
    path = tmp_path / "compatibility.csv"
    write_compatibility_csv(path, stats)
    with open(path) as f:
        rows = list(csv.DictReader(f))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[0]["n"] == "3"
    assert rows[0]["p_star"] == "1/2"


def test_delta_free_filter():
    kept = delta_free_filter(UniverseEnumerator(2), F(1), 20)
    assert len(kept) == 20
    assert all(squared_l2(a, b) != 1 for i, a in enumerate(kept) for b in kept[i + 1:])
    with pytest.raises(MalformedRequest):
        delta_free_filter(UniverseEnumerator(1), F(1), 3)


def test_delta_free_demo():
    report = delta_free_demo(UniverseEnumerator(2), F(1), 6)
    V = [make_point(p) for p in report["V"]]
    W = [make_point(p) for p in report["W"]]
    assert len(V) == len(W) == 6
    assert V[:-1] == W[:-1]
    assert not profiles_compatible(V, W)
    shifted = [(x + 3, y - 1) for x, y in V]
    assert profiles_compatible(V, shifted)


def test_distance_profile():
    triangle = [(F(0), F(0)), (F(3), F(4)), (F(3), F(0))]
    assert distance_profile(triangle) == [9, 16, 25]
    assert distance_profile(triangle[:1]) == []
