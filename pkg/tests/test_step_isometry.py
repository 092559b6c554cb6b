from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import DimensionMismatch, MalformedRequest
from exact_geometry import Metric
from step_isometry import (
    FiniteMap,
    Representation,
    check_guide_conditions,
    guide_pair_violations,
    check_lemma_conditions,
    check_lemma_conditions_nd,
    decompose,
    decompose_point,
    interval_step_isometry,
    is_step_isometry,
    step_violations,
)
from tests.strategies import points, positive_rationals, rationals


F = Fraction


@pytest.mark.parametrize("value, anchor, offset, q, r", [
    (F(7, 2), F(0), F(1), 3, F(1, 2)),
    (F(-1, 2), F(0), F(1), -1, F(1, 2)),
    (F(-1), F(0), F(1), -1, F(0)),
    (F(3), F(1), F(2, 3), 3, F(0)),
    (F(1, 3), F(1, 2), F(1, 4), -1, F(1, 12)),
])
def test_decompose(value, anchor, offset, q, r):
    rep = decompose(value, anchor, offset)
    assert (rep.q, rep.r) == (q, r)
    assert rep.value == value


@given(rationals(), rationals(), positive_rationals())
def test_decomposition_reassembles(value, anchor, offset):
    rep = decompose(value, anchor, offset)
    assert 0 <= rep.r < offset
    assert rep.value == value


def test_representative_must_be_in_range():
    with pytest.raises(ValueError):
        Representation(anchor=F(0), offset=F(1), q=0, r=F(1))


def test_decompose_point():
    decomposition = decompose_point((F(3, 2), F(-1, 4)), (F(0), F(0)), F(1))
    assert [(c.q, c.r) for c in decomposition.coords] == [(1, F(1, 2)), (-1, F(3, 4))]
    with pytest.raises(DimensionMismatch):
        decompose_point((F(1),), (F(0), F(0)), F(1))


def test_finite_map_rejects_collisions():
    with pytest.raises(MalformedRequest):
        FiniteMap((((F(0),), (F(0),)), ((F(0),), (F(1),))))
    with pytest.raises(MalformedRequest):
        FiniteMap((((F(0),), (F(0),)), ((F(1),), (F(0),))))
    with pytest.raises(DimensionMismatch):
        FiniteMap((((F(0),), (F(0), F(0))),))


def test_finite_map_operations():
    f = FiniteMap((((F(0),), (F(1),)), ((F(1),), (F(2),))))
    g = FiniteMap((((F(1),), (F(5),)), ((F(2),), (F(7),))))
    assert f.image((F(1),)) == (F(2),)
    assert (F(0),) in f and (F(2),) not in f
    assert f.inverse().image((F(1),)) == (F(0),)
    assert f.compose(g).pairs == (((F(0),), (F(5),)), ((F(1),), (F(7),)))
    with pytest.raises(MalformedRequest):
        f.image((F(9),))
    restored, delta, gamma = FiniteMap.from_json(f.to_json(F(1), F(3, 2)))
    assert restored == f
    assert (delta, gamma) == (F(1), F(3, 2))


@settings(max_examples=50)
@given(st.lists(points(2), min_size=1, max_size=8, unique=True), positive_rationals(), positive_rationals())
def test_scaling_is_a_step_isometry(pts, delta, gamma):
    scale = gamma / delta
    f = FiniteMap.from_function(lambda p: tuple(scale * c for c in p), pts)
    assert is_step_isometry(f, delta, gamma, Metric.LINF)
    assert is_step_isometry(f, delta, gamma, Metric.L2)


def test_step_violations_name_the_pair():
    f = FiniteMap((((F(0),), (F(0),)), ((F(1, 2),), (F(2),))))
    assert step_violations(f, F(1), F(1)) == [((F(0),), (F(1, 2),))]
    assert not is_step_isometry(f, F(1), F(1))


def test_conditions_are_not_necessary():
    # quotients match but the tie r(0) = r(1) = 0 is split on the image side
    f = FiniteMap((((F(0),), (F(0),)), ((F(1),), (F(3, 2),))))
    anchors = ((F(0),), (F(0),))
    assert is_step_isometry(f, F(1), F(1))
    assert not check_lemma_conditions(f, F(1), F(1), anchors)
    assert check_lemma_conditions(f, F(1), F(1), anchors, break_ties=True)


def test_conditions_catch_quotient_changes():
    f = FiniteMap((((F(0),), (F(0),)), ((F(1, 2),), (F(3, 2),))))
    assert not check_lemma_conditions(f, F(1), F(1), ((F(0),), (F(0),)))


def test_condition_anchor_checks():
    f = FiniteMap((((F(0),), (F(0),)),))
    with pytest.raises(MalformedRequest):
        check_lemma_conditions(f, F(1), F(1), ((F(1),), (F(0),)))
    with pytest.raises(MalformedRequest):
        check_lemma_conditions(f, F(1), F(1), ((F(0),), (F(1),)))
    with pytest.raises(DimensionMismatch):
        check_lemma_conditions(FiniteMap((((F(0), F(0)), (F(0), F(0))),)), F(1), F(1), ((F(0), F(0)), (F(0), F(0))))


def test_coordinatewise_conditions():
    f = FiniteMap.from_function(lambda p: (2 * p[0], 2 * p[1]), [(F(0), F(0)), (F(3, 2), F(-1, 3)), (F(1, 4), F(5, 2))])
    anchors = ((F(0), F(0)), (F(0), F(0)))
    assert check_lemma_conditions_nd(f, F(1), F(2), anchors)
    assert is_step_isometry(f, F(1), F(2))
    assert not check_lemma_conditions_nd(f, F(1), F(1), anchors)


LONG = interval_step_isometry(0, F(5, 2), 0, 4, 1, F(3, 2))


@pytest.mark.parametrize("x, image", [
    (F(0), F(0)),
    (F(1, 4), F(1, 2)),
    (F(1, 2), F(1)),
    (F(3, 4), F(5, 4)),
    (F(1), F(3, 2)),
    (F(9, 4), F(7, 2)),
])
def test_interval_map_values(x, image):
    assert LONG.blocks == 3
    assert (LONG.split, LONG.image_split) == (F(1, 2), F(1))
    assert LONG(x) == image
    assert LONG.inverse(image) == x


@settings(max_examples=50)
@given(st.lists(st.integers(min_value=1, max_value=79), max_size=10, unique=True))
def test_interval_map_is_a_step_isometry(numerators):
    pts = [(F(0),)] + [(F(n, 32),) for n in numerators]
    f = FiniteMap.from_function(LONG.on_point, pts)
    assert all(F(0) <= t[0] < F(4) for t in f.targets)
    assert is_step_isometry(f, F(1), F(3, 2))
    assert check_lemma_conditions(f, F(1), F(3, 2), ((F(0),), (F(0),)), break_ties=True)
    assert check_guide_conditions(f, LONG.on_point, F(1), F(3, 2), ((F(0),), (F(0),))) == []


def test_single_block_may_shrink():
    F_ = interval_step_isometry(0, 1, 0, F(1, 2), 1, 1)
    assert F_.blocks == 1
    assert F_(F(1, 2)) == F(1, 4)
    assert F_.inverse(F(1, 4)) == F(1, 2)
    with pytest.raises(ValueError):
        F_(F(1))
    with pytest.raises(ValueError):
        F_.inverse(F(1, 2))


@pytest.mark.parametrize("args", [
    (0, 3, 0, 2, 1, 1),
    (0, 2, 0, F(3, 2), 1, 1),
    (0, 1, 0, 1, 0, 1),
    (0, 1, 0, 1, 1, -1),
    (1, 1, 0, 1, 1, 1),
    (0, 1, 2, 1, 1, 1),
])
def test_interval_map_rejections(args):
    with pytest.raises(MalformedRequest):
        interval_step_isometry(*args)


def test_guide_conditions_flag_a_wrong_anchor():
    f = FiniteMap((((F(0),), (F(0),)), ((F(1, 2),), (F(3, 4),))))
    def shifted(p):
        return (LONG(p[0]) + F(1, 8),)

    problems = check_guide_conditions(f, shifted, F(1), F(3, 2), ((F(0),), (F(0),)))
    assert any("guide sends the anchor" in problem for problem in problems)


@settings(max_examples=50)
@given(
    st.lists(st.integers(min_value=1, max_value=79), max_size=8, unique=True),
    st.integers(min_value=1, max_value=79),
    st.integers(min_value=1, max_value=387).filter(lambda k: k % 97 != 0),
)
def test_new_pair_check_matches_the_whole_map(numerators, m, k):
    anchors = ((F(0),), (F(0),))
    pts = [(F(0),)] + [(F(n, 32),) for n in numerators]
    f = FiniteMap.from_function(LONG.on_point, pts)
    s, t = (F(m, 33),), (F(k, 97),)
    extended = FiniteMap(f.pairs + ((s, t),))
    triples = [(u, fu, LONG.on_point(u)) for u, fu in f.pairs]
    incremental = guide_pair_violations(triples, (s, t, LONG.on_point(s)), F(1), F(3, 2), anchors)
    assert (incremental == []) == (check_guide_conditions(extended, LONG.on_point, F(1), F(3, 2), anchors) == [])
    own = guide_pair_violations(triples, (s, LONG.on_point(s), LONG.on_point(s)), F(1), F(3, 2), anchors)
    assert own == []
