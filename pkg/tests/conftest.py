from fractions import Fraction

import pytest

from exact_geometry import Metric
from lazy_graph import AdjacencyOracle, UniverseEnumerator


@pytest.fixture
def line_oracle():
    return AdjacencyOracle(seed=7, delta=Fraction(1), p=Fraction(1, 2), metric=Metric.LINF, universe=UniverseEnumerator(1))


@pytest.fixture
def plane_oracle():
    return AdjacencyOracle(seed=11, delta=Fraction(1), p=Fraction(1, 2), metric=Metric.LINF, universe=UniverseEnumerator(2))
