from fractions import Fraction

import numpy as np

from exact_geometry import Point
from euclid_noniso.claim_one import MIN_SEPARATION


# Coordinates are drawn with this denominator
GRID = 16


def _rational(rng: np.random.Generator, lo: int, hi: int) -> Fraction:
    return Fraction(int(rng.integers(lo * GRID, hi * GRID)), GRID)


def random_claim_inputs(rng: np.random.Generator, long_pair: bool) -> tuple[Point, Point, Fraction]:
    """
    Draw admissible (x1, x2, epsilon) for the long-pair or the short-pair construction.

    A long pair has d(x1, x2) > 40 through its first offset alone; a short pair
    keeps both offsets below 28, so 0 < d(x1, x2) < 40.
    """
    x1 = (_rational(rng, -100, 100), _rational(rng, -100, 100))
    if long_pair:
        offset = (_rational(rng, MIN_SEPARATION + 1, 3 * MIN_SEPARATION), _rational(rng, -MIN_SEPARATION, MIN_SEPARATION))
    else:
        offset = (Fraction(int(rng.integers(1, 28 * GRID)), GRID), _rational(rng, -28, 28))
    if rng.random() < 0.5:
        offset = (-offset[0], offset[1])
    x2 = (x1[0] + offset[0], x1[1] + offset[1])
    epsilon = Fraction(int(rng.integers(1, 20)), 20)
    return x1, x2, epsilon
