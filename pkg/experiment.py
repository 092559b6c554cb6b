from math import sqrt
from typing import Sequence

import numpy as np
from scipy import stats


# Bins with a smaller expected count are merged into the tail
MIN_EXPECTED = 5


def geometric_chi_square(trial_counts: Sequence[int], q: float) -> float:
  """p-value of a chi-square fit of trial counts (1, 2, ...) to Geometric(q)."""
  counts = np.asarray(trial_counts)
  n = len(counts)
  if n == 0:
    raise ValueError("No trial counts")
  observed, expected = [], []
  k = 1
  while n * (1 - q) ** (k - 1) * q >= MIN_EXPECTED:
    observed.append(int(np.sum(counts == k)))
    expected.append(n * (1 - q) ** (k - 1) * q)
    k += 1
  observed.append(int(np.sum(counts >= k)))
  expected.append(n * (1 - q) ** (k - 1))
  if len(observed) < 2:
    raise ValueError("Too few trial counts for a chi-square fit")
  return float(stats.chisquare(observed, expected).pvalue)


def within_three_sigma(successes: int, trials: int, p: float) -> bool:
  if trials == 0:
    return False
  return abs(successes - trials * p) <= 3 * sqrt(trials * p * (1 - p))


def decay_slope(n_values: Sequence[int], rates: Sequence[float]) -> float:
  """Slope of log(rate) against n over the strictly positive rates."""
  points = [(n, r) for n, r in zip(n_values, rates) if r > 0]
  if len(points) < 2:
    return float("nan")
  x, y = zip(*points)
  slope, _ = np.polyfit(np.asarray(x, dtype=float), np.log(np.asarray(y, dtype=float)), 1)
  return float(slope)
