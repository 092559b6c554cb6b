"""
Monte Carlo estimate of how fast partial isomorphisms die along a good enumeration.

Any isomorphism between subgraphs of two geometric graphs on planar sets is
an isometry, fixed by the images of three non-collinear points. A trial draws
fresh outcomes of both graphs and one candidate isometry f whose image of v1
lies in the prefix, and counts how many consecutive pairs (v_i, v_{i+1}) are
compatible with (f(v_i), f(v_{i+1})): both edges or both non-edges. Each pair
is compatible with probability p* = p^2 + (1-p)^2, so a prefix of length n
survives with probability at most (p*)^(n-1), and with the n^3 choices of
image triple the bound becomes n^3 (p*)^(n-1).
"""

import csv
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from errors import MalformedRequest
from exact_geometry import Metric, Point, format_rational
from lazy_graph import AdjacencyOracle, adjacent
from euclid_noniso.good_enumeration import GoodEnumeration


logger = logging.getLogger(__name__)

# Rational rotations (a/c, b/c) from Pythagorean triples, identity first
ROTATIONS: tuple[tuple[Fraction, Fraction], ...] = (
    (Fraction(1), Fraction(0)),
    (Fraction(3, 5), Fraction(4, 5)),
    (Fraction(4, 5), Fraction(3, 5)),
    (Fraction(5, 13), Fraction(12, 13)),
    (Fraction(12, 13), Fraction(5, 13)),
    (Fraction(8, 17), Fraction(15, 17)),
    (Fraction(15, 17), Fraction(8, 17)),
    (Fraction(7, 25), Fraction(24, 25)),
    (Fraction(24, 25), Fraction(7, 25)),
    (Fraction(20, 29), Fraction(21, 29)),
    (Fraction(21, 29), Fraction(20, 29)),
    (Fraction(0), Fraction(1)),
)

CSV_COLUMNS = ("n", "trials", "survivors", "empirical_rate", "p_star", "analytic_bound")


def p_star(p: Fraction) -> Fraction:
    """Probability that a pair and its image at the same short distance agree."""
    p = Fraction(p)
    return p**2 + (1 - p) ** 2


def analytic_bound(n: int, p: Fraction) -> Fraction:
    return Fraction(n) ** 3 * p_star(p) ** (n - 1)


@dataclass(frozen=True)
class RationalIsometry:
    """x -> Qx + t with Q a rational rotation, optionally composed with a reflection."""

    cos: Fraction
    sin: Fraction
    reflect: bool
    shift: Point

    def linear(self, point: Point) -> Point:
        x, y = point
        if self.reflect:
            y = -y
        return (self.cos * x - self.sin * y, self.sin * x + self.cos * y)

    def __call__(self, point: Point) -> Point:
        qx = self.linear(point)
        return (qx[0] + self.shift[0], qx[1] + self.shift[1])

    @classmethod
    def pinned(cls, cos: Fraction, sin: Fraction, reflect: bool, source: Point, image: Point) -> "RationalIsometry":
        """The isometry with the given linear part sending source to image."""
        linear = cls(cos, sin, reflect, (Fraction(0), Fraction(0))).linear(source)
        return cls(cos, sin, reflect, (image[0] - linear[0], image[1] - linear[1]))


@dataclass(frozen=True)
class CompatibilityStats:
    n: int
    trials: int
    survivors: int
    pairs_checked: int
    pairs_compatible: int
    p_star: Fraction
    bound: Fraction

    @property
    def observed_compatible_fraction(self) -> Fraction:
        """Fraction of surviving trials."""
        return Fraction(self.survivors, self.trials) if self.trials else Fraction(0)

    @property
    def pair_rate(self) -> Fraction:
        return Fraction(self.pairs_compatible, self.pairs_checked) if self.pairs_checked else Fraction(0)

    def to_row(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "survivors": self.survivors,
            "empirical_rate": format_rational(self.observed_compatible_fraction),
            "p_star": format_rational(self.p_star),
            "analytic_bound": format_rational(self.bound),
        }


def _sub_seed(seed: int, trial: int, side: int) -> int:
    return int(np.random.SeedSequence([seed, trial, side]).generate_state(1, dtype=np.uint64)[0])


def compatibility_mc(
    G: AdjacencyOracle,
    H: AdjacencyOracle,
    enum: GoodEnumeration,
    trials: int,
    n_values: Sequence[int] | None = None,
    seed: int = 0,
) -> list[CompatibilityStats]:
    """
    Survival of candidate isometries along the prefixes of a good enumeration.

    Every trial re-seeds G and H with sub-seeds derived from (seed, trial), so
    trials are independent outcomes of the two random graphs. A trial of
    prefix length n survives when all n - 1 consecutive pairs are compatible.

    Args:
        G: Oracle of the source graph; its seed only enters through the sub-seeds
        H: Oracle of the target graph, same p and delta
        enum: Good enumeration of the shared point set
        trials: Trials per prefix length
        n_values: Prefix lengths; all of 3..len(enum) by default
        seed: Seed of the trial generator

    Returns:
        list: One CompatibilityStats per prefix length
    """
    if G.p != H.p or G.delta != H.delta:
        raise MalformedRequest("Both oracles need the same p and delta")
    if G.metric != Metric.L2 or H.metric != Metric.L2:
        raise MalformedRequest("Compatibility is measured under the Euclidean metric")
    if G.delta != enum.delta:
        raise MalformedRequest("The enumeration gap bound must equal delta")
    n_values = list(n_values) if n_values is not None else list(range(3, len(enum) + 1))
    if any(not 2 <= n <= len(enum) for n in n_values):
        raise MalformedRequest(f"Prefix lengths must lie in [2, {len(enum)}]")

    q = p_star(G.p)
    results = []
    for n in n_values:
        rng = np.random.default_rng([seed, n])
        prefix = enum.prefix(n)
        survivors = checked = compatible = 0
        for trial in range(trials):
            g = replace(G, seed=_sub_seed(G.seed, trial, 0))
            h = replace(H, seed=_sub_seed(H.seed, trial, 1))
            cos, sin = ROTATIONS[rng.integers(len(ROTATIONS))]
            f = RationalIsometry.pinned(cos, sin, bool(rng.integers(2)), prefix[0], prefix[rng.integers(n)])
            images = [f(v) for v in prefix]
            alive = True
            for i in range(n - 1):
                agree = adjacent(g, prefix[i], prefix[i + 1]) == adjacent(h, images[i], images[i + 1])
                checked += 1
                compatible += agree
                alive = alive and agree
            survivors += alive
        stats = CompatibilityStats(
            n=n,
            trials=trials,
            survivors=survivors,
            pairs_checked=checked,
            pairs_compatible=compatible,
            p_star=q,
            bound=analytic_bound(n, G.p),
        )
        logger.info("n=%d: %d/%d survivors, pair rate %.4f", n, survivors, trials, float(stats.pair_rate))
        results.append(stats)
    return results


def write_compatibility_csv(path: str | Path, stats: Sequence[CompatibilityStats]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in stats:
            writer.writerow(row.to_row())
