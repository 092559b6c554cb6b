from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from errors import MalformedRequest
from exact_geometry import Interval, Metric, Point, distance_interval, format_point, make_point, parse_rational
from step_isometry import FiniteMap


@dataclass(frozen=True)
class DiscrepancyReport:
    """Enclosure of D(x, y) = |d(x, y) - d(f(x), f(y))| under the Euclidean metric."""

    pair: tuple[Point, Point]
    image_pair: tuple[Point, Point]
    D: Interval

    def to_json(self) -> dict:
        return {
            "pair": [format_point(p) for p in self.pair],
            "image_pair": [format_point(p) for p in self.image_pair],
            "D": self.D.to_json(),
        }


def discrepancy(f: FiniteMap, x: Point, y: Point, precision: Fraction, metric: Metric = Metric.L2) -> DiscrepancyReport:
    """
    Enclose the discrepancy of x, y under f.

    Each distance is enclosed to half the precision, so the enclosure of D is
    at most `precision` wide.

    Raises:
        MalformedRequest: x or y is not in the domain of f
    """
    x, y = make_point(x), make_point(y)
    precision = parse_rational(precision)
    for point in (x, y):
        if point not in f:
            raise MalformedRequest(f"{format_point(point)} is not in the domain of the map")
    fx, fy = f.image(x), f.image(y)
    source = distance_interval(x, y, metric, precision / 2)
    target = distance_interval(fx, fy, metric, precision / 2)
    return DiscrepancyReport(pair=(x, y), image_pair=(fx, fy), D=abs(source - target))


def max_discrepancy(f: FiniteMap, precision: Fraction, metric: Metric = Metric.L2) -> DiscrepancyReport | None:
    """The pair whose discrepancy enclosure reaches highest, or None for maps with fewer than two points."""
    reports = [discrepancy(f, x, y, precision, metric) for x, y in combinations(f.sources, 2)]
    return max(reports, key=lambda report: report.D.hi, default=None)
