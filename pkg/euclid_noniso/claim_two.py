"""
Moving a discrepancy onto a long pair in the Euclidean plane.

For x1, x2 with m = d(x1, x2) < 40 and k = 40, four points x3, x4, x5, x6
are placed so that x3, x5 sit behind x1 and x4, x6 ahead of x2, all at
distance just above k, with x3x5 and x4x6 just below k. Then
d(x3, x4) <= m + sqrt(3)k + eps/4 while a step-isometry at level (1, 1) that
stretches x1x2 by eps must push x3', x4' to at least sqrt(3)k + m + eps apart.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from errors import BudgetExhausted, MalformedRequest
from exact_geometry import Interval, Metric, Point, distance_interval, format_point, format_rational, make_point, parse_rational, sqrt_interval, squared_l2
from euclid_noniso.inequalities import ClaimCertificate, Inequality


logger = logging.getLogger(__name__)

K = 40
REFINEMENT_STEPS = 64

UPPER_PAIRS = ((1, 3), (1, 5), (2, 4), (2, 6))
LOWER_PAIRS = ((3, 5), (4, 6))
LONG_PAIRS = ((3, 4), (5, 6))


@dataclass(frozen=True)
class Claim2Config:
    points: tuple[Point, ...]
    epsilon: Fraction
    c: Fraction
    k: int = K

    def point(self, i: int) -> Point:
        """x_i, 1-based."""
        return self.points[i - 1]

    @property
    def m_squared(self) -> Fraction:
        return squared_l2(self.point(1), self.point(2))

    def squared(self, i: int, j: int) -> Fraction:
        return squared_l2(self.point(i), self.point(j))

    def to_json(self) -> dict:
        return {
            **{f"x{i}": format_point(p) for i, p in enumerate(self.points, start=1)},
            "epsilon": format_rational(self.epsilon),
            "c": format_rational(self.c),
            "k": self.k,
        }


def _constraint_failures(config: Claim2Config) -> list[str]:
    k, c = config.k, config.c
    failures = [f"upper {i},{j}" for i, j in UPPER_PAIRS if not k**2 < config.squared(i, j) < (k + c) ** 2]
    failures += [f"lower {i},{j}" for i, j in LOWER_PAIRS if not (k - c) ** 2 < config.squared(i, j) < k**2]
    if not config.squared(3, 4) < config.squared(5, 6):
        failures.append("difference")
    else:
        d34 = distance_interval(config.point(3), config.point(4), Metric.L2, c / 64)
        if not (d34.lo + c) ** 2 > config.squared(5, 6):
            failures.append("difference")
    return failures


def build_claim2_config(x1: Point, x2: Point, epsilon: Fraction, c: Fraction | None = None) -> Claim2Config:
    """
    Construct x3..x6 around a short pair.

    The frame is x2 - x1 and its perpendicular, scaled by a rational
    approximation of m. Targets are the middles of the allowed ranges:
    sides k + c/2, short sides k - c/2, and x6 pushed c/4 further out than x4
    so that d(x3, x4) < d(x5, x6). The approximation is refined until every
    constraint holds exactly.

    Args:
        x1: First point of the short pair
        x2: Second point of the short pair
        epsilon: Stretch of the pair, in (0, 1)
        c: Slack of the distances; defaults to epsilon/32

    Raises:
        MalformedRequest: A precondition fails
        BudgetExhausted: No placement was certified
    """
    x1, x2 = make_point(x1), make_point(x2)
    epsilon = parse_rational(epsilon)
    if len(x1) != 2 or len(x2) != 2:
        raise MalformedRequest("Claim constructions live in the plane")
    if not 0 < epsilon < 1:
        raise MalformedRequest(f"epsilon must lie in (0, 1), got {epsilon}")
    m_squared = squared_l2(x1, x2)
    if not 0 < m_squared < K**2:
        raise MalformedRequest(f"d(x1, x2) must lie in (0, {K})")
    c = epsilon / 32 if c is None else parse_rational(c)
    if not c > 0:
        raise MalformedRequest(f"c must be positive, got {c}")
    if not Fraction(10, 3) * K * c + c**2 <= K * epsilon / 4:
        raise MalformedRequest(f"c = {c} is too large for epsilon = {epsilon}")
    if not _below_projection_bound(c, epsilon, c / 1024):
        raise MalformedRequest(f"c must stay below (2 - sqrt(3))epsilon/8, got {c}")

    d = (x2[0] - x1[0], x2[1] - x1[1])
    half_base = (K - c / 2) / 2
    precision = c / 1024
    for _ in range(REFINEMENT_STEPS):
        m = sqrt_interval(m_squared, precision)[0]
        e = (d[0] / m, d[1] / m)
        n = (-d[1] / m, d[0] / m)
        s = sqrt_interval((K + c / 2) ** 2 - half_base**2, precision)[0]

        def at(origin: Point, along: Fraction, across: Fraction) -> Point:
            return (origin[0] + along * e[0] + across * n[0], origin[1] + along * e[1] + across * n[1])

        points = (
            x1,
            x2,
            at(x1, -s, half_base),
            at(x2, s, half_base),
            at(x1, -s, -half_base),
            at(x2, s + c / 4, -half_base),
        )
        config = Claim2Config(points=points, epsilon=epsilon, c=c)
        failures = _constraint_failures(config)
        if not failures:
            logger.debug("Claim 2 configuration certified at precision %s", precision)
            return config
        precision /= 2
    raise BudgetExhausted("Could not certify a placement of x3..x6", {"failures": failures, "c": format_rational(c)})


def _below_projection_bound(c: Fraction, epsilon: Fraction, precision: Fraction) -> bool:
    sqrt3 = Interval.sqrt_of(3, precision)
    return ((2 - sqrt3) * (epsilon / 8)).lo > c


def verify_claim2_chain(config: Claim2Config, precision: Fraction) -> ClaimCertificate:
    """
    Certify the construction and the chain for the pairs (3, 4) and (5, 6).

    Source side: d(xi, xj) <= m + c + sqrt(3(k^2 + (10/3)kc + c^2))
    <= m + c + sqrt(3(k^2 + k*eps/4)) < m + c + sqrt(3)(k + eps/8) < m + sqrt(3)k + eps/4.

    Image side (conditional on d(x1', x2') = m + eps and the extremal
    configuration): d(xi', xj') >= sqrt(3)k + m + eps >= d(xi, xj) + 3eps/4.

    Returns:
        ClaimCertificate listing every inequality with its margin
    """
    precision = parse_rational(precision)
    eps, c, k = config.epsilon, config.c, Fraction(config.k)
    m_squared = config.m_squared
    m = Interval.sqrt_of(m_squared, precision)
    sqrt3 = Interval.sqrt_of(3, precision)
    extremal = Interval.sqrt_of(3 * (k**2 + Fraction(10, 3) * k * c + c**2), precision)
    relaxed = Interval.sqrt_of(3 * (k**2 + k * eps / 4), precision)

    inequalities = [
        Inequality("hypothesis: d(x1,x2) < 40", m_squared, k**2),
        Inequality("0 < c", 0, c),
        Inequality("10c/3 + c^2 <= k*eps/4", Fraction(10, 3) * c + c**2, k * eps / 4, "<="),
        Inequality("(10/3)kc + c^2 <= k*eps/4", Fraction(10, 3) * k * c + c**2, k * eps / 4, "<="),
        Inequality("c < (2 - sqrt3)eps/8", c, (2 - sqrt3) * (eps / 8)),
        Inequality("s^2 = (k+c)^2 - (k-c)^2/4 = 3/4(k^2 + 10kc/3 + c^2)", (k + c) ** 2 - (k - c) ** 2 / 4, Fraction(3, 4) * (k**2 + Fraction(10, 3) * k * c + c**2), "="),
    ]
    for i, j in UPPER_PAIRS:
        inequalities.append(Inequality(f"k^2 < d(x{i},x{j})^2", k**2, config.squared(i, j)))
        inequalities.append(Inequality(f"d(x{i},x{j})^2 < (k+c)^2", config.squared(i, j), (k + c) ** 2))
    for i, j in LOWER_PAIRS:
        inequalities.append(Inequality(f"(k-c)^2 < d(x{i},x{j})^2", (k - c) ** 2, config.squared(i, j)))
        inequalities.append(Inequality(f"d(x{i},x{j})^2 < k^2", config.squared(i, j), k**2))

    d34 = distance_interval(config.point(3), config.point(4), Metric.L2, precision)
    d56 = distance_interval(config.point(5), config.point(6), Metric.L2, precision)
    inequalities += [
        Inequality("d(x3,x4)^2 < d(x5,x6)^2", config.squared(3, 4), config.squared(5, 6)),
        Inequality("d(x5,x6) < d(x3,x4) + c", d56, d34 + c),
        Inequality("d(x3,x4) > 40", k, d34),
    ]

    for (i, j), d in zip(LONG_PAIRS, (d34, d56)):
        inequalities += [
            Inequality(f"d(x{i},x{j}) <= m + c + sqrt(3(k^2 + (10/3)kc + c^2))", d, m + c + extremal, "<="),
            Inequality(f"[{i},{j}] m + c + sqrt(3(k^2 + (10/3)kc + c^2)) <= m + c + sqrt(3(k^2 + k*eps/4))", m + c + extremal, m + c + relaxed, "<="),
            Inequality(f"[{i},{j}] m + c + sqrt(3(k^2 + k*eps/4)) < m + c + sqrt3(k + eps/8)", m + c + relaxed, m + c + sqrt3 * (k + eps / 8)),
            Inequality(f"[{i},{j}] m + c + sqrt3(k + eps/8) < m + sqrt3*k + eps/4", m + c + sqrt3 * (k + eps / 8), m + sqrt3 * k + eps / 4),
            Inequality(f"d(x{i}',x{j}') >= sqrt3*k + m + eps >= d(x{i},x{j}) + 3eps/4", d + Fraction(3, 4) * eps, sqrt3 * k + m + eps, "<=", conditional=True),
        ]

    certificate = ClaimCertificate(
        claim="claim2",
        inputs={**config.to_json(), "precision": format_rational(precision)},
        inequalities=tuple(inequalities),
    )
    logger.info("Claim 2 certificate: %d inequalities, %d failed", len(inequalities), len(certificate.failed))
    return certificate
