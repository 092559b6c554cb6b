"""
Discrepancy doubling for a long pair in the Euclidean plane.

Given x1, x2 with d(x1, x2) = 2m > 40, x3 and x4 sit on the perpendicular
bisector of x1x2, both ends of a quadrilateral x1 x3 x2 x4 whose four sides
lie in (k - xi, k) with k = floor(m) + 1. If a step-isometry at level (1, 1)
stretched x1x2 by eps, the same quadrilateral in the image would have to be
flatter by at least 2*eps across x3x4. The source-side geometry is certified
exactly; the image side is certified as a chain conditional on that stretch.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from errors import BudgetExhausted, MalformedRequest
from exact_geometry import Interval, Point, floor_sqrt, format_point, format_rational, make_point, parse_rational, sqrt_interval, squared_l2
from euclid_noniso.inequalities import ClaimCertificate, Inequality


logger = logging.getLogger(__name__)

MIN_SEPARATION = 40
REFINEMENT_STEPS = 64


@dataclass(frozen=True)
class Claim1Config:
    x1: Point
    x2: Point
    x3: Point
    x4: Point
    epsilon: Fraction
    xi: Fraction
    k: int

    @property
    def m_squared(self) -> Fraction:
        """m = d(x1, x2)/2, squared; exact."""
        return squared_l2(self.x1, self.x2) / 4

    def m(self, precision: Fraction) -> Interval:
        return Interval.sqrt_of(self.m_squared, precision)

    def to_json(self) -> dict:
        return {
            "x1": format_point(self.x1),
            "x2": format_point(self.x2),
            "x3": format_point(self.x3),
            "x4": format_point(self.x4),
            "epsilon": format_rational(self.epsilon),
            "xi": format_rational(self.xi),
            "k": self.k,
        }


def build_claim1_config(x1: Point, x2: Point, epsilon: Fraction, xi: Fraction | None = None, check_separation: bool = True) -> Claim1Config:
    """
    Place x3, x4 so that k - xi < d(xi, xj) < k for i in {1, 2}, j in {3, 4}.

    With w the perpendicular of x2 - x1, x3 = M + t*w and x4 = M - t*w for the
    midpoint M and a rational t, which makes every squared side m^2 (1 + 4t^2).

    Args:
        x1: First point of the long pair
        x2: Second point of the long pair
        epsilon: Stretch of the pair, in (0, 1)
        xi: Slack of the sides, in (0, epsilon^2/(2k)); defaults to epsilon^2/(4k)
        check_separation: Refuse pairs at distance 40 or less

    Raises:
        MalformedRequest: A precondition fails
        BudgetExhausted: No rational t was certified
    """
    x1, x2 = make_point(x1), make_point(x2)
    epsilon = parse_rational(epsilon)
    if len(x1) != 2 or len(x2) != 2:
        raise MalformedRequest("Claim constructions live in the plane")
    if not 0 < epsilon < 1:
        raise MalformedRequest(f"epsilon must lie in (0, 1), got {epsilon}")
    separation = squared_l2(x1, x2)
    if check_separation and separation <= MIN_SEPARATION**2:
        raise MalformedRequest(f"d(x1, x2) must exceed {MIN_SEPARATION}")
    if separation == 0:
        raise MalformedRequest("x1 and x2 coincide")

    m_squared = separation / 4
    k = floor_sqrt(m_squared) + 1
    xi = epsilon**2 / (4 * k) if xi is None else parse_rational(xi)
    if not 0 < xi < epsilon**2 / (2 * k):
        raise MalformedRequest(f"xi must lie strictly inside (0, epsilon^2/(2k)), got {xi}")

    # squared sides m^2 (1 + 4t^2) must fall in ((k - xi)^2, k^2)
    low = max(Fraction(0), ((k - xi) ** 2 / m_squared - 1) / 4)
    high = (Fraction(k) ** 2 / m_squared - 1) / 4
    target = (low + high) / 2
    midpoint = tuple((a + b) / 2 for a, b in zip(x1, x2))
    w = (x1[1] - x2[1], x2[0] - x1[0])
    precision = (high - low) / 4
    for _ in range(REFINEMENT_STEPS):
        t = sqrt_interval(target, precision)[0]
        if low < t * t < high and t > 0:
            x3 = (midpoint[0] + t * w[0], midpoint[1] + t * w[1])
            x4 = (midpoint[0] - t * w[0], midpoint[1] - t * w[1])
            config = Claim1Config(x1=x1, x2=x2, x3=x3, x4=x4, epsilon=epsilon, xi=xi, k=k)
            logger.debug("Claim 1 configuration with k=%d, t=%s", k, t)
            return config
        precision /= 2
    raise BudgetExhausted(
        "Could not certify a rational placement of x3, x4",
        {"low": format_rational(low), "high": format_rational(high), "k": k},
    )


def verify_claim1_chain(config: Claim1Config, precision: Fraction) -> ClaimCertificate:
    """
    Certify the construction and both inequality chains.

    Source side (unconditional): the four sides, the choice of xi,
    r^2 >= (k - xi)^2 - m^2 >= k^2 - 2k*xi - m^2 >= k^2 - eps^2 - m^2, and
    r^2 < k^2 - m^2 < m^2/4, with r = d(x3, x4)/2.

    Image side (conditional on d(x1', x2') = 2m + eps and sides below k):
    (r')^2 <= k^2 - (m + eps/2)^2 <= k^2 - m^2 - m*eps <= r^2 - m*eps + eps^2 <= (r - eps)^2,
    so d(x3', x4') <= d(x3, x4) - 2*eps.

    Returns:
        ClaimCertificate listing every inequality with its margin
    """
    precision = parse_rational(precision)
    eps, xi, k = config.epsilon, config.xi, Fraction(config.k)
    m_squared = config.m_squared
    m = config.m(precision)
    r_squared = squared_l2(config.x3, config.x4) / 4
    r = Interval.sqrt_of(r_squared, precision)
    d34 = 2 * r

    inequalities = [
        Inequality("hypothesis: d(x1,x2) > 40", Fraction(MIN_SEPARATION**2), 4 * m_squared),
        Inequality("hypothesis: 2m + 1 <= m^2/4", 2 * m + 1, m_squared / 4, "<="),
        Inequality("0 < xi", 0, xi),
        Inequality("xi < eps^2/(2k)", xi, eps**2 / (2 * k)),
    ]
    for i, a in ((1, config.x1), (2, config.x2)):
        for j, b in ((3, config.x3), (4, config.x4)):
            side = squared_l2(a, b)
            inequalities.append(Inequality(f"(k - xi)^2 < d(x{i},x{j})^2", (k - xi) ** 2, side))
            inequalities.append(Inequality(f"d(x{i},x{j})^2 < k^2", side, k**2))

    inequalities += [
        Inequality("r^2 >= (k - xi)^2 - m^2", (k - xi) ** 2 - m_squared, r_squared, "<="),
        Inequality("(k - xi)^2 - m^2 >= k^2 - 2k*xi - m^2", k**2 - 2 * k * xi - m_squared, (k - xi) ** 2 - m_squared, "<="),
        Inequality("k^2 - 2k*xi - m^2 >= k^2 - eps^2 - m^2", k**2 - eps**2 - m_squared, k**2 - 2 * k * xi - m_squared, "<="),
        Inequality("r^2 < k^2 - m^2", r_squared, k**2 - m_squared),
        Inequality("k^2 - m^2 < m^2/4", k**2 - m_squared, m_squared / 4),
    ]

    image_m = m + eps / 2
    image_r_squared = k**2 - image_m * image_m
    inequalities += [
        Inequality("(r')^2 <= k^2 - (m + eps/2)^2 <= k^2 - m^2 - m*eps", image_r_squared, k**2 - m_squared - m * eps, "<=", conditional=True),
        Inequality("k^2 - m^2 - m*eps <= r^2 - m*eps + eps^2", k**2 - m_squared - m * eps, r_squared - m * eps + eps**2, "<=", conditional=True),
        Inequality("r^2 - m*eps + eps^2 <= (r - eps)^2", r_squared - m * eps + eps**2, (r - eps) * (r - eps), "<=", conditional=True),
    ]
    if image_r_squared.hi <= 0:
        # the stretched pair is too long for sides below k: no image quadrilateral
        inequalities.append(Inequality("k <= m + eps/2", k, image_m, "<=", conditional=True))
    else:
        image_r = Interval(max(Fraction(0), image_r_squared.lo), image_r_squared.hi).sqrt(precision)
        inequalities.append(Inequality("d(x3',x4') <= d(x3,x4) - 2eps", 2 * image_r, d34 - 2 * eps, "<=", conditional=True))

    certificate = ClaimCertificate(
        claim="claim1",
        inputs={**config.to_json(), "precision": format_rational(precision)},
        inequalities=tuple(inequalities),
    )
    logger.info("Claim 1 certificate: %d inequalities, %d failed", len(inequalities), len(certificate.failed))
    return certificate
