from dataclasses import dataclass, field
from fractions import Fraction

from exact_geometry import Interval, format_rational


RELATIONS = ("<", "<=", "=")


@dataclass(frozen=True)
class Inequality:
    """
    One certified step of an inequality chain, lhs <relation> rhs.

    Both sides are rational intervals; exact values are point intervals. A
    conditional inequality holds under the hypothesis about the unknown images
    stated in its name, not unconditionally. "<=" only records how the chain
    states the step: it holds, like "<", when the certified margin is positive.
    """

    name: str
    lhs: Interval
    rhs: Interval
    relation: str = "<"
    conditional: bool = False

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"relation must be one of {RELATIONS}, got {self.relation!r}")
        object.__setattr__(self, "lhs", Interval._coerce(self.lhs))
        object.__setattr__(self, "rhs", Interval._coerce(self.rhs))

    @property
    def margin(self) -> Interval:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        if self.relation == "=":
            return self.margin.lo == 0 and self.margin.hi == 0
        return self.margin.lo > 0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "relation": self.relation,
            "lhs": _interval_json(self.lhs),
            "rhs": _interval_json(self.rhs),
            "margin": _interval_json(self.margin),
            "conditional": self.conditional,
            "holds": self.holds,
        }


def _interval_json(value: Interval) -> str | list[str]:
    if value.lo == value.hi:
        return format_rational(value.lo)
    return value.to_json()


@dataclass(frozen=True)
class ClaimCertificate:
    """Every inequality checked for one construction, in chain order."""

    claim: str
    inputs: dict
    inequalities: tuple[Inequality, ...] = field(default_factory=tuple)

    @property
    def failed(self) -> list[Inequality]:
        return [i for i in self.inequalities if not i.holds]

    @property
    def valid(self) -> bool:
        return not self.failed

    def get(self, name: str) -> Inequality:
        for inequality in self.inequalities:
            if inequality.name == name:
                return inequality
        raise KeyError(name)

    def min_margin(self) -> Fraction:
        """Smallest certified lower margin over the inequalities other than equalities."""
        return min(i.margin.lo for i in self.inequalities if i.relation != "=")

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "inputs": self.inputs,
            "inequalities": [i.to_json() for i in self.inequalities],
            "valid": self.valid,
        }
