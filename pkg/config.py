"""
Run configuration: a JSON file of keys, overridden by command-line flags.

Rationals are "num/den" strings throughout. Keys ending in 2 describe the
target side of two-graph commands and fall back to the unsuffixed key.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Optional, TypedDict

from exact_geometry import Metric, parse_rational
from lazy_graph import AdjacencyOracle, LatticeUniverse, UniverseEnumerator
from back_and_forth import InfiniteGraphHandle


logger = logging.getLogger(__name__)

UNIVERSE_KINDS = ("grid", "lattice")


class RunConfig(TypedDict, total=False):
    """Configuration of a geograph command."""
    dimension: int
    metric: str
    universe: str
    delta: Fraction
    gamma: Fraction
    p: Fraction
    p2: Fraction
    seed: int
    seed2: int
    steps: int
    budget: int
    trials: int
    region: Optional[list[list[Fraction]]]
    region2: Optional[list[list[Fraction]]]
    removed: list[int]
    removed2: list[int]
    output_path: str
    indices: list[int]
    points: list[list[str]]
    t_max: int
    pair_scope: str
    sigma: list[int]
    max_pairs: int
    request: dict
    u: list[str]
    v: list[str]
    interval: dict
    x1: list[str]
    x2: list[str]
    epsilon: Fraction
    precision: Fraction
    n_max: int
    claims_samples: int


DEFAULTS: RunConfig = {
    "dimension": 1,
    "metric": "linf",
    "universe": "grid",
    "delta": Fraction(1),
    "p": Fraction(1, 2),
    "seed": 0,
    "steps": 10,
    "budget": 100_000,
    "trials": 1000,
    "region": None,
    "removed": [],
    "output_path": "out",
    "t_max": 3,
    "pair_scope": "prefix",
    "sigma": [],
    "max_pairs": 50_000,
    "epsilon": Fraction(1, 10),
    "precision": Fraction(1, 10**12),
    "n_max": 40,
    "claims_samples": 1,
}

RATIONAL_KEYS = ("delta", "gamma", "p", "p2", "epsilon", "precision")
NATURAL_KEYS = ("dimension", "steps", "budget", "trials", "t_max", "max_pairs", "n_max", "claims_samples")


def _region(value, dimension: int, key: str):
    if value is None:
        return None
    try:
        region = [[parse_rational(lo), parse_rational(hi)] for lo, hi in value]
    except (TypeError, ValueError) as e:
        raise ValueError(f"Config key '{key}' must be a list of [lo, hi] pairs: {e}")
    if len(region) != dimension:
        raise ValueError(f"Config key '{key}' has {len(region)} sides for dimension {dimension}")
    return region


def validate_config(raw: dict) -> RunConfig:
    """
    Fill defaults, parse rationals and check ranges.

    Raises:
        ValueError: A key is missing, malformed or out of range; the message names it
    """
    config: RunConfig = {**DEFAULTS, **{k: v for k, v in raw.items() if v is not None}}
    for key in RATIONAL_KEYS:
        if key in config:
            try:
                config[key] = parse_rational(config[key])
            except ValueError as e:
                raise ValueError(f"Config key '{key}': {e}")
    for key in NATURAL_KEYS:
        if not isinstance(config[key], int) or isinstance(config[key], bool) or config[key] < 0:
            raise ValueError(f"Config key '{key}' must be a non-negative integer, got {config[key]!r}")
    if config["dimension"] < 1:
        raise ValueError("Config key 'dimension' must be positive")
    config.setdefault("gamma", config["delta"])
    config.setdefault("p2", config["p"])
    config.setdefault("seed2", config["seed"] + 1)
    for key in ("delta", "gamma"):
        if config[key] <= 0:
            raise ValueError(f"Config key '{key}' must be positive")
    for key in ("p", "p2"):
        if not 0 <= config[key] <= 1:
            raise ValueError(f"Config key '{key}' must lie in [0, 1]")
    try:
        config["metric"] = Metric(config["metric"]).value
    except ValueError:
        raise ValueError(f"Config key 'metric' must be one of {[m.value for m in Metric]}")
    if config["universe"] not in UNIVERSE_KINDS:
        raise ValueError(f"Config key 'universe' must be one of {UNIVERSE_KINDS}")
    config["region"] = _region(config["region"], config["dimension"], "region")
    config["region2"] = _region(config.get("region2", config["region"]), config["dimension"], "region2")
    config.setdefault("removed2", [])
    if config["universe"] == "lattice" and (config["region"] is None or config["region2"] is None):
        raise ValueError("Config key 'universe' = 'lattice' needs 'region' and 'region2'")
    return config


def load_config(path: Optional[str | Path] = None, overrides: Optional[dict] = None) -> RunConfig:
    """
    Read a JSON config file and apply flag overrides.

    Args:
        path: JSON file, or None for defaults only
        overrides: Values from the command line; None entries are ignored

    Returns:
        RunConfig: The validated configuration
    """
    raw = {}
    if path is not None:
        with open(path) as f:
            raw = json.load(f)
        if not isinstance(raw, dict):
            raise ValueError(f"Config file {path} must hold a JSON object")
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    config = validate_config(raw)
    logger.debug("Loaded config: %s", config)
    return config


def make_universe(config: RunConfig, side: int = 1) -> UniverseEnumerator:
    """Universe of one side; a lattice is laid out against that side's threshold."""
    suffix = "" if side == 1 else "2"
    region = config[f"region{suffix}"]
    fields = {
        "dimension": config["dimension"],
        "region": None if region is None else tuple(tuple(bounds) for bounds in region),
        "removed": frozenset(config.get(f"removed{suffix}", [])),
    }
    if config["universe"] == "lattice":
        return LatticeUniverse(**fields, offset=config["delta"] if side == 1 else config["gamma"])
    return UniverseEnumerator(**fields)


def make_oracle(config: RunConfig, side: int = 1) -> AdjacencyOracle:
    """Oracle of the source graph (side 1) or the target graph (side 2)."""
    if side == 1:
        return AdjacencyOracle(seed=config["seed"], delta=config["delta"], p=config["p"], metric=config["metric"], universe=make_universe(config, 1))
    return AdjacencyOracle(seed=config["seed2"], delta=config["gamma"], p=config["p2"], metric=config["metric"], universe=make_universe(config, 2))


def make_handle(config: RunConfig, side: int = 1) -> InfiniteGraphHandle:
    return InfiniteGraphHandle.from_oracle(make_oracle(config, side))
