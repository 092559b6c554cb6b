import json
from fractions import Fraction

import pytest

from config import load_config, make_handle, make_oracle, make_universe, validate_config
from lazy_graph import LatticeUniverse, UniverseEnumerator


F = Fraction

LATTICE_RUN = {
    "universe": "lattice",
    "delta": "1/1",
    "gamma": "3/2",
    "p": "1/2",
    "p2": "1/3",
    "region": [["0", "100"]],
    "region2": [["0", "150"]],
}


def test_defaults_fill_the_target_side():
    config = validate_config({"seed": 4, "delta": "3/2", "p": "1/3"})
    assert config["delta"] == config["gamma"] == F(3, 2)
    assert config["p"] == config["p2"] == F(1, 3)
    assert config["seed2"] == 5
    assert config["metric"] == "linf"
    assert config["region"] is None and config["region2"] is None
    assert config["removed2"] == []


def test_region2_falls_back_to_region():
    config = validate_config({"dimension": 2, "region": [["0", "1"], ["-1", "1/2"]]})
    assert config["region2"] == [[F(0), F(1)], [F(-1), F(1, 2)]]


@pytest.mark.parametrize("raw, key", [
    ({"delta": "0"}, "delta"),
    ({"gamma": "-1"}, "gamma"),
    ({"p": "3/2"}, "p"),
    ({"p": 0.5}, "p"),
    ({"metric": "l1"}, "metric"),
    ({"universe": "hex"}, "universe"),
    ({"steps": -1}, "steps"),
    ({"budget": True}, "budget"),
    ({"dimension": 0}, "dimension"),
    ({"dimension": 2, "region": [["0", "1"]]}, "region"),
    ({"region": [["0"]]}, "region"),
    ({"universe": "lattice"}, "universe"),
])
def test_invalid_keys_are_named(raw, key):
    with pytest.raises(ValueError, match=key):
        validate_config(raw)


def test_load_config_applies_overrides(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"seed": 3, "delta": "1/2", "budget": 500}))
    config = load_config(path, {"seed": 9, "budget": None})
    assert config["seed"] == 9
    assert config["budget"] == 500
    assert config["delta"] == F(1, 2)
    assert load_config()["steps"] == 10


def test_load_config_needs_an_object(tmp_path):
    path = tmp_path / "run.json"
    path.write_text("[1, 2]")
    with pytest.raises(ValueError):
        load_config(path)


def test_lattice_sides_use_their_thresholds():
    config = validate_config(LATTICE_RUN)
    source, target = make_universe(config, 1), make_universe(config, 2)
    assert isinstance(source, LatticeUniverse) and isinstance(target, LatticeUniverse)
    assert (source.offset, target.offset) == (F(1), F(3, 2))
    assert target.region == ((F(0), F(150)),)


def test_oracles_and_handles():
    config = validate_config({**LATTICE_RUN, "universe": "grid", "seed": 2, "removed2": [1]})
    G, H = make_oracle(config, 1), make_oracle(config, 2)
    assert (G.seed, G.delta, G.p) == (2, F(1), F(1, 2))
    assert (H.seed, H.delta, H.p) == (3, F(3, 2), F(1, 3))
    assert type(H.universe) is UniverseEnumerator
    assert H.universe.removed == frozenset({1})
    handle = make_handle(config, 2)
    assert handle.delta == F(3, 2)
    assert handle.dimension == 1
