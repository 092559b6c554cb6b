#!/usr/bin/env python3
"""
geograph - command-line entry point

Every subcommand reads a JSON run configuration, applies the global flags and
writes its results under --out. Exit codes: 0 on success, 2 when a search
budget ran out, 1 when a certified property failed or anything else went wrong.
"""

import argparse
import json
import logging
import os
import sys
import traceback
from dataclasses import replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

from config import RunConfig, load_config, make_handle, make_oracle, make_universe
from errors import BudgetExhausted, InvariantViolation
from exact_geometry import Metric, format_point, format_rational, make_point, parse_rational, squared_l2
from lazy_graph import enumerate_point, sample_larg, snapshot
from gec_engine import (
    WitnessRequest,
    build_gr,
    certify_path,
    check_threshold,
    construct_path,
    construction_log_lines,
    find_witness,
    replay_construction,
)
from step_isometry import interval_step_isometry
from back_and_forth import (
    ProductGuide,
    check_guide_anchor,
    run_workflow,
    write_certificate,
    write_transcript,
)
from euclid_noniso import (
    build_claim1_config,
    build_claim2_config,
    compatibility_mc,
    good_enumeration,
    random_claim_inputs,
    verify_claim1_chain,
    verify_claim2_chain,
    write_compatibility_csv,
)
from euclid_noniso.claim_one import MIN_SEPARATION
from euclid_noniso.inequalities import ClaimCertificate


logger = logging.getLogger("geograph")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_BUDGET = 2

# Snapshot size when the config names neither indices nor points
DEFAULT_SNAPSHOT_SIZE = 20

COMPAT_PREFIXES = (3, 5, 10, 20, 30)


def _write_json(path: Path, data: dict) -> None:
    path.write_text(json.dumps(data, sort_keys=True, indent=2))


def _banner(title: str) -> None:
    print("=" * 60)
    print(title)
    print("=" * 60)
    print()


def cmd_generate(config: RunConfig, out: Path) -> int:
    """Snapshot of the oracle's graph on the configured indices or points."""
    oracle = make_oracle(config)
    if config.get("points"):
        points = [make_point(p) for p in config["points"]]
        snap = sample_larg(points, oracle.delta, oracle.p, oracle.seed, oracle.metric)
    else:
        snap = snapshot(oracle, config.get("indices") or list(range(DEFAULT_SNAPSHOT_SIZE)))
    _write_json(out / "snapshot.json", snap.to_json())
    print(f"✅ Snapshot with {len(snap.vertices)} vertices and {len(snap.edges)} edges")
    return EXIT_OK


def cmd_build_gr(config: RunConfig, out: Path) -> int:
    """Deterministic construction up to R_{t_max}, its log, and the replay of the log."""
    metric = Metric(config["metric"])
    state = build_gr(
        make_universe(config),
        config["delta"],
        sigma=config["sigma"],
        t_max=config["t_max"],
        metric=metric,
        pair_scope=config["pair_scope"],
        budget=config["budget"],
        max_pairs=config["max_pairs"],
    )
    final = state["snapshot"]
    _write_json(out / "snapshot.json", final.to_json())
    (out / "construction_log.jsonl").write_text("".join(line + "\n" for line in construction_log_lines(state)))
    print(f"📊 R_{config['t_max']}: {len(final.vertices)} vertices, {len(final.edges)} edges, {len(state['processed_pairs'])} pairs")

    if not check_threshold(final, config["delta"], metric):
        raise InvariantViolation("The constructed graph has an edge of length delta or more", {"t_max": config["t_max"]})
    failures = replay_construction(state)
    if failures:
        raise InvariantViolation(f"Replay of the construction log failed: {failures[0]}", {"failures": failures})
    print("✅ Threshold and replay checks passed")
    return EXIT_OK


def cmd_witness(config: RunConfig, out: Path) -> int:
    """One witness search; NotFound is written out before exiting with the budget code."""
    request = config.get("request")
    if not request:
        raise ValueError("Config key 'request' is required for witness")
    oracle = make_oracle(config)
    req = WitnessRequest(
        x=request["x"],
        A=tuple(request.get("A", [])),
        B=tuple(request.get("B", [])),
        delta=oracle.delta,
        delta_prime=request["delta_prime"],
        max_trials=request.get("max_trials", config["budget"]),
    )
    result = find_witness(oracle, req)
    record = {
        "x": format_point(req.x),
        "A": [format_point(a) for a in req.A],
        "B": [format_point(b) for b in req.B],
        "delta": format_rational(req.delta),
        "delta_prime": format_rational(req.delta_prime),
        "found": result.found,
        "trials": result.trials,
    }
    if result.found:
        record["point"] = format_point(result.point)
        record["index"] = result.index
    _write_json(out / "witness.json", record)
    if not result.found:
        raise BudgetExhausted(f"No witness within {req.max_trials} trials", record)
    print(f"✅ Witness {format_point(result.point)} after {result.trials} trial(s)")
    return EXIT_OK


def cmd_distance_check(config: RunConfig, out: Path) -> int:
    """Shortest path between u and v with its exact certificate."""
    if "u" not in config or "v" not in config:
        raise ValueError("Config keys 'u' and 'v' are required for distance-check")
    oracle = make_oracle(config)
    path = construct_path(oracle, config["u"], config["v"], config["budget"])
    certificate = certify_path(oracle, path)
    _write_json(out / "path.json", certificate)
    checks = ("all_hops_adjacent", "all_hops_below_delta", "lower_bound_certified")
    if certificate["k"] != certificate["expected"] or not all(certificate[c] for c in checks):
        raise InvariantViolation("The path certificate failed", certificate)
    print(f"✅ Path of length {certificate['k']} certified")
    return EXIT_OK


def _run_and_record(config: RunConfig, out: Path, G, H, guide=None) -> int:
    try:
        final = run_workflow(G, H, config["steps"], config["budget"], guide=guide)
    except (BudgetExhausted, InvariantViolation) as e:
        write_transcript(out / "transcript.jsonl", e.context.get("transcript", []))
        if "certificate" in e.context:
            write_certificate(out / "certificate.json", e.context["certificate"])
        raise
    write_transcript(out / "transcript.jsonl", final["transcript"])
    write_certificate(out / "certificate.json", final["certificate"])
    certificate = final["certificate"]
    print(f"✅ Map of size {certificate['size']} with {certificate['edges']} edges, certificate valid")
    return EXIT_OK


def cmd_back_and_forth(config: RunConfig, out: Path) -> int:
    """Back-and-forth between the two configured graphs."""
    return _run_and_record(config, out, make_handle(config, 1), make_handle(config, 2))


def cmd_guided(config: RunConfig, out: Path) -> int:
    """
    Guided back-and-forth between [a, b)^n and [a2, b2)^n.

    The guide is the explicit interval step-isometry, applied to every coordinate.
    """
    interval = config.get("interval")
    if not interval:
        raise ValueError("Config key 'interval' with a, b, a2, b2 is required for guided")
    a, b, a2, b2 = (parse_rational(interval[key]) for key in ("a", "b", "a2", "b2"))
    n = config["dimension"]
    config = {**config, "region": [[a, b]] * n, "region2": [[a2, b2]] * n}
    F = interval_step_isometry(a, b, a2, b2, config["delta"], config["gamma"])
    guide = F if n == 1 else ProductGuide((F,) * n)
    G, H = make_handle(config, 1), make_handle(config, 2)
    check_guide_anchor(G, H, guide)
    return _run_and_record(config, out, G, H, guide=guide)


def _claim_certificate(x1, x2, epsilon, precision) -> ClaimCertificate:
    if squared_l2(x1, x2) > MIN_SEPARATION**2:
        return verify_claim1_chain(build_claim1_config(x1, x2, epsilon), precision)
    return verify_claim2_chain(build_claim2_config(x1, x2, epsilon), precision)


def cmd_euclid_claims(config: RunConfig, out: Path) -> int:
    """
    Inequality certificates for the discrepancy amplification constructions.

    The configured pair gets the long-pair construction when d(x1, x2) > 40 and
    the short-pair one otherwise. claims_samples random admissible inputs of
    each kind are added.
    """
    precision = config["precision"]
    x1 = make_point(config.get("x1", ["0", "0"]))
    x2 = make_point(config.get("x2", ["50", "0"]))
    inputs = [(x1, x2, config["epsilon"])]
    rng = np.random.default_rng(config["seed"])
    for _ in range(config["claims_samples"]):
        inputs.append(random_claim_inputs(rng, long_pair=True))
        inputs.append(random_claim_inputs(rng, long_pair=False))

    certificates = [_claim_certificate(x1, x2, epsilon, precision) for x1, x2, epsilon in inputs]
    _write_json(out / "claims.json", {
        "precision": format_rational(precision),
        "certificates": [c.to_json() for c in certificates],
    })
    invalid = [c for c in certificates if not c.valid]
    for c in certificates:
        print(f"  {'✓' if c.valid else '✗'} {c.claim}: {len(c.inequalities)} inequalities, min margin {format_rational(c.min_margin())}")
    if invalid:
        raise InvariantViolation(
            f"{len(invalid)} claim certificate(s) failed",
            {"failed": [[i.name for i in c.failed] for c in invalid]},
        )
    return EXIT_OK


def cmd_compat_mc(config: RunConfig, out: Path) -> int:
    """Survival of candidate isometries along a good enumeration of the first n_max universe points."""
    if config["dimension"] != 2:
        raise ValueError("Config key 'dimension' must be 2 for compat-mc")
    config = {**config, "metric": Metric.L2.value}
    G = make_oracle(config, 1)
    H = replace(G, seed=config["seed2"])
    points = [enumerate_point(G.universe, i) for i in range(config["n_max"])]
    enum = good_enumeration(points, G.delta, G.universe, config["budget"], Metric.L2)
    n_values = sorted({n for n in COMPAT_PREFIXES if n <= len(enum)} | {min(config["n_max"], len(enum))})
    stats = compatibility_mc(G, H, enum, config["trials"], n_values=n_values, seed=config["seed"])
    write_compatibility_csv(out / "compat.csv", stats)
    _write_json(out / "enumeration.json", enum.to_json())
    for s in stats:
        row = s.to_row()
        print(f"  n={row['n']:>3}  survivors={row['survivors']:>6}  empirical={row['empirical_rate']}  bound={row['analytic_bound']}")
    return EXIT_OK


COMMANDS: dict[str, Callable[[RunConfig, Path], int]] = {
    "generate": cmd_generate,
    "build-gr": cmd_build_gr,
    "witness": cmd_witness,
    "distance-check": cmd_distance_check,
    "back-and-forth": cmd_back_and_forth,
    "guided": cmd_guided,
    "euclid-claims": cmd_euclid_claims,
    "compat-mc": cmd_compat_mc,
}


def run_command(command: str, config_path: Optional[str] = None, overrides: Optional[dict] = None) -> int:
    """
    Run one subcommand and map its outcome to an exit code.

    Returns:
        int: 0 on success, 2 on an exhausted budget, 1 on any other failure
    """
    _banner(f"geograph - {command}")
    try:
        config = load_config(config_path, overrides)
        out = Path(config["output_path"])
        out.mkdir(parents=True, exist_ok=True)
        print(f"📂 Output: {out.resolve()}")
        print(f"📊 seed={config['seed']} delta={format_rational(config['delta'])} p={format_rational(config['p'])} metric={config['metric']}")
        print()
        code = COMMANDS[command](config, out)
    except BudgetExhausted as e:
        print(f"⏳ Budget exhausted: {e}", file=sys.stderr)
        logger.info("Budget context: %s", {k: v for k, v in e.context.items() if k != "transcript"})
        return EXIT_BUDGET
    except InvariantViolation as e:
        print(f"❌ Invariant violated: {e}", file=sys.stderr)
        traceback.print_exc()
        return EXIT_FAILURE
    except Exception as e:
        print(f"❌ Error running {command}: {e}", file=sys.stderr)
        traceback.print_exc()
        return EXIT_FAILURE
    print()
    print("=" * 60)
    return code


def configure_logging() -> None:
    level = os.getenv("GEOGRAPH_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[list[str]] = None):
    """Main entry point for the geograph command line."""
    parser = argparse.ArgumentParser(
        description='geograph - Infinite random geometric graphs: construction, witnesses and isomorphisms',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Snapshot of the first 20 vertices with the default oracle
  geograph generate --out out/generate

  # Back-and-forth between two graphs described by a config file
  geograph back-and-forth --config runs/bnf_2d.json --budget 100000

  # Guided run between [0,1) and [0,1/2)
  geograph guided --config runs/guided.json --out out/guided

  # Compatibility Monte Carlo with another seed
  geograph compat-mc --config runs/compat.json --seed 7
        """
    )

    parser.add_argument('command', choices=sorted(COMMANDS), help='Subcommand to run')
    parser.add_argument('--config', type=str, default=None, help='JSON run configuration')
    parser.add_argument('--seed', type=int, default=None, help='Oracle seed (overrides the config)')
    parser.add_argument('--out', type=str, default=None, help='Output directory (overrides the config)')
    parser.add_argument('--budget', type=int, default=None, help='Search budget per step (overrides the config)')

    args = parser.parse_args(argv)
    configure_logging()

    overrides = {"seed": args.seed, "output_path": args.out, "budget": args.budget}
    sys.exit(run_command(args.command, args.config, overrides))


if __name__ == '__main__':
    main()
