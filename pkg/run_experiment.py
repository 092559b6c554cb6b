import argparse
import logging
import sys
import time
from fractions import Fraction

import numpy as np
from dotenv import load_dotenv
from langfuse import Evaluation, get_client

load_dotenv()

from config import make_handle, validate_config
from errors import GeographError
from exact_geometry import Metric, squared_l2
from lazy_graph import AdjacencyOracle, UniverseEnumerator, enumerate_point
from gec_engine import WitnessRequest, build_gr, certify_path, check_threshold, construct_path, find_witness, replay_construction
from step_isometry import FiniteMap, check_lemma_conditions, decompose, interval_step_isometry, is_step_isometry
from back_and_forth import ProductGuide, check_guide_anchor, run_workflow
from euclid_noniso import (
  build_claim1_config,
  build_claim2_config,
  compatibility_mc,
  good_enumeration,
  p_star,
  random_claim_inputs,
  verify_claim1_chain,
  verify_claim2_chain,
)
from euclid_noniso.claim_one import MIN_SEPARATION
from experiment import geometric_chi_square, within_three_sigma


BACK_AND_FORTH_1D = {
  "dimension": 1, "universe": "lattice", "delta": "1/1", "gamma": "3/2", "p": "1/2", "p2": "1/3",
  "region": [["0", "100"]], "region2": [["0", "150"]],
}
BACK_AND_FORTH_2D = {
  "dimension": 2, "universe": "lattice", "delta": "1/1", "gamma": "3/2", "p": "1/2", "p2": "1/3",
  "region": [["0", "40"], ["0", "40"]], "region2": [["0", "60"], ["0", "60"]],
}
# The guide x -> 3x/2 spans 100 (and 40) blocks and maps each lattice onto the
# other. Complete graphs are the ones it is an isomorphism of.
GUIDED_1D = {**BACK_AND_FORTH_1D, "p": "1/1", "p2": "1/1"}
GUIDED_2D = {**BACK_AND_FORTH_2D, "p": "1/1", "p2": "1/1"}
GUIDED_EXPECTED = {"violations": 0, "guide_condition_violations": 0, "guide_departures": 0}

DATASET = [
  {"input": {"scenario": "back_and_forth", "config": BACK_AND_FORTH_1D, "steps": 100}, "expected_output": {"violations": 0}},
  {"input": {"scenario": "back_and_forth", "config": BACK_AND_FORTH_2D, "steps": 100}, "expected_output": {"violations": 0}},
  {"input": {"scenario": "guided", "config": GUIDED_1D, "interval": ["0", "100", "0", "150"], "steps": 100}, "expected_output": GUIDED_EXPECTED},
  {"input": {"scenario": "guided", "config": GUIDED_2D, "interval": ["0", "40", "0", "60"], "steps": 30}, "expected_output": GUIDED_EXPECTED},
  {"input": {"scenario": "lemma_equivalence", "maps": 1000}, "expected_output": {"counterexamples": 0}},
  {"input": {"scenario": "graph_distance", "pairs": 100}, "expected_output": {"failures": 0}},
  {"input": {"scenario": "construction", "t_max": 8}, "expected_output": {"failures": 0}},
  {"input": {"scenario": "witness_statistics", "seeds": 10_000}, "expected_output": {"p_value": 0.01}},
  {"input": {"scenario": "compatibility", "p": "1/4", "trials": 300}, "expected_output": {"within_3_sigma": True}},
  {"input": {"scenario": "compatibility", "p": "1/2", "trials": 300}, "expected_output": {"within_3_sigma": True, "survivors": 0}},
  {"input": {"scenario": "compatibility", "p": "3/4", "trials": 300}, "expected_output": {"within_3_sigma": True}},
  {"input": {"scenario": "claims", "samples": 10}, "expected_output": {"failures": 0}},
  {"input": {"scenario": "back_and_forth", "config": {**BACK_AND_FORTH_1D, "removed2": [1]}, "steps": 100}, "expected_output": {"violations": 0}},
  {"input": {"scenario": "back_and_forth", "config": {**BACK_AND_FORTH_2D, "removed2": [1]}, "steps": 100}, "expected_output": {"violations": 0}},
]

# Sizes used by --quick
QUICK = {"steps": 15, "maps": 200, "pairs": 10, "t_max": 5, "seeds": 2000, "trials": 60, "samples": 2}


def _violations(certificate: dict) -> int:
  return len(certificate["adjacency_violations"]) + len(certificate["floor_violations"]) + len(certificate["condition_violations"])


def _empty_intervals(transcript: list[dict]) -> int:
  """Steps where a free coordinate had a_j >= b_j."""
  count = 0
  for record in transcript:
    if record["direction"] == "base":
      continue
    fixed = set(record["fixed"])
    if any(Fraction(a) >= Fraction(b) for j, (a, b) in enumerate(zip(record["lower"], record["upper"])) if j not in fixed):
      count += 1
  return count


def _run_map(G, H, steps, budget, guide=None) -> dict:
  try:
    final = run_workflow(G, H, steps, budget, guide=guide)
  except GeographError as e:
    return {"error": str(e)}
  certificate = final["certificate"]
  output = {
    "size": certificate["size"],
    "violations": _violations(certificate),
    "empty_intervals": _empty_intervals(final["transcript"]),
  }
  if guide is not None:
    output["guide_followed"] = certificate["guide_followed"]
    output["guide_departures"] = sum(1 for record in final["transcript"] if record.get("guide_admissible") is False)
    output["guide_condition_violations"] = len(certificate["guide_condition_violations"])
  return output


def scenario_back_and_forth(input, seed, budget):
  """
  Back-and-forth between the two configured graphs.

  With "removed2": [1] the vertex of H at enumeration index 1 is deleted.
  Index 0 stays, as it anchors the map.
  """
  config = validate_config({**input["config"], "seed": seed})
  return _run_map(make_handle(config, 1), make_handle(config, 2), input["steps"], budget)


def scenario_guided(input, seed, budget):
  """Guided run with the interval step-isometry on every coordinate."""
  a, b, a2, b2 = input["interval"]
  config = validate_config({**input["config"], "seed": seed})
  G, H = make_handle(config, 1), make_handle(config, 2)
  F = interval_step_isometry(a, b, a2, b2, config["delta"], config["gamma"])
  guide = F if config["dimension"] == 1 else ProductGuide((F,) * config["dimension"])
  check_guide_anchor(G, H, guide)
  return _run_map(G, H, input["steps"], budget, guide=guide)


def _random_rational(rng, upper, den=12):
  return Fraction(int(rng.integers(0, upper * den)), den)


def _structured_map(rng, size, delta, gamma):
  """A map keeping quotients and the order of representatives, so the conditions hold."""
  values = sorted({_random_rational(rng, 6) for _ in range(size)})
  anchor = values[0]
  reps = {v: decompose(v, anchor, delta) for v in values}
  rs = sorted({rep.r for rep in reps.values()})
  ks = sorted(rng.choice(np.arange(1, 97), size=len(rs) - 1, replace=False).tolist())
  image_r = dict(zip(rs, [Fraction(0)] + [Fraction(k, 97) * gamma for k in ks]))
  w0 = _random_rational(rng, 6)
  return FiniteMap(tuple(((v,), (w0 + reps[v].q * gamma + image_r[reps[v].r],)) for v in values)), ((anchor,), (w0,))


def _increasing_map(rng, size):
  """An increasing map between two random sets."""
  values = sorted({_random_rational(rng, 6, den=997) for _ in range(size)})
  targets = sorted({_random_rational(rng, 9, den=991) for _ in range(size)})
  n = min(len(values), len(targets))
  pairs = tuple(((v,), (w,)) for v, w in zip(values[:n], targets[:n]))
  return FiniteMap(pairs), pairs[0]


def _general_position(f, anchor, delta, gamma):
  """Representatives pairwise distinct on both sides."""
  source = [decompose(v[0], anchor[0][0], delta).r for v in f.sources]
  target = [decompose(w[0], anchor[1][0], gamma).r for w in f.targets]
  return len(set(source)) == len(source) and len(set(target)) == len(target)


def scenario_lemma_equivalence(input, seed, budget):
  """Conditions imply step-isometry on every map; the converse on increasing maps in general position."""
  delta, gamma = Fraction(1), Fraction(3, 2)
  rng = np.random.default_rng(seed)
  counterexamples = checked = 0
  for i in range(input["maps"]):
    size = int(rng.integers(2, 13))
    f, anchor = _structured_map(rng, size, delta, gamma) if i % 2 == 0 else _increasing_map(rng, size)
    if len(f) < 2:
      continue
    checked += 1
    conditions = check_lemma_conditions(f, delta, gamma, anchor)
    isometry = is_step_isometry(f, delta, gamma)
    if conditions and not isometry:
      counterexamples += 1
    if i % 2 == 1 and isometry and not conditions and _general_position(f, anchor, delta, gamma):
      counterexamples += 1
  return {"checked": checked, "counterexamples": counterexamples}


def scenario_graph_distance(input, seed, budget):
  oracle = AdjacencyOracle(seed=seed, delta=Fraction(1), p=Fraction(1, 2), metric=Metric.LINF, universe=UniverseEnumerator(2))
  rng = np.random.default_rng(seed)
  failures = 0
  for _ in range(input["pairs"]):
    u = (_random_rational(rng, 10, den=8) - 5, _random_rational(rng, 10, den=8) - 5)
    along = Fraction(int(rng.integers(9, 80)), 8)
    across = Fraction(int(rng.integers(-int(along * 8), int(along * 8) + 1)), 8)
    v = (u[0] + along, u[1] + across)
    try:
      certificate = certify_path(oracle, construct_path(oracle, u, v, budget))
    except GeographError:
      failures += 1
      continue
    ok = certificate["k"] == certificate["expected"] and certificate["all_hops_adjacent"]
    ok = ok and certificate["all_hops_below_delta"] and certificate["lower_bound_certified"]
    failures += not ok
  return {"pairs": input["pairs"], "failures": failures}


def scenario_construction(input, seed, budget):
  state = build_gr(UniverseEnumerator(1), Fraction(1), t_max=input["t_max"], pair_scope="prefix", budget=budget)
  failures = replay_construction(state)
  threshold = check_threshold(state["snapshot"], Fraction(1), Metric.LINF)
  return {"vertices": len(state["snapshot"].vertices), "failures": len(failures) + (not threshold)}


def scenario_witness_statistics(input, seed, budget):
  """Trial counts of |A| = 2, |B| = 1 searches at p = 1/2 against Geometric(1/8)."""
  universe = UniverseEnumerator(1)
  req = WitnessRequest(
    x=(Fraction(0),),
    A=((Fraction(1, 4),), (Fraction(-1, 4),)),
    B=((Fraction(1, 8),),),
    delta=Fraction(1),
    delta_prime=Fraction(1, 4),
    max_trials=budget,
  )
  counts = []
  for s in range(seed, seed + input["seeds"]):
    oracle = AdjacencyOracle(seed=s, delta=Fraction(1), p=Fraction(1, 2), universe=universe)
    counts.append(find_witness(oracle, req).trials)
  return {"seeds": input["seeds"], "mean_trials": float(np.mean(counts)), "p_value": geometric_chi_square(counts, 1 / 8)}


def scenario_compatibility(input, seed, budget):
  p = Fraction(input["p"])
  universe = UniverseEnumerator(2)
  G = AdjacencyOracle(seed=seed, delta=Fraction(1), p=p, metric=Metric.L2, universe=universe)
  H = AdjacencyOracle(seed=seed + 1, delta=Fraction(1), p=p, metric=Metric.L2, universe=universe)
  enum = good_enumeration([enumerate_point(universe, i) for i in range(40)], Fraction(1), universe, budget)
  stats = compatibility_mc(G, H, enum, input["trials"], n_values=[40], seed=seed)[0]
  q = p_star(p)
  return {
    "pairs_checked": stats.pairs_checked,
    "pair_rate": float(stats.pair_rate),
    "p_star": float(q),
    "within_3_sigma": within_three_sigma(stats.pairs_compatible, stats.pairs_checked, float(q)),
    "survivors": stats.survivors,
    "analytic_bound": float(stats.bound),
  }


def scenario_claims(input, seed, budget):
  precision = Fraction(1, 10**12)
  rng = np.random.default_rng(seed)
  failures, margins = 0, []
  for _ in range(input["samples"]):
    for long_pair in (True, False):
      x1, x2, epsilon = random_claim_inputs(rng, long_pair)
      if squared_l2(x1, x2) > MIN_SEPARATION**2:
        certificate = verify_claim1_chain(build_claim1_config(x1, x2, epsilon), precision)
      else:
        certificate = verify_claim2_chain(build_claim2_config(x1, x2, epsilon), precision)
      failures += not certificate.valid
      margins.append(certificate.min_margin())
  return {"certificates": len(margins), "failures": failures, "min_margin": float(min(margins))}


SCENARIOS = {
  "back_and_forth": scenario_back_and_forth,
  "guided": scenario_guided,
  "lemma_equivalence": scenario_lemma_equivalence,
  "graph_distance": scenario_graph_distance,
  "construction": scenario_construction,
  "witness_statistics": scenario_witness_statistics,
  "compatibility": scenario_compatibility,
  "claims": scenario_claims,
}


def evaluator(*, input, output, expected_output, **kwargs):
  if "error" in output:
    return Evaluation(name=input["scenario"], value=False, comment=output["error"])
  passed = True
  for key, expected in expected_output.items():
    if key == "p_value":
      passed = passed and output[key] > expected
    else:
      passed = passed and output[key] == expected
  if "empty_intervals" in output:
    passed = passed and output["empty_intervals"] == 0
  return Evaluation(name=input["scenario"], value=passed, comment=str(output), metadata=output)


def acceptance_items(quick: bool = False, only: str | None = None) -> list[dict]:
  items = []
  for item in DATASET:
    input = dict(item["input"])
    if only and input["scenario"] != only:
      continue
    if quick:
      input.update({k: v for k, v in QUICK.items() if k in input})
    items.append({"input": input, "expected_output": item["expected_output"]})
  return items


def run_acceptance(seed: int = 0, budget: int = 100_000, quick: bool = False, only: str | None = None) -> list[Evaluation]:
  langfuse = get_client()

  def task(*, item, **kwargs):
    input = item["input"]
    start = time.perf_counter()
    try:
      output = SCENARIOS[input["scenario"]](input, seed, budget)
    except GeographError as e:
      output = {"error": str(e)}
    output["seconds"] = round(time.perf_counter() - start, 2)
    return output

  result = langfuse.run_experiment(
    name="geograph acceptance",
    description="Acceptance sweep" + (" (quick)" if quick else ""),
    data=acceptance_items(quick, only),
    task=task,
    evaluators=[evaluator],
    max_concurrency=1,
  )
  return [evaluation for item_result in result.item_results for evaluation in item_result.evaluations]


def format_results(results: list[Evaluation]) -> str:
  lines = ["=" * 60, "Acceptance sweep", "=" * 60]
  for r in results:
    lines.append(f"{'✅' if r.value else '❌'} {r.name:<20} {r.comment}")
  lines.append("=" * 60)
  lines.append(f"{sum(bool(r.value) for r in results)}/{len(results)} scenarios passed")
  return "\n".join(lines)


def main():
  parser = argparse.ArgumentParser(
    description='Run the geograph acceptance sweep'
  )

  parser.add_argument(
    '--seed',
    type=int,
    default=0,
    help='Seed shared by all scenarios'
  )

  parser.add_argument(
    '--budget',
    type=int,
    default=100_000,
    help='Search budget per step'
  )

  parser.add_argument(
    '--quick',
    action='store_true',
    help='Run every scenario at reduced size'
  )

  parser.add_argument(
    '--only',
    type=str,
    choices=sorted(SCENARIOS),
    default=None,
    help='Run a single scenario'
  )

  args = parser.parse_args()
  logging.basicConfig(level=logging.WARNING, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

  results = run_acceptance(args.seed, args.budget, args.quick, args.only)
  print(format_results(results))
  sys.exit(0 if all(r.value for r in results) else 1)


if __name__ == "__main__":
  main()
