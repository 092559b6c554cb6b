from math import exp, isnan

import numpy as np
import pytest
from langfuse import Evaluation

from experiment import decay_slope, geometric_chi_square, within_three_sigma
from run_experiment import (
    GUIDED_EXPECTED,
    acceptance_items,
    evaluator,
    format_results,
    run_acceptance,
    scenario_back_and_forth,
    scenario_construction,
    scenario_guided,
    scenario_lemma_equivalence,
)


def test_chi_square_accepts_geometric_counts():
    counts = np.random.default_rng(0).geometric(1 / 8, size=2000)
    assert geometric_chi_square(counts, 1 / 8) > 0.001
    assert geometric_chi_square(counts, 1 / 2) < 1e-6
    with pytest.raises(ValueError):
        geometric_chi_square([], 1 / 8)


def test_three_sigma():
    assert within_three_sigma(50, 100, 0.5)
    assert not within_three_sigma(80, 100, 0.5)
    assert not within_three_sigma(0, 0, 0.5)


def test_decay_slope():
    n = [3, 5, 10, 20]
    assert decay_slope(n, [exp(-0.3 * k) for k in n]) == pytest.approx(-0.3)
    assert isnan(decay_slope(n, [0.5, 0, 0, 0]))


def test_lemma_equivalence_has_no_counterexamples():
    result = scenario_lemma_equivalence({"maps": 100}, 0, 1000)
    assert result["checked"] > 0
    assert result["counterexamples"] == 0


def test_construction_scenario():
    assert scenario_construction({"t_max": 3}, 0, 10_000)["failures"] == 0


def test_evaluator():
    failed = evaluator(input={"scenario": "x"}, output={"error": "boom"}, expected_output={})
    assert failed.value is False and failed.comment == "boom"
    assert evaluator(input={"scenario": "x"}, output={"p_value": 0.5}, expected_output={"p_value": 0.01}).value
    assert not evaluator(input={"scenario": "x"}, output={"violations": 0, "empty_intervals": 1}, expected_output={"violations": 0}).value
    guided = {"violations": 0, "empty_intervals": 0, "guide_condition_violations": 2, "guide_departures": 0}
    assert not evaluator(input={"scenario": "guided"}, output=guided, expected_output=GUIDED_EXPECTED).value


def test_quick_claims_sweep():
    results = run_acceptance(quick=True, only="claims")
    assert [r.name for r in results] == ["claims"]
    assert results[0].value
    assert "1/1 scenarios passed" in format_results(results)


@pytest.mark.slow
def test_quick_sweep_passes():
    results = run_acceptance(quick=True)
    assert all(r.value for r in results), format_results(results)


def test_format_results_counts():
    text = format_results([Evaluation(name="a", value=True), Evaluation(name="b", value=False)])
    assert "1/2 scenarios passed" in text


def test_guided_scenario_follows_the_guide():
    item = next(i for i in acceptance_items(quick=True, only="guided") if i["input"]["config"]["dimension"] == 1)
    output = scenario_guided({**item["input"], "steps": 5}, 0, 10_000)
    assert output["guide_followed"] == 10
    assert evaluator(input=item["input"], output=output, expected_output=item["expected_output"]).value


def test_quick_items_are_resized():
    items = acceptance_items(quick=True, only="back_and_forth")
    assert len(items) == 4
    assert all(i["input"]["steps"] == 15 for i in items)


def test_deletion_scenario_keeps_the_anchor():
    item = next(
        i for i in acceptance_items(only="back_and_forth")
        if i["input"]["config"].get("removed2") == [1] and i["input"]["config"]["dimension"] == 1
    )
    output = scenario_back_and_forth({**item["input"], "steps": 3}, 0, 10_000)
    assert output["violations"] == 0
    assert output["size"] == 7
