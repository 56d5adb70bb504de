"""Acceptance gate: one test and one printed verdict line per criterion.

Run with ``pytest -s tests/test_acceptance.py`` to see the verdict lines;
each test also fails loudly with the offending sub-checks listed.
"""

import json
import math
import time

import pytest

from pmwitness.cli import main
from pmwitness.geometry import (
    LABELS,
    PrepPoint,
    Scenario,
    decomposition_weights,
    ideal_scenario,
    parity_mixtures,
)
from pmwitness.ontology import (
    brute_force_min_tv,
    min_parity_tv,
    parity_gap,
    pnc_feasible,
)
from pmwitness.pom import classical_brute_force, pom_success
from pmwitness.sweeps import (
    NoiseEnsemble,
    sample_scenarios,
    threshold_root,
    verify_lemmas,
    verify_theorem_regions,
)
from pmwitness.witnesses import (
    distinguishability,
    marvian_delta_bound,
    marvian_gamma,
    pusey_s,
)

SQRT2 = math.sqrt(2.0)

EXAMPLE_DOCUMENT = {
    "version": "1",
    "noiseModel": "box",
    "preparations": {
        "00": {"counts": [855, 145, 818, 182]},
        "01": {"probs": [0.787, 0.11]},
        "10": {"coords": [-0.76, 0.564]},
        "11": {"counts": [230, 770, 146, 854]},
    },
}


def example_scenario() -> Scenario:
    return Scenario.from_mapping({
        "00": PrepPoint(0.71, 0.636), "01": PrepPoint(0.574, -0.78),
        "10": PrepPoint(-0.76, 0.564), "11": PrepPoint(-0.54, -0.708)})


def _check(failures: list, condition: bool, message: str) -> None:
    if not condition:
        failures.append(message)


def _finish(criterion: int, failures: list) -> None:
    print(f"CRITERION {criterion}: {'PASS' if not failures else 'FAIL'}")
    assert not failures, f"criterion {criterion}: " + "; ".join(failures)


def _bit_mixture(scenario: Scenario, labels: tuple) -> PrepPoint:
    a, b = (scenario.preps[label] for label in labels)
    return PrepPoint(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))


def test_criterion_1_ideal_scenario_witnesses():
    failures = []
    start = time.perf_counter()
    scenario = ideal_scenario()
    s = pusey_s(scenario, decomposition_weights(scenario))
    gamma = marvian_gamma(scenario)
    success = pom_success(scenario)
    elapsed = time.perf_counter() - start
    _check(failures, abs(s - (2.0 * SQRT2 - 2.0)) <= 1e-9,
           f"S = {s!r}, expected 2*sqrt(2)-2 ~= 0.828427 within 1e-9")
    _check(failures, abs(gamma - 0.25 / (2.0 + SQRT2)) <= 1e-9,
           f"gamma = {gamma!r}, expected 1/(4(2+sqrt(2))) ~= 0.073223 within 1e-9")
    _check(failures, abs(gamma - marvian_delta_bound(0.0)) <= 1e-9,
           f"gamma = {gamma!r} differs from the delta=0 bound")
    _check(failures, abs(success - math.cos(math.pi / 8.0) ** 2) <= 1e-9,
           f"POM success = {success!r}, expected cos^2(pi/8) ~= 0.853553 within 1e-9")
    _check(failures, elapsed < 1.0, f"runtime {elapsed:.3f} s, expected milliseconds")
    _finish(1, failures)


def test_criterion_2_noise_thresholds():
    failures = []
    start = time.perf_counter()
    roots = {name: threshold_root(name) for name in (
        "pusey", "marvian", "combined", "depolarizing_pusey",
        "depolarizing_combined")}
    elapsed = time.perf_counter() - start
    _check(failures, abs(roots["pusey"] - 0.0630) <= 1e-4,
           f"pusey root {roots['pusey']!r} not within 1e-4 of 0.0630")
    _check(failures, abs(roots["marvian"] - (SQRT2 - 1.0) / 4.0) <= 1e-9,
           f"marvian root {roots['marvian']!r} not within 1e-9 of (sqrt(2)-1)/4")
    _check(failures, 0.007 <= roots["combined"] <= 0.008,
           f"combined root {roots['combined']!r} outside [0.007, 0.008]")
    _check(failures, abs(roots["depolarizing_pusey"] - 0.072) <= 1e-3,
           f"depolarizing pusey root {roots['depolarizing_pusey']!r} "
           "not within 1e-3 of 0.072")
    _check(failures, 0.020 <= roots["depolarizing_combined"] <= 0.023,
           f"depolarizing combined root {roots['depolarizing_combined']!r} "
           "outside [0.020, 0.023]")
    _check(failures, elapsed < 1.0, f"runtime {elapsed:.3f} s, expected < 1 s")
    _finish(2, failures)


def test_criterion_3_linear_program_ground_truth():
    failures = []
    start = time.perf_counter()
    ideal = ideal_scenario()
    origin = Scenario.from_mapping({label: PrepPoint(0.0, 0.0) for label in LABELS})
    lp_value = min_parity_tv(ideal)
    scan_value = brute_force_min_tv(ideal, resolution=1e-3)
    ideal_feasible = pnc_feasible(ideal)
    origin_feasible = pnc_feasible(origin)
    origin_minimum = min_parity_tv(origin)
    elapsed = time.perf_counter() - start
    _check(failures, abs(lp_value - (SQRT2 - 1.0)) <= 1e-8,
           f"LP minimum {lp_value!r} not within 1e-8 of sqrt(2)-1")
    _check(failures, abs(scan_value - (SQRT2 - 1.0)) <= 4e-3,
           f"brute-force minimum {scan_value!r} not within 4e-3 of sqrt(2)-1")
    _check(failures, not ideal_feasible, "ideal scenario wrongly deemed feasible")
    _check(failures, origin_feasible, "all-origin scenario wrongly deemed infeasible")
    _check(failures, origin_minimum <= 1e-9,
           f"all-origin minimum {origin_minimum!r} not within 1e-9 of 0")
    _check(failures, elapsed < 1.0, f"runtime {elapsed:.3f} s, expected < 1 s")
    _finish(3, failures)


def test_criterion_4_worked_example():
    failures = []
    start = time.perf_counter()
    scenario = example_scenario()
    weights = decomposition_weights(scenario)
    mixtures = parity_mixtures(scenario)
    s = pusey_s(scenario, weights)
    elapsed = time.perf_counter() - start
    _check(failures, abs(weights.c.x - (-0.0356)) <= 0.002,
           f"c.x = {weights.c.x!r}, expected -0.0356 +- 0.002")
    _check(failures, abs(weights.c.y - (-0.1657)) <= 0.002,
           f"c.y = {weights.c.y!r}, expected -0.1657 +- 0.002")
    _check(failures, abs(weights.p - 0.4035) <= 0.002,
           f"p = {weights.p!r}, expected 0.4035 +- 0.002")
    _check(failures, abs(weights.q - 0.543) <= 0.002,
           f"q = {weights.q!r}, expected 0.543 +- 0.002")
    _check(failures, abs(weights.r - 0.193) <= 0.002,
           f"r = {weights.r!r}, expected 0.193 +- 0.002")
    _check(failures, weights.p_plus_prime == scenario.preps["11"],
           f"P+' = {weights.p_plus_prime!r}, expected the 11 preparation")
    _check(failures, abs(s - 0.628) <= 0.005, f"S = {s!r}, expected 0.628 +- 0.005")
    _check(failures, abs(mixtures.epsilon - 0.089) <= 0.001,
           f"epsilon = {mixtures.epsilon!r}, expected 0.089 +- 0.001")
    _check(failures, elapsed < 1.0, f"runtime {elapsed:.3f} s, expected milliseconds")
    _finish(4, failures)


def test_criterion_5_lemma_property_suites():
    failures = []
    start = time.perf_counter()
    for model in ("box", "depolarizing"):
        for delta in (0.01, 0.03, 0.05, 0.08):
            report = verify_lemmas(
                NoiseEnsemble(model=model, delta=delta, samples=10_000, seed=42))
            _check(failures, report.all_passed,
                   f"{model} delta={delta}: failed checks {report.failures!r}")
    elapsed = time.perf_counter() - start
    _check(failures, elapsed < 120.0, f"runtime {elapsed:.1f} s, expected < 2 min")
    _finish(5, failures)


def test_criterion_6_theorem_region_certification():
    failures = []
    start = time.perf_counter()
    box_low = verify_theorem_regions(
        NoiseEnsemble(model="box", delta=0.005, samples=10_000, seed=42))
    _check(failures,
           [c.name for c in box_low.checks] == ["pusey_verdict", "marvian_verdict",
                                                "parity_verdict"],
           f"box delta=0.005 applicable checks {[c.name for c in box_low.checks]!r}")
    _check(failures, box_low.all_passed,
           f"box delta=0.005 failures {box_low.failures!r}")
    depol = verify_theorem_regions(
        NoiseEnsemble(model="depolarizing", delta=0.015, samples=10_000, seed=42))
    _check(failures,
           [c.name for c in depol.checks] == ["pusey_verdict", "marvian_verdict",
                                              "parity_verdict"],
           f"depolarizing delta=0.015 applicable checks "
           f"{[c.name for c in depol.checks]!r}")
    _check(failures, depol.all_passed,
           f"depolarizing delta=0.015 failures {depol.failures!r}")
    box_high = verify_theorem_regions(
        NoiseEnsemble(model="box", delta=0.09, samples=10_000, seed=42))
    _check(failures, [c.name for c in box_high.checks] == ["marvian_verdict"],
           f"box delta=0.09 applicable checks {[c.name for c in box_high.checks]!r}")
    _check(failures, box_high.all_passed,
           f"box delta=0.09 failures {box_high.failures!r}")
    elapsed = time.perf_counter() - start
    _check(failures, elapsed < 300.0, f"runtime {elapsed:.1f} s, expected < 5 min")
    _finish(6, failures)


def test_criterion_7_multiplexing_consistency():
    failures = []
    _check(failures, classical_brute_force(0.0) == 0.75,
           f"classical bound {classical_brute_force(0.0)!r}, expected exactly 3/4")
    scenarios = sample_scenarios(
        NoiseEnsemble(model="box", delta=0.08, samples=10_000, seed=42))
    worst_identity = 0.0
    implication_breaks = 0
    for scenario in scenarios:
        success = pom_success(scenario)
        first = distinguishability(_bit_mixture(scenario, ("00", "01")),
                                   _bit_mixture(scenario, ("10", "11")))
        second = distinguishability(_bit_mixture(scenario, ("00", "10")),
                                    _bit_mixture(scenario, ("01", "11")))
        worst_identity = max(worst_identity,
                             abs(success - 0.5 * (first + second)))
        epsilon = parity_mixtures(scenario).epsilon
        if success > 0.75 + 0.25 * epsilon and parity_gap(scenario) <= 1e-9:
            implication_breaks += 1
    _check(failures, worst_identity <= 1e-9,
           f"distinguishability identity off by {worst_identity!r}")
    _check(failures, implication_breaks == 0,
           f"{implication_breaks} winning scenarios lack a positive parity gap")
    _finish(7, failures)


def test_criterion_8_deterministic_outputs(tmp_path, capsys):
    failures = []
    input_path = tmp_path / "input.json"
    input_path.write_text(json.dumps(EXAMPLE_DOCUMENT), encoding="utf-8")
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    code_a = main(["witness", "--input", str(input_path), "--output", str(first)])
    code_b = main(["witness", "--input", str(input_path), "--output", str(second)])
    _check(failures, code_a == 0 and code_b == 0,
           f"witness exit codes {code_a}, {code_b}")
    _check(failures, first.read_bytes() == second.read_bytes(),
           "witness reports differ across two runs")
    capsys.readouterr()
    verify_args = ["verify", "--noise-model", "box", "--delta", "0.02",
                   "--samples", "300", "--seed", "42"]
    code_a = main(verify_args)
    out_a = capsys.readouterr().out
    code_b = main(verify_args)
    out_b = capsys.readouterr().out
    _check(failures, code_a == 0 and code_b == 0,
           f"verify exit codes {code_a}, {code_b}")
    _check(failures, out_a == out_b, "verify outputs differ across two runs")
    _finish(8, failures)
