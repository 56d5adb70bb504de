"""Tests for the four-state ontic model and its linear programs."""

import math

import numpy as np
import pytest

from pmwitness.geometry import (
    InputDomainError,
    LABELS,
    PrepPoint,
    Scenario,
    ideal_points,
    ideal_scenario,
    parity_mixtures,
)
from pmwitness.ontology import (
    EpistemicModel,
    LinearProgram,
    ONTIC_STATES,
    OnticSpace,
    RESPONSE_X,
    RESPONSE_Y,
    ScenarioLpError,
    brute_force_min_tv,
    coarse_grain,
    feasible_interval,
    min_pair_tv,
    min_parity_tv,
    parity_gap,
    pnc_feasible,
    product_epistemic,
    solve_lp,
    tv_distance,
)
from pmwitness.witnesses import alphas
from pmwitness.geometry import decomposition_weights

SQRT2 = math.sqrt(2.0)

EXAMPLE_PREPS = {
    "00": (0.71, 0.636),
    "01": (0.574, -0.78),
    "10": (-0.76, 0.564),
    "11": (-0.54, -0.708),
}


def example_scenario() -> Scenario:
    return Scenario.from_mapping(
        {label: PrepPoint(x, y) for label, (x, y) in EXAMPLE_PREPS.items()})


def all_origin_scenario() -> Scenario:
    return Scenario.from_mapping({label: PrepPoint(0.0, 0.0) for label in LABELS})


def _random_box_scenario(rng: np.random.Generator, delta: float) -> Scenario:
    ideal = ideal_points()
    width = 2.0 * delta
    preps = {}
    for label in LABELS:
        point = ideal[label]
        preps[label] = PrepPoint(rng.uniform(point.x - width, point.x + width),
                                 rng.uniform(point.y - width, point.y + width))
    return Scenario.from_mapping(preps)


def _random_model(rng: np.random.Generator, scenario: Scenario) -> EpistemicModel:
    """Draw one reproducing distribution per preparation from its feasible slab."""
    mus = {}
    for label, point in scenario.preps.items():
        lo, hi = feasible_interval(point)
        t = rng.uniform(lo, hi)
        a, b = point.prob0x, point.prob0y
        mus[label] = (t, a - t, b - t, 1.0 - a - b + t)
    return EpistemicModel(mu=mus)


# ----------------------------------------------------------------- basics

def test_ontic_states_enumerate_both_outcome_pairs():
    assert ONTIC_STATES == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert RESPONSE_X == (1.0, 1.0, 0.0, 0.0)
    assert RESPONSE_Y == (1.0, 0.0, 1.0, 0.0)


def test_tv_distance_known_values():
    assert tv_distance((1.0, 0.0), (0.0, 1.0)) == pytest.approx(1.0)
    assert tv_distance((0.5, 0.5), (0.5, 0.5)) == 0.0
    assert tv_distance((0.7, 0.3), (0.4, 0.6)) == pytest.approx(0.3)


def test_tv_distance_validates_inputs():
    with pytest.raises(InputDomainError):
        tv_distance((0.5, 0.5), (0.5, 0.5, 0.0))
    with pytest.raises(InputDomainError):
        tv_distance((0.6, 0.6), (0.5, 0.5))
    with pytest.raises(InputDomainError):
        tv_distance((-0.1, 1.1), (0.5, 0.5))


def test_product_epistemic_reproduces_the_point():
    rng = np.random.default_rng(3)
    for _ in range(100):
        point = PrepPoint(*rng.uniform(-1, 1, size=2))
        mu = product_epistemic(point)
        assert sum(mu) == pytest.approx(1.0, abs=1e-12)
        assert sum(m * g for m, g in zip(mu, RESPONSE_X)) == pytest.approx(
            point.prob0x, abs=1e-12)
        assert sum(m * g for m, g in zip(mu, RESPONSE_Y)) == pytest.approx(
            point.prob0y, abs=1e-12)


def test_feasible_interval_endpoints_reproduce_the_point():
    rng = np.random.default_rng(5)
    for _ in range(100):
        point = PrepPoint(*rng.uniform(-1, 1, size=2))
        lo, hi = feasible_interval(point)
        assert lo <= hi + 1e-15
        a, b = point.prob0x, point.prob0y
        for t in (lo, hi):
            mu = (t, a - t, b - t, 1.0 - a - b + t)
            assert min(mu) >= -1e-12
            assert sum(mu) == pytest.approx(1.0, abs=1e-12)
            assert sum(m * g for m, g in zip(mu, RESPONSE_X)) == pytest.approx(a, abs=1e-12)
            assert sum(m * g for m, g in zip(mu, RESPONSE_Y)) == pytest.approx(b, abs=1e-12)


def test_epistemic_model_validates_and_reproduces():
    scenario = example_scenario()
    rng = np.random.default_rng(9)
    model = _random_model(rng, scenario)
    assert model.reproduces(scenario)
    assert not model.reproduces(ideal_scenario())
    with pytest.raises(InputDomainError):
        EpistemicModel(mu={"00": (0.5, 0.5, 0.0, 0.0)})
    with pytest.raises(InputDomainError):
        EpistemicModel(mu={label: (0.5, 0.6, 0.0, -0.1) for label in LABELS})


# --------------------------------------------------------------- LP plumbing

def test_solve_lp_reports_an_optimum():
    program = LinearProgram(objective=(1.0,), constraints_eq=(),
                            constraints_le=(((-1.0,), -3.0),), lower_bounds=(0.0,))
    solution = solve_lp(program)
    assert solution.status == "optimal"
    assert solution.optimum == pytest.approx(3.0, abs=1e-9)
    assert solution.solution[0] == pytest.approx(3.0, abs=1e-9)


def test_solve_lp_flags_infeasible_and_unbounded():
    conflicting = LinearProgram(objective=(1.0,),
                                constraints_eq=(((1.0,), 1.0), ((1.0,), 2.0)),
                                constraints_le=(), lower_bounds=(0.0,))
    assert solve_lp(conflicting).status == "infeasible"
    unbounded = LinearProgram(objective=(-1.0,), constraints_eq=(),
                              constraints_le=(), lower_bounds=(0.0,))
    assert solve_lp(unbounded).status == "unbounded"


# ----------------------------------------------------------- minimum parity TV

def test_min_parity_tv_of_ideal_scenario():
    assert min_parity_tv(ideal_scenario()) == pytest.approx(SQRT2 - 1.0, abs=1e-8)


def test_min_parity_tv_of_all_origin_scenario_vanishes():
    assert min_parity_tv(all_origin_scenario()) == pytest.approx(0.0, abs=1e-9)


def test_min_parity_tv_of_example_scenario():
    assert min_parity_tv(example_scenario()) == pytest.approx(
        0.31800000000000006, abs=1e-9)


def test_min_pair_tv_matches_parity_tv_for_balanced_weights():
    # The ideal scenario has p = q = 1/2, so both mixtures coincide.
    assert min_pair_tv(ideal_scenario()) == pytest.approx(SQRT2 - 1.0, abs=1e-8)


def test_min_pair_tv_of_example_scenario():
    assert min_pair_tv(example_scenario()) == pytest.approx(
        0.3139140037593985, abs=1e-9)


def test_parity_gap_subtracts_the_mixture_distance():
    scenario = example_scenario()
    epsilon = parity_mixtures(scenario).epsilon
    assert parity_gap(scenario) == pytest.approx(
        min_parity_tv(scenario) - epsilon, abs=1e-12)
    assert parity_gap(ideal_scenario()) == pytest.approx(SQRT2 - 1.0, abs=1e-8)


def test_parity_gap_is_nonnegative_on_random_scenarios():
    rng = np.random.default_rng(13)
    for _ in range(40):
        scenario = _random_box_scenario(rng, 0.07)
        assert parity_gap(scenario) >= -1e-9


def test_model_parity_tv_upper_bounds_the_lp_minimum():
    rng = np.random.default_rng(17)
    for _ in range(25):
        scenario = _random_box_scenario(rng, 0.06)
        minimum = min_parity_tv(scenario)
        for _ in range(4):
            model = _random_model(rng, scenario)
            plus = tuple(0.5 * (m0 + m1) for m0, m1 in
                         zip(model.mu["00"], model.mu["11"]))
            minus = tuple(0.5 * (m0 + m1) for m0, m1 in
                          zip(model.mu["01"], model.mu["10"]))
            assert tv_distance(plus, minus) >= minimum - 1e-9


def test_mixture_distance_sandwich_on_random_models():
    # Any reproducing model obeys the two-sided comparison between the
    # parity-mixture distance and the intersection-weighted pair distance.
    rng = np.random.default_rng(19)
    for _ in range(25):
        scenario = _random_box_scenario(rng, 0.05)
        weights = decomposition_weights(scenario)
        epsilon = parity_mixtures(scenario).epsilon
        alpha1, alpha2, alpha3 = alphas(scenario, weights, parity_mixtures(scenario))
        lower_lp = min_parity_tv(scenario) - epsilon
        assert lower_lp >= alpha1 * min_pair_tv(scenario) - alpha2 - 1e-9
        for _ in range(4):
            model = _random_model(rng, scenario)
            plus = tuple(0.5 * (m0 + m1) for m0, m1 in
                         zip(model.mu["00"], model.mu["11"]))
            minus = tuple(0.5 * (m0 + m1) for m0, m1 in
                          zip(model.mu["01"], model.mu["10"]))
            pair_p = tuple(weights.p * m0 + (1 - weights.p) * m1 for m0, m1 in
                           zip(model.mu["00"], model.mu["11"]))
            pair_q = tuple(weights.q * m0 + (1 - weights.q) * m1 for m0, m1 in
                           zip(model.mu["01"], model.mu["10"]))
            model_gap = tv_distance(plus, minus) - epsilon
            assert model_gap <= (alpha1 * tv_distance(pair_p, pair_q)
                                 + alpha3 + 1e-9)


# ------------------------------------------------------------- feasibility LP

def test_pnc_feasible_classifies_known_scenarios():
    assert not pnc_feasible(ideal_scenario())
    assert not pnc_feasible(example_scenario())
    assert pnc_feasible(all_origin_scenario())


def test_pnc_feasible_agrees_with_a_vanishing_minimum():
    scenario = all_origin_scenario()
    assert pnc_feasible(scenario)
    assert min_parity_tv(scenario) <= 1e-9


# ------------------------------------------------------------ brute-force scan

def test_brute_force_confirms_the_ideal_minimum():
    value = brute_force_min_tv(ideal_scenario(), resolution=1e-3)
    assert value == pytest.approx(SQRT2 - 1.0, abs=4e-3)


def test_brute_force_never_undercuts_the_lp():
    rng = np.random.default_rng(21)
    for _ in range(10):
        scenario = _random_box_scenario(rng, 0.05)
        lp = min_parity_tv(scenario)
        scan = brute_force_min_tv(scenario, resolution=2e-3)
        assert scan >= lp - 1e-9
        assert scan - lp <= 4 * 2e-3


def test_brute_force_supports_pair_weights():
    rng = np.random.default_rng(27)
    for _ in range(5):
        scenario = _random_box_scenario(rng, 0.05)
        weights = decomposition_weights(scenario)
        lp = min_pair_tv(scenario)
        scan = brute_force_min_tv(scenario, resolution=2e-3,
                                  weights=(weights.p, weights.q))
        assert scan >= lp - 1e-9
        assert scan - lp <= 4 * 2e-3


@pytest.mark.parametrize("resolution", [0.0, -1e-3, 0.2, float("nan")])
def test_brute_force_rejects_bad_resolutions(resolution):
    with pytest.raises(InputDomainError):
        brute_force_min_tv(ideal_scenario(), resolution=resolution)


# ------------------------------------------------------------- coarse-graining

def test_coarse_grain_merges_duplicated_deterministic_states():
    scenario = example_scenario()
    product = {label: product_epistemic(point)
               for label, point in scenario.preps.items()}
    # Split every deterministic state into a 0.3/0.7 pair of copies.
    mus = {label: (0.3 * mu[0], 0.7 * mu[0], 0.3 * mu[1], 0.7 * mu[1],
                   0.3 * mu[2], 0.7 * mu[2], 0.3 * mu[3], 0.7 * mu[3])
           for label, mu in product.items()}
    response_x = (1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0)
    response_y = (1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0)
    model = coarse_grain(scenario, mus, response_x, response_y)
    assert model.reproduces(scenario)
    for label in LABELS:
        assert model.mu[label] == pytest.approx(product[label], abs=1e-12)


def test_coarse_grain_handles_noisy_responses():
    point = PrepPoint(0.2, -0.3)
    scenario = Scenario.from_mapping({label: point for label in LABELS})
    mus = {label: (1.0,) for label in LABELS}
    model = coarse_grain(scenario, mus, (point.prob0x,), (point.prob0y,))
    assert model.reproduces(scenario)
    expected = product_epistemic(point)
    for label in LABELS:
        assert model.mu[label] == pytest.approx(expected, abs=1e-12)


def test_coarse_grain_contracts_mixture_distances():
    rng = np.random.default_rng(33)
    for _ in range(20):
        scenario = _random_box_scenario(rng, 0.05)
        split = rng.uniform(0.05, 0.95)
        product = {label: product_epistemic(point)
                   for label, point in scenario.preps.items()}
        mus = {label: (split * mu[0], (1 - split) * mu[0],
                       split * mu[1], (1 - split) * mu[1],
                       split * mu[2], (1 - split) * mu[2],
                       split * mu[3], (1 - split) * mu[3])
               for label, mu in product.items()}
        response_x = (1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0)
        response_y = (1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0)
        model = coarse_grain(scenario, mus, response_x, response_y)
        fine_plus = tuple(0.5 * (a + b) for a, b in zip(mus["00"], mus["11"]))
        fine_minus = tuple(0.5 * (a + b) for a, b in zip(mus["01"], mus["10"]))
        coarse_plus = tuple(0.5 * (a + b) for a, b in
                            zip(model.mu["00"], model.mu["11"]))
        coarse_minus = tuple(0.5 * (a + b) for a, b in
                             zip(model.mu["01"], model.mu["10"]))
        assert (tv_distance(coarse_plus, coarse_minus)
                <= tv_distance(fine_plus, fine_minus) + 1e-12)


def test_coarse_grain_rejects_bad_responses_and_shapes():
    scenario = example_scenario()
    product = {label: product_epistemic(point)
               for label, point in scenario.preps.items()}
    with pytest.raises(InputDomainError):
        coarse_grain(scenario, product, (1.0, 1.0, 0.0, 1.5), (1.0, 0.0, 1.0, 0.0))
    with pytest.raises(InputDomainError):
        coarse_grain(scenario, product, (1.0, 1.0, 0.0), (1.0, 0.0, 1.0, 0.0))
    broken = dict(product)
    broken["00"] = (1.0, 0.0, 0.0, 0.0)
    with pytest.raises(InputDomainError):
        coarse_grain(scenario, broken, RESPONSE_X, RESPONSE_Y)


def test_ontic_space_validates_its_tables():
    space = OnticSpace(states=ONTIC_STATES, response_x=RESPONSE_X,
                       response_y=RESPONSE_Y)
    assert space.states == ONTIC_STATES
    with pytest.raises(InputDomainError):
        OnticSpace(states=ONTIC_STATES, response_x=(1.0, 1.0, 0.0),
                   response_y=RESPONSE_Y)
