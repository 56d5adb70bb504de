"""Noise sweeps, witness thresholds, and randomized ensemble verification.

Two noise models around the ideal preparations:

- box: each preparation is displaced independently anywhere within
  operational distance delta of its ideal position, i.e. uniformly in the
  axis-aligned square of half-width 2*delta, clipped to the state square;
- depolarizing: each preparation is contracted toward the center,
  P = (1 - t) * ideal with t chosen so the operational distance stays
  at most delta.

This module evaluates the worst-case witness bounds on delta grids
(:func:`sweep_curves`), finds the delta thresholds where each witness is
no longer guaranteed (:func:`threshold_root`), and verifies the bound and
verdict claims on seeded random ensembles with the adversarial corner
configurations always included (:func:`verify_lemmas`,
:func:`verify_theorem_regions`).  Ensembles are deterministic: identical
parameters and seed reproduce identical reports.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import (
    InputDomainError,
    LABELS,
    PrepPoint,
    Scenario,
    ScenarioError,
    decomposition_weights,
    ideal_points,
    parity_mixtures,
)
from .ontology import parity_gap
from .witnesses import (
    PARITY_GAP_TOL,
    alpha3_delta_bound,
    alpha_ratio_delta_bound,
    alphas,
    beta_min_numeric,
    depolarizing_bounds,
    marvian_delta_bound,
    marvian_lower_bound,
    pusey_delta_bound,
    pusey_orbit_max,
    pusey_s,
)

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)

NOISE_MODELS = ("box", "depolarizing")
THRESHOLD_NAMES = ("pusey", "marvian", "combined",
                   "depolarizing_pusey", "depolarizing_combined")
DEFAULT_SAMPLES = 10_000
DEFAULT_SEED = 42
ROOT_TOL = 1e-12
LEMMA_TOL = 1e-9

_PUSEY_REGION_MAX = 0.5 / _SQRT2
_MARVIAN_REGION_MAX = (_SQRT2 - 1.0) / 4.0
_ALPHA3_REGION_MAX = 1.0 / (2.0 * _SQRT2 + 4.0 * _SQRT3)

__all__ = [
    "DEFAULT_SAMPLES",
    "DEFAULT_SEED",
    "LEMMA_TOL",
    "NOISE_MODELS",
    "ROOT_TOL",
    "THRESHOLD_NAMES",
    "CheckResult",
    "NoiseEnsemble",
    "RegionPreconditionError",
    "SweepRow",
    "VerificationReport",
    "bisect_root",
    "sample_scenarios",
    "sweep_curves",
    "threshold_root",
    "verify_lemmas",
    "verify_theorem_regions",
]


class RegionPreconditionError(ScenarioError):
    """The ensemble's noise level lies outside every claimed theorem region."""


@dataclass(frozen=True, slots=True)
class SweepRow:
    """Bound values at one noise level; None marks out-of-validity-region.

    The violation flags state whether the corresponding witness is
    certified positive throughout the noise set at this delta, under the
    sweep's noise model (parity_violation compares the gamma floor with
    the alpha-ratio ceiling).
    """

    delta: float
    pusey_bound: float | None
    marvian_bound: float | None
    alpha_ratio_bound: float | None
    alpha3_bound: float | None
    depol_pusey_bound: float | None
    depol_alpha_ratio_bound: float | None
    pusey_violation: bool
    marvian_violation: bool
    parity_violation: bool


@dataclass(frozen=True, slots=True)
class NoiseEnsemble:
    """A seeded random ensemble of noisy scenarios at one noise level.

    samples counts the random draws; the deterministic corner
    configurations (box: all 256 combinations of box corners;
    depolarizing: all 16 combinations of segment endpoints) are always
    generated in addition, ahead of the random part.
    """

    model: str
    delta: float
    seed: int = DEFAULT_SEED
    samples: int = DEFAULT_SAMPLES

    def __post_init__(self) -> None:
        if self.model not in NOISE_MODELS:
            raise InputDomainError(
                f"model must be one of {NOISE_MODELS}, got {self.model!r}"
            )
        if not isinstance(self.delta, (int, float)) or isinstance(self.delta, bool):
            raise InputDomainError(f"delta must be a real number, got {self.delta!r}")
        if not math.isfinite(self.delta) or not 0.0 <= self.delta < _PUSEY_REGION_MAX:
            raise InputDomainError(
                f"delta must lie in [0, 1/(2*sqrt(2))), got {self.delta}"
            )
        if not isinstance(self.samples, int) or isinstance(self.samples, bool) \
                or self.samples < 1:
            raise InputDomainError(f"samples must be a positive integer, got {self.samples!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) \
                or not 0 <= self.seed < 2 ** 64:
            raise InputDomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")


@dataclass(frozen=True, slots=True)
class CheckResult:
    """Outcome of one per-sample check over an ensemble.

    applied counts the samples the check ran on (a check outside its
    validity region is skipped); worst_margin is the smallest margin seen,
    None when never applied.  The margin convention is set by the
    verification function that produced the result.
    """

    name: str
    applied: int
    passed: int
    worst_margin: float | None


@dataclass(frozen=True, slots=True)
class VerificationReport:
    """Aggregated per-check outcomes for one ensemble."""

    ensemble: NoiseEnsemble
    scenario_count: int
    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed == c.applied for c in self.checks)

    @property
    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if c.passed != c.applied)


def bisect_root(fn: Callable[[float], float], lo: float, hi: float,
                tol: float = ROOT_TOL) -> float:
    """Bisection root of fn on [lo, hi], which must bracket a sign change."""
    if not lo < hi:
        raise InputDomainError(f"invalid bracket [{lo}, {hi}]")
    f_lo = fn(lo)
    f_hi = fn(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise InputDomainError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo = mid
            f_lo = f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def threshold_root(which: str) -> float:
    """Noise threshold below which the named witness stays certified.

    - "pusey": zero of the box Pusey floor (about 0.0630);
    - "marvian": zero of the gamma floor, exactly (sqrt(2) - 1)/4;
    - "combined": crossing of the gamma floor with the box alpha-ratio
      ceiling (about 0.0076), below which the parity gap is certified;
    - "depolarizing_pusey": zero of the depolarizing Pusey floor
      (about 0.0717);
    - "depolarizing_combined": crossing of the gamma floor with the
      depolarizing alpha-ratio ceiling (about 0.0240).
    """
    if which == "pusey":
        return bisect_root(pusey_delta_bound, 0.0, 0.1)
    if which == "marvian":
        return _MARVIAN_REGION_MAX
    if which == "combined":
        return bisect_root(
            lambda d: marvian_delta_bound(d) - alpha_ratio_delta_bound(d), 0.0, 0.05)
    if which == "depolarizing_pusey":
        return bisect_root(lambda d: depolarizing_bounds(d)[0], 0.0, 0.1)
    if which == "depolarizing_combined":
        return bisect_root(
            lambda d: marvian_delta_bound(d) - depolarizing_bounds(d)[1], 0.0, 0.05)
    raise InputDomainError(f"unknown threshold {which!r}; expected one of {THRESHOLD_NAMES}")


def sweep_curves(delta_max: float, steps: int, model: str = "box") -> list[SweepRow]:
    """Evaluate every bound on an even delta grid from 0 to delta_max.

    Produces steps rows with strictly increasing delta.  Bounds outside
    their validity region are None, never extrapolated.  For the
    depolarizing model the rows carry the depolarizing Pusey and
    alpha-ratio bounds in addition to the box bounds, and the violation
    flags follow the depolarizing bounds.

    Raises
    ------
    InputDomainError
        If delta_max is outside (0, 0.12] or steps < 2.
    """
    if model not in NOISE_MODELS:
        raise InputDomainError(f"model must be one of {NOISE_MODELS}, got {model!r}")
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 2:
        raise InputDomainError(f"steps must be an integer >= 2, got {steps!r}")
    if not isinstance(delta_max, (int, float)) or isinstance(delta_max, bool) \
            or not math.isfinite(delta_max) or not 0.0 < delta_max <= 0.12:
        raise InputDomainError(f"delta_max must lie in (0, 0.12], got {delta_max!r}")
    rows: list[SweepRow] = []
    for k in range(steps):
        delta = delta_max * k / (steps - 1)
        pusey = pusey_delta_bound(delta) if delta < _PUSEY_REGION_MAX else None
        marvian = marvian_delta_bound(delta) if delta <= _MARVIAN_REGION_MAX else None
        alpha_ratio = (alpha_ratio_delta_bound(delta)
                       if delta < _PUSEY_REGION_MAX else None)
        alpha3 = alpha3_delta_bound(delta) if delta < _ALPHA3_REGION_MAX else None
        if model == "depolarizing":
            dp_pusey, dp_ratio = depolarizing_bounds(delta)
            pusey_flag = dp_pusey > 0.0
            parity_flag = marvian is not None and marvian > dp_ratio
        else:
            dp_pusey = dp_ratio = None
            pusey_flag = pusey is not None and pusey > 0.0
            parity_flag = (marvian is not None and alpha_ratio is not None
                           and marvian > alpha_ratio)
        rows.append(SweepRow(
            delta=delta,
            pusey_bound=pusey,
            marvian_bound=marvian,
            alpha_ratio_bound=alpha_ratio,
            alpha3_bound=alpha3,
            depol_pusey_bound=dp_pusey,
            depol_alpha_ratio_bound=dp_ratio,
            pusey_violation=pusey_flag,
            marvian_violation=marvian is not None and marvian > 0.0,
            parity_violation=parity_flag,
        ))
    return rows


def _clip(value: float) -> float:
    return min(1.0, max(-1.0, value))


def sample_scenarios(ensemble: NoiseEnsemble) -> list[Scenario]:
    """Generate the ensemble's scenarios: corner configurations, then random.

    Box: every combination of the four clipped box corners per
    preparation (256 configurations), then ensemble.samples scenarios
    with each preparation uniform in its clipped box.  Depolarizing:
    every combination of segment endpoints t in {0, t_max} per
    preparation (16 configurations), then uniform t draws.  Draws consume
    the generator in label order, so reports are seed-deterministic.
    """
    ideal = ideal_points()
    rng = np.random.default_rng(ensemble.seed)
    scenarios: list[Scenario] = []
    if ensemble.model == "box":
        width = 2.0 * ensemble.delta
        corner_axes = []
        for label in LABELS:
            point = ideal[label]
            lo_x, hi_x = _clip(point.x - width), _clip(point.x + width)
            lo_y, hi_y = _clip(point.y - width), _clip(point.y + width)
            corner_axes.append(((lo_x, lo_y), (lo_x, hi_y), (hi_x, lo_y), (hi_x, hi_y)))
        for combo in itertools.product(*corner_axes):
            scenarios.append(Scenario.from_mapping(
                {label: PrepPoint(x, y) for label, (x, y) in zip(LABELS, combo)}))
        for _ in range(ensemble.samples):
            preps = {}
            for label in LABELS:
                point = ideal[label]
                x = rng.uniform(_clip(point.x - width), _clip(point.x + width))
                y = rng.uniform(_clip(point.y - width), _clip(point.y + width))
                preps[label] = PrepPoint(x, y)
            scenarios.append(Scenario.from_mapping(preps))
    else:
        t_max = min(1.0, 2.0 * _SQRT2 * ensemble.delta)
        for combo in itertools.product((0.0, t_max), repeat=4):
            scenarios.append(Scenario.from_mapping(
                {label: PrepPoint((1.0 - t) * ideal[label].x, (1.0 - t) * ideal[label].y)
                 for label, t in zip(LABELS, combo)}))
        for _ in range(ensemble.samples):
            preps = {}
            for label in LABELS:
                t = rng.uniform(0.0, t_max)
                preps[label] = PrepPoint((1.0 - t) * ideal[label].x,
                                         (1.0 - t) * ideal[label].y)
            scenarios.append(Scenario.from_mapping(preps))
    return scenarios


class _CheckAccumulator:
    """Running pass count and worst margin for one named check."""

    def __init__(self, name: str):
        self.name = name
        self.applied = 0
        self.passed = 0
        self.worst: float | None = None

    def record(self, margin: float, ok: bool) -> None:
        self.applied += 1
        if ok:
            self.passed += 1
        if self.worst is None or margin < self.worst:
            self.worst = margin

    def result(self) -> CheckResult:
        return CheckResult(self.name, self.applied, self.passed, self.worst)


def verify_lemmas(ensemble: NoiseEnsemble) -> VerificationReport:
    """Check every worst-case bound on each scenario of the ensemble.

    Per sample, with delta the ensemble noise level:

    - pusey_floor: S >= Pusey floor at delta (model's variant);
    - marvian_floor: gamma >= gamma floor at delta;
    - alpha_ratio_ceiling: alpha2/alpha1 <= ceiling at delta (model's
      variant);
    - alpha3_ceiling: alpha3 <= ceiling at delta (box model only);
    - recombination_ceiling: r <= 4 sqrt(3) delta/(1 - 2 sqrt(2) delta)
      (box) or sqrt(2) delta/(1 - 2 sqrt(2) delta) (depolarizing);
    - epsilon_ceiling: eps <= 2 delta (box) or delta (depolarizing);
    - parity_gap_nonnegative: the exact least parity gap (linear program)
      is >= 0.

    Margins are signed so a check passes iff margin >= -1e-9; checks
    whose bound is undefined at delta are skipped (applied = 0).
    """
    delta = ensemble.delta
    box = ensemble.model == "box"
    if box:
        pusey_ref = pusey_delta_bound(delta)
        ratio_ref = alpha_ratio_delta_bound(delta)
        r_ref = 4.0 * _SQRT3 * delta / (1.0 - 2.0 * _SQRT2 * delta)
        eps_ref = 2.0 * delta
    else:
        pusey_ref, ratio_ref = depolarizing_bounds(delta)
        r_ref = _SQRT2 * delta / (1.0 - 2.0 * _SQRT2 * delta)
        eps_ref = delta
    marvian_ref = marvian_delta_bound(delta) if delta <= _MARVIAN_REGION_MAX else None
    alpha3_ref = (alpha3_delta_bound(delta)
                  if box and delta < _ALPHA3_REGION_MAX else None)

    names = ("pusey_floor", "marvian_floor", "alpha_ratio_ceiling", "alpha3_ceiling",
             "recombination_ceiling", "epsilon_ceiling", "parity_gap_nonnegative")
    acc = {name: _CheckAccumulator(name) for name in names}
    scenarios = sample_scenarios(ensemble)
    for scenario in scenarios:
        weights = decomposition_weights(scenario)
        mixtures = parity_mixtures(scenario)
        s_value = pusey_s(scenario, weights)
        gamma = marvian_lower_bound(beta_min_numeric(scenario))
        alpha1, alpha2, alpha3 = alphas(scenario, weights, mixtures)
        gap = parity_gap(scenario)

        margin = s_value - pusey_ref
        acc["pusey_floor"].record(margin, margin >= -LEMMA_TOL)
        if marvian_ref is not None:
            margin = gamma - marvian_ref
            acc["marvian_floor"].record(margin, margin >= -LEMMA_TOL)
        margin = ratio_ref - alpha2 / alpha1
        acc["alpha_ratio_ceiling"].record(margin, margin >= -LEMMA_TOL)
        if alpha3_ref is not None:
            margin = alpha3_ref - alpha3
            acc["alpha3_ceiling"].record(margin, margin >= -LEMMA_TOL)
        margin = r_ref - weights.r
        acc["recombination_ceiling"].record(margin, margin >= -LEMMA_TOL)
        margin = eps_ref - mixtures.epsilon
        acc["epsilon_ceiling"].record(margin, margin >= -LEMMA_TOL)
        acc["parity_gap_nonnegative"].record(gap, gap >= -LEMMA_TOL)
    return VerificationReport(ensemble, len(scenarios),
                              tuple(acc[name].result() for name in names))


def verify_theorem_regions(ensemble: NoiseEnsemble) -> VerificationReport:
    """Check the certified verdicts on each scenario of the ensemble.

    A verdict claim applies when the ensemble's delta lies strictly below
    the matching threshold root (the model's Pusey root, the gamma root,
    and the model's combined root for the parity gap).  Applicable
    claims, per sample: Pusey orbit max > 0; gamma > 0; least parity gap
    > 1e-9 together with the other two verdicts.  Margins are the raw
    quantities (gap shifted by 1e-9); a check passes iff margin > 0.

    Raises
    ------
    RegionPreconditionError
        If delta lies outside every claimed region.
    """
    delta = ensemble.delta
    box = ensemble.model == "box"
    pusey_root = threshold_root("pusey" if box else "depolarizing_pusey")
    combined_root = threshold_root("combined" if box else "depolarizing_combined")
    marvian_root = threshold_root("marvian")
    check_pusey = delta < pusey_root
    check_marvian = delta < marvian_root
    check_parity = delta < combined_root
    if not (check_pusey or check_marvian or check_parity):
        raise RegionPreconditionError(
            f"delta={delta} lies outside every certified region "
            f"(largest threshold {marvian_root:.6f})"
        )
    names = []
    if check_pusey:
        names.append("pusey_verdict")
    if check_marvian:
        names.append("marvian_verdict")
    if check_parity:
        names.append("parity_verdict")
    acc = {name: _CheckAccumulator(name) for name in names}
    scenarios = sample_scenarios(ensemble)
    for scenario in scenarios:
        if check_pusey:
            orbit = pusey_orbit_max(scenario)
            acc["pusey_verdict"].record(orbit, orbit > 0.0)
        if check_marvian:
            gamma = marvian_lower_bound(beta_min_numeric(scenario))
            acc["marvian_verdict"].record(gamma, gamma > 0.0)
        if check_parity:
            margin = parity_gap(scenario) - PARITY_GAP_TOL
            acc["parity_verdict"].record(margin, margin > 0.0)
    return VerificationReport(ensemble, len(scenarios),
                              tuple(acc[name].result() for name in names))
