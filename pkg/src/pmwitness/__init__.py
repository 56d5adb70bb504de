"""Nonclassicality witnesses for the simplest prepare-and-measure scenario.

Four preparations and two binary-outcome tomographically complete
measurements, with each preparation represented by its coordinate pair of
outcome biases.  The package computes, from those operational statistics
alone, three mutually cross-checking witnesses of nonclassicality — the
Pusey inequality orbit, the Marvian inaccessible-information bound, and
the exact parity-preservation gap (a linear program) — together with
worst-case noise bounds, thresholds, ensemble verification, and the
relaxed parity-oblivious multiplexing analysis.

Modules: :mod:`pmwitness.geometry` (scenario representation and the
equivalence construction), :mod:`pmwitness.ontology` (ontological-model
linear programs), :mod:`pmwitness.witnesses` (closed-form witnesses and
bounds), :mod:`pmwitness.pom` (multiplexing game), :mod:`pmwitness.sweeps`
(noise ensembles, thresholds, curves) and :mod:`pmwitness.cli` (command
line).
"""

from .geometry import (
    DecompositionWeights,
    DegenerateScenarioError,
    InputDomainError,
    LABELS,
    ParityMixtures,
    PrepPoint,
    Scenario,
    ScenarioError,
    convex_hull,
    coords_from_probs,
    decomposition_weights,
    diagonal_intersection,
    ideal_points,
    ideal_scenario,
    noise_delta,
    op_distance,
    parity_mixtures,
    ray_polytope_exit,
)
from .ontology import (
    EpistemicModel,
    LinearProgram,
    LpSolution,
    OnticSpace,
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
from .pom import (
    CrossCheckError,
    PomOutcome,
    classical_brute_force,
    pom_analysis,
    pom_success,
)
from .sweeps import (
    CheckResult,
    NoiseEnsemble,
    RegionPreconditionError,
    SweepRow,
    VerificationReport,
    bisect_root,
    sample_scenarios,
    sweep_curves,
    threshold_root,
    verify_lemmas,
    verify_theorem_regions,
)
from .witnesses import (
    BoundConstants,
    WitnessReport,
    alpha3_delta_bound,
    alpha_ratio_delta_bound,
    alphas,
    beta_min_numeric,
    bound_constants,
    depolarizing_bounds,
    distinguishability,
    full_report,
    marvian_delta_bound,
    marvian_gamma,
    marvian_lower_bound,
    model_parity_gap,
    pusey_delta_bound,
    pusey_orbit_max,
    pusey_s,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # geometry
    "DecompositionWeights",
    "DegenerateScenarioError",
    "InputDomainError",
    "LABELS",
    "ParityMixtures",
    "PrepPoint",
    "Scenario",
    "ScenarioError",
    "convex_hull",
    "coords_from_probs",
    "decomposition_weights",
    "diagonal_intersection",
    "ideal_points",
    "ideal_scenario",
    "noise_delta",
    "op_distance",
    "parity_mixtures",
    "ray_polytope_exit",
    # ontology
    "EpistemicModel",
    "LinearProgram",
    "LpSolution",
    "OnticSpace",
    "ScenarioLpError",
    "brute_force_min_tv",
    "coarse_grain",
    "feasible_interval",
    "min_pair_tv",
    "min_parity_tv",
    "parity_gap",
    "pnc_feasible",
    "product_epistemic",
    "solve_lp",
    "tv_distance",
    # pom
    "CrossCheckError",
    "PomOutcome",
    "classical_brute_force",
    "pom_analysis",
    "pom_success",
    # sweeps
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
    # witnesses
    "BoundConstants",
    "WitnessReport",
    "alpha3_delta_bound",
    "alpha_ratio_delta_bound",
    "alphas",
    "beta_min_numeric",
    "bound_constants",
    "depolarizing_bounds",
    "distinguishability",
    "full_report",
    "marvian_delta_bound",
    "marvian_gamma",
    "marvian_lower_bound",
    "model_parity_gap",
    "pusey_delta_bound",
    "pusey_orbit_max",
    "pusey_s",
]
