"""Closed-form nonclassicality witnesses and their noise-robustness bounds.

Three operational witnesses for the four-preparation, two-measurement
scenario, in the coordinate conventions of :mod:`pmwitness.geometry`:

- Pusey expression S: a linear combination of the eight coordinates,
  weighted by the decomposition weights of the operational equivalence.
  Preparation-noncontextual models satisfy S <= 0; the verdict quantity is
  the maximum of S over its eight-element symmetry orbit.
- Marvian bound gamma = 1/(4 beta_min): a certified lower bound on the
  minimal epistemic distance between some pair of operationally equivalent
  preparations.  beta_min is computed geometrically from ray exits through
  the convex hull of the preparations augmented with the four
  measurement-effect extreme points; gamma > 0 witnesses contextuality.
- Parity-preservation gap d_min (delegated to :mod:`pmwitness.ontology`):
  the least epistemic distance between the parity mixtures minus their
  operational distance; d_min > 0 witnesses contextuality.

Alpha coefficients alpha1 = 1/(1-r), alpha2 = r/(1-r) + eps and
alpha3 = r/(1-r) - eps translate between the equivalent-pair distance and
the parity gap: C > alpha2/alpha1 implies d_min > 0, and d_min > alpha3
implies C > 0, where C is the minimal epistemic distance over equivalent
pairs.

Each witness comes with a worst-case lower/upper bound as a function of the
noise level delta, for two noise models: independent box noise (each
preparation displaced up to delta from its ideal position) and depolarizing
noise (each preparation contracted toward the center).  The bounds are only
valid on explicit delta regions, enforced as domain errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import (
    DegenerateScenarioError,
    DecompositionWeights,
    InputDomainError,
    LABELS,
    ParityMixtures,
    PrepPoint,
    Scenario,
    decomposition_weights,
    op_distance,
    parity_mixtures,
    ray_polytope_exit,
)
from .ontology import EpistemicModel, parity_gap, pnc_feasible, tv_distance

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)

IDEAL_PUSEY_VALUE = 2.0 * _SQRT2 - 2.0
PARITY_GAP_TOL = 1e-9
HULL_BOUNDARY_TOL = 1e-12

# Sign pattern ((-1)^i, (-1)^j) of each preparation label "ij".
_SIGN_PATTERNS: dict[str, tuple[float, float]] = {
    "00": (1.0, 1.0),
    "01": (1.0, -1.0),
    "10": (-1.0, 1.0),
    "11": (-1.0, -1.0),
}
_PATTERN_LABELS = {pattern: label for label, pattern in _SIGN_PATTERNS.items()}

__all__ = [
    "IDEAL_PUSEY_VALUE",
    "PARITY_GAP_TOL",
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


@dataclass(frozen=True, slots=True)
class BoundConstants:
    """Fixed reference points and scalars entering the noise bounds.

    l_delta and u_delta bracket the magnitude of every ideal coordinate
    (1/sqrt(2)) after a displacement of operational distance delta;
    q_points are the four equal-mixture reference points (+-1/2, +-1/2)
    probed by the Marvian bound; r_points are the measurement-effect
    extreme points (+-1, 0), (0, +-1) augmenting the preparation hull.
    p_guess, d_outcomes and n_measurements parametrize the general
    inaccessible-information inequality (guessing probability 1, binary
    outcomes, two measurements).
    """

    l_delta: float
    u_delta: float
    q_points: tuple[PrepPoint, ...]
    r_points: tuple[PrepPoint, ...]
    p_guess: float = 1.0
    d_outcomes: int = 2
    n_measurements: int = 2

    def __post_init__(self) -> None:
        if self.l_delta > self.u_delta:
            raise InputDomainError(
                f"coordinate bracket inverted: {self.l_delta} > {self.u_delta}"
            )
        if self.d_outcomes < 2 or self.n_measurements < 1:
            raise InputDomainError("need at least 2 outcomes and 1 measurement")
        if not 0.0 <= self.p_guess <= 1.0:
            raise InputDomainError(f"p_guess must be a probability, got {self.p_guess}")

    @property
    def marvian_region_valid(self) -> bool:
        """Whether the lower coordinate bracket is positive (delta < 1/(2 sqrt 2))."""
        return self.l_delta > 0.0


def bound_constants(delta: float) -> BoundConstants:
    """Constants for noise level delta; see :class:`BoundConstants`."""
    if not isinstance(delta, (int, float)) or isinstance(delta, bool):
        raise InputDomainError(f"delta must be a real number, got {delta!r}")
    if not math.isfinite(delta) or delta < 0.0:
        raise InputDomainError(f"delta must be finite and nonnegative, got {delta}")
    q = tuple(PrepPoint(0.5 * sx, 0.5 * sy) for sx, sy in _SIGN_PATTERNS.values())
    u = (PrepPoint(1.0, 0.0), PrepPoint(-1.0, 0.0), PrepPoint(0.0, 1.0), PrepPoint(0.0, -1.0))
    inv_sqrt2 = 1.0 / _SQRT2
    return BoundConstants(inv_sqrt2 - 2.0 * delta, inv_sqrt2 + 2.0 * delta, q, u)


def distinguishability(a: PrepPoint, b: PrepPoint) -> float:
    """Optimal single-shot success probability of telling two preparations apart.

    Equal to (1 + op_distance(a, b))/2: guess via the measurement whose
    outcome probabilities differ most, breaking ties uniformly.
    """
    return 0.5 * (1.0 + op_distance(a, b))


def pusey_s(scenario: Scenario, weights: DecompositionWeights) -> float:
    """The representative noncontextuality expression S.

    S = p(x00 + y00 + x11 + y11) + q(x01 - y01 + x10 - y10)
        + (y10 - x10 - x11 - y11) - 2,

    where p, q are the decomposition weights of the two equivalent
    mixtures.  Preparation-noncontextual models obey S <= 0, so S > 0
    witnesses contextuality.  The weights must be the ones derived from
    this scenario.

    Examples
    --------
    Ideal scenario: 2 sqrt(2) - 2; algebraic maximum over the state space: 2.
    """
    p00, p01 = scenario.preps["00"], scenario.preps["01"]
    p10, p11 = scenario.preps["10"], scenario.preps["11"]
    return (weights.p * (p00.x + p00.y + p11.x + p11.y)
            + weights.q * (p01.x - p01.y + p10.x - p10.y)
            + (p10.y - p10.x - p11.x - p11.y)
            - 2.0)


def _transform(sx: float, sy: float, swap: bool, x: float, y: float) -> tuple[float, float]:
    u, v = sx * x, sy * y
    return (v, u) if swap else (u, v)


def pusey_orbit_max(scenario: Scenario) -> float:
    """Maximum of S over its eight-element symmetry orbit.

    The orbit applies every combination of the coordinate sign flips
    x -> -x, y -> -y and the axis swap x <-> y, relabeling the
    preparations so that each transformed point keeps the label whose
    ideal sign pattern it now matches.  Each orbit member preserves the
    diagonal-pair structure, so its weights and S value are well defined;
    the maximum over the orbit is the verdict quantity (the scenario is
    preparation-contextual by this family of inequalities iff it is
    positive).
    """
    best = -math.inf
    for swap in (False, True):
        for sx in (1.0, -1.0):
            for sy in (1.0, -1.0):
                relabeled: dict[str, PrepPoint] = {}
                for label in LABELS:
                    pattern = _transform(sx, sy, swap, *_SIGN_PATTERNS[label])
                    point = scenario.preps[label]
                    nx, ny = _transform(sx, sy, swap, point.x, point.y)
                    relabeled[_PATTERN_LABELS[pattern]] = PrepPoint(nx, ny)
                transformed = Scenario.from_mapping(relabeled)
                value = pusey_s(transformed, decomposition_weights(transformed))
                if value > best:
                    best = value
    return best


def _require_delta(delta: float, upper: float, upper_name: str) -> float:
    if not isinstance(delta, (int, float)) or isinstance(delta, bool):
        raise InputDomainError(f"delta must be a real number, got {delta!r}")
    delta = float(delta)
    if not math.isfinite(delta) or delta < 0.0:
        raise InputDomainError(f"delta must be finite and nonnegative, got {delta}")
    if delta >= upper:
        raise InputDomainError(
            f"delta={delta} outside the bound's validity region [0, {upper_name})"
        )
    return delta


def pusey_delta_bound(delta: float) -> float:
    """Worst-case value of S under box noise of level delta.

    Returns 2 sqrt(2) - 2 - 16 delta + 32 sqrt(2) delta^2, valid for
    0 <= delta < 1/(2 sqrt 2).  Positive values certify that every
    scenario within the delta-box violates the noncontextuality
    inequality; the bound crosses zero near delta = 0.0630.
    """
    delta = _require_delta(delta, 0.5 / _SQRT2, "1/(2*sqrt(2))")
    return IDEAL_PUSEY_VALUE - 16.0 * delta + 32.0 * _SQRT2 * delta * delta


def beta_min_numeric(scenario: Scenario) -> float:
    """Distinguishability constant beta_min of the scenario, geometrically.

    For each reference point Q = (+-1/2, +-1/2), the ray from the center
    through Q exits the convex hull of the preparations augmented with the
    measurement-effect extreme points at E(Q); the constant is

        beta_min = max_Q 1 / u*(Q),     u*(Q) = 1 - |Q| / |E(Q)|,

    with Euclidean norms.  u*(Q) is the largest weight with which Q can be
    mixed toward the center while staying expressible over the augmented
    hull.  Returns +inf when some Q lies on the hull boundary (u* = 0).

    Examples
    --------
    Ideal scenario: 2 + sqrt(2).
    """
    constants = bound_constants(0.0)
    hull_input = [scenario.preps[label] for label in LABELS]
    hull_input.extend(constants.r_points)
    origin = PrepPoint(0.0, 0.0)
    u_min = math.inf
    for q in constants.q_points:
        exit_point = ray_polytope_exit(origin, q, hull_input)
        q_norm = math.hypot(q.x, q.y)
        e_norm = math.hypot(exit_point.x, exit_point.y)
        u_star = 1.0 - q_norm / e_norm
        if u_star < u_min:
            u_min = u_star
    if u_min <= HULL_BOUNDARY_TOL:
        return math.inf
    return 1.0 / u_min


def marvian_lower_bound(beta_min: float, constants: BoundConstants | None = None) -> float:
    """Lower bound on the minimal epistemic distance from beta_min.

    General form over n measurements with d outcomes and guessing
    probability p_guess:

        (p_guess - (1 - ((d-1)/d) / beta_min)) / ((d-1) d^(n-1)),

    which reduces to 1/(4 beta_min) at d = n = 2, p_guess = 1.  An
    infinite beta_min gives the vacuous bound (here 0).
    """
    if constants is None:
        constants = bound_constants(0.0)
    if not beta_min >= 1.0:
        raise InputDomainError(f"beta_min must be at least 1, got {beta_min}")
    d = constants.d_outcomes
    n = constants.n_measurements
    inv_beta = 0.0 if math.isinf(beta_min) else 1.0 / beta_min
    return (constants.p_guess - (1.0 - (d - 1.0) / d * inv_beta)) / ((d - 1.0) * d ** (n - 1))


def marvian_gamma(scenario: Scenario) -> float:
    """Certified lower bound gamma = 1/(4 beta_min) on the equivalent-pair distance.

    Positive gamma witnesses preparation contextuality.  When some
    reference point sits on the augmented hull's boundary the bound
    degenerates and 0 is returned (a vacuous, not erroneous, bound).
    """
    return marvian_lower_bound(beta_min_numeric(scenario))


def marvian_delta_bound(delta: float) -> float:
    """Worst-case gamma under box noise of level delta.

    Returns (sqrt(2) - 4 delta - 1)/(4 (sqrt(2) - 4 delta)), valid for
    0 <= delta <= (sqrt(2) - 1)/4, reaching 0 exactly at the right
    endpoint.  The same bound applies under depolarizing noise.
    """
    if not isinstance(delta, (int, float)) or isinstance(delta, bool):
        raise InputDomainError(f"delta must be a real number, got {delta!r}")
    delta = float(delta)
    if not math.isfinite(delta) or delta < 0.0:
        raise InputDomainError(f"delta must be finite and nonnegative, got {delta}")
    endpoint = (_SQRT2 - 1.0) / 4.0
    if delta > endpoint:
        raise InputDomainError(
            f"delta={delta} outside the bound's validity region [0, (sqrt(2)-1)/4]"
        )
    return (_SQRT2 - 4.0 * delta - 1.0) / (4.0 * (_SQRT2 - 4.0 * delta))


def alphas(scenario: Scenario, weights: DecompositionWeights,
           mixtures: ParityMixtures) -> tuple[float, float, float]:
    """Transfer coefficients between the pair distance and the parity gap.

    alpha1 = 1/(1-r), alpha2 = r/(1-r) + eps, alpha3 = r/(1-r) - eps,
    with r the larger recombination weight and eps the operational
    distance of the parity mixtures.  For every reproducing model with
    epistemic pair distance dist and parity gap (TV of the model's parity
    mixtures minus eps) they satisfy

        alpha1 * dist - alpha2  <=  gap  <=  alpha1 * dist + alpha3,

    so C > alpha2/alpha1 forces a positive least gap, and a least gap
    above alpha3 forces C > 0.  alpha3 may be negative; it is reported
    as-is.

    Raises
    ------
    DegenerateScenarioError
        If r >= 1 (no valid recombination).
    """
    if weights.r >= 1.0:
        raise DegenerateScenarioError(f"recombination weight r={weights.r} must be < 1")
    scale = weights.r / (1.0 - weights.r)
    alpha1 = 1.0 / (1.0 - weights.r)
    return (alpha1, scale + mixtures.epsilon, scale - mixtures.epsilon)


def alpha_ratio_delta_bound(delta: float) -> float:
    """Worst-case alpha2/alpha1 under box noise of level delta.

    Returns (2 (1 + 2 sqrt 3) delta - 4 sqrt(2) delta^2)/(1 - 2 sqrt(2) delta),
    valid for 0 <= delta < 1/(2 sqrt 2).  Keeping gamma above this value
    certifies a positive parity-preservation gap.
    """
    delta = _require_delta(delta, 0.5 / _SQRT2, "1/(2*sqrt(2))")
    numerator = 2.0 * (1.0 + 2.0 * _SQRT3) * delta - 4.0 * _SQRT2 * delta * delta
    return numerator / (1.0 - 2.0 * _SQRT2 * delta)


def alpha3_delta_bound(delta: float) -> float:
    """Worst-case alpha3 under box noise of level delta.

    Returns 4 sqrt(3) delta/(1 - 2 sqrt(2) delta - 4 sqrt(3) delta), valid
    while the denominator is positive (delta below about 0.1025).  A
    parity gap above this value certifies a positive equivalent-pair
    distance.
    """
    pole = 1.0 / (2.0 * _SQRT2 + 4.0 * _SQRT3)
    delta = _require_delta(delta, pole, "1/(2*sqrt(2)+4*sqrt(3))")
    return 4.0 * _SQRT3 * delta / (1.0 - 2.0 * _SQRT2 * delta - 4.0 * _SQRT3 * delta)


def depolarizing_bounds(delta: float) -> tuple[float, float]:
    """Worst-case S and alpha2/alpha1 under depolarizing noise of level delta.

    Returns the pair

        (2 sqrt(2) - 2 - 8 delta + (8 sqrt(2) delta^2 - 4 delta)/(1 - sqrt(2) delta),
         delta + sqrt(2) delta/(1 - 2 sqrt(2) delta)),

    valid for 0 <= delta < 1/(2 sqrt 2).  The gamma bound is unchanged
    under this noise model (use :func:`marvian_delta_bound`).
    """
    delta = _require_delta(delta, 0.5 / _SQRT2, "1/(2*sqrt(2))")
    pusey = (IDEAL_PUSEY_VALUE - 8.0 * delta
             + (8.0 * _SQRT2 * delta * delta - 4.0 * delta) / (1.0 - _SQRT2 * delta))
    alpha_ratio = delta + _SQRT2 * delta / (1.0 - 2.0 * _SQRT2 * delta)
    return (pusey, alpha_ratio)


def model_parity_gap(scenario: Scenario, model: EpistemicModel) -> float:
    """Parity gap of one explicit model: TV of its parity mixtures minus eps.

    The gap of any reproducing model upper-bounds nothing and
    lower-bounds nothing individually, but its minimum over models is the
    witness quantity; this helper evaluates single models for comparison
    against that minimum.
    """
    mu_plus = tuple(0.5 * a + 0.5 * b for a, b in zip(model.mu["00"], model.mu["11"]))
    mu_minus = tuple(0.5 * a + 0.5 * b for a, b in zip(model.mu["01"], model.mu["10"]))
    return tv_distance(mu_plus, mu_minus) - parity_mixtures(scenario).epsilon


@dataclass(frozen=True, slots=True)
class WitnessReport:
    """All witness quantities and verdicts for one scenario.

    Verdicts: pusey_violated iff the orbit max is positive;
    marvian_witness iff gamma is positive; parity_violated iff the parity
    gap exceeds 1e-9.  gamma_exceeds_alpha_ratio and d_min_exceeds_alpha3
    are the antecedents of the two transfer implications.
    """

    s: float
    s_orbit_max: float
    gamma: float
    beta_min: float
    alpha1: float
    alpha2: float
    alpha3: float
    d_min: float
    epsilon: float
    s_o: float
    delta: float
    pnc_feasible: bool
    pusey_violated: bool
    marvian_witness: bool
    parity_violated: bool
    gamma_exceeds_alpha_ratio: bool
    d_min_exceeds_alpha3: bool

    def __post_init__(self) -> None:
        if abs(self.s_o - 0.5 * (1.0 + self.epsilon)) > 1e-9:
            raise InputDomainError(
                "distinguishability must equal (1 + epsilon)/2, got "
                f"{self.s_o} vs epsilon={self.epsilon}"
            )
        if self.alpha1 < 1.0 - 1e-12:
            raise InputDomainError(f"alpha1 must be >= 1, got {self.alpha1}")
        if self.gamma < 0.0 or self.delta < 0.0 or self.epsilon < 0.0:
            raise InputDomainError("gamma, delta and epsilon must be nonnegative")


def full_report(scenario: Scenario) -> WitnessReport:
    """Evaluate every witness on one scenario.

    Computes S and its orbit max, beta_min and gamma, the alpha
    coefficients, the noise level delta, the parity mixtures' operational
    distance and distinguishability, the exact least parity gap (linear
    program), and whether an exactly noncontextual assignment exists.

    Raises
    ------
    DegenerateScenarioError
        Propagated when the scenario's equivalence structure is degenerate.
    """
    weights = decomposition_weights(scenario)
    mixtures = parity_mixtures(scenario)
    s_value = pusey_s(scenario, weights)
    orbit_max = pusey_orbit_max(scenario)
    beta = beta_min_numeric(scenario)
    gamma = marvian_lower_bound(beta)
    alpha1, alpha2, alpha3 = alphas(scenario, weights, mixtures)
    d_min = parity_gap(scenario)
    return WitnessReport(
        s=s_value,
        s_orbit_max=orbit_max,
        gamma=gamma,
        beta_min=beta,
        alpha1=alpha1,
        alpha2=alpha2,
        alpha3=alpha3,
        d_min=d_min,
        epsilon=mixtures.epsilon,
        s_o=distinguishability(mixtures.p_plus, mixtures.p_minus),
        delta=scenario.delta,
        pnc_feasible=pnc_feasible(scenario),
        pusey_violated=orbit_max > 0.0,
        marvian_witness=gamma > 0.0,
        parity_violated=d_min > PARITY_GAP_TOL,
        gamma_exceeds_alpha_ratio=gamma > alpha2 / alpha1,
        d_min_exceeds_alpha3=d_min > alpha3,
    )
