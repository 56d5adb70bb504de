"""Ontological-model optimization over a four-state deterministic ontic space.

An ontological model assigns each preparation an epistemic state mu(.|P)
over ontic states lambda, and each measurement a response function
xi(k|lambda, M), reproducing the operational statistics through

    P(k|P, M) = sum_lambda xi(k|lambda, M) mu(lambda|P).

For two binary tomographically complete measurements the four deterministic
response assignments lambda = (X outcome, Y outcome) in {0,1}^2 suffice:
any richer model coarse-grains onto them by decomposing each lambda's
response pair as a product distribution, a stochastic map that preserves
all reproduced statistics and never increases total-variation distances
(see :func:`coarse_grain`).  Every infimum over models computed here is
therefore attained on this fixed four-point space, turning the infima into
small linear programs.

Provided quantities:

- min_parity_tv: the least total-variation distance between the epistemic
  images of the even/odd parity mixtures, over all reproducing models; the
  parity-preservation gap is this value minus the operational distance of
  the mixtures and is nonnegative (data processing).
- min_pair_tv: the analogous minimum for the weighted mixtures that realize
  the diagonal intersection point, a certified lower bound on the largest
  epistemic distance between operationally equivalent preparations.
- pnc_feasible: whether some model gives both weighted mixtures identical
  epistemic states (an exact preparation-noncontextual assignment).
- brute_force_min_tv: an LP-free grid oracle for the same minima.

The linear programs have at most 20 variables and are solved exactly up to
solver tolerance 1e-9.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .geometry import (
    InputDomainError,
    LABELS,
    PrepPoint,
    Scenario,
    ScenarioError,
    decomposition_weights,
    parity_mixtures,
)


class ScenarioLpError(ScenarioError):
    """Unexpected solver failure on a program this module constructed."""


LP_TOL = 1e-9

# Ontic states in fixed order: (X outcome, Y outcome).
ONTIC_STATES = ((0, 0), (0, 1), (1, 0), (1, 1))
# xi(0|lambda, M) for each state, per measurement.
RESPONSE_X = (1.0, 1.0, 0.0, 0.0)
RESPONSE_Y = (1.0, 0.0, 1.0, 0.0)

__all__ = [
    "LP_TOL",
    "ONTIC_STATES",
    "RESPONSE_X",
    "RESPONSE_Y",
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
]


@dataclass(frozen=True, slots=True)
class OnticSpace:
    """The deterministic ontic space: states and their response functions.

    states[i] is the pair (X outcome, Y outcome) assigned by state i;
    response_x[i] and response_y[i] are xi(0|state i, X) and xi(0|state i, Y).
    """

    states: tuple[tuple[int, int], ...] = ONTIC_STATES
    response_x: tuple[float, ...] = RESPONSE_X
    response_y: tuple[float, ...] = RESPONSE_Y

    def __post_init__(self) -> None:
        for xi in (self.response_x, self.response_y):
            if len(xi) != len(self.states):
                raise InputDomainError("response vector length must match state count")
            if any(v < 0.0 or v > 1.0 for v in xi):
                raise InputDomainError("responses must be probabilities in [0, 1]")


@dataclass(frozen=True, slots=True)
class EpistemicModel:
    """Four epistemic states over the deterministic ontic space, by label."""

    mu: dict[str, tuple[float, float, float, float]]

    def __post_init__(self) -> None:
        missing = [lab for lab in LABELS if lab not in self.mu]
        if missing:
            raise InputDomainError(f"epistemic model missing labels {missing}")
        cleaned: dict[str, tuple[float, float, float, float]] = {}
        for lab in LABELS:
            vec = tuple(float(v) for v in self.mu[lab])
            if len(vec) != 4:
                raise InputDomainError(f"mu[{lab}] must have 4 entries")
            if min(vec) < -LP_TOL or abs(sum(vec) - 1.0) > LP_TOL:
                raise InputDomainError(f"mu[{lab}] is not a probability vector: {vec}")
            cleaned[lab] = vec
        object.__setattr__(self, "mu", cleaned)

    def reproduces(self, scenario: Scenario, tol: float = LP_TOL) -> bool:
        """Whether the model reproduces the scenario's statistics within tol."""
        for lab in LABELS:
            point = scenario.preps[lab]
            vec = self.mu[lab]
            px = sum(r * m for r, m in zip(RESPONSE_X, vec))
            py = sum(r * m for r, m in zip(RESPONSE_Y, vec))
            if abs(px - point.prob0x) > tol or abs(py - point.prob0y) > tol:
                return False
        return True


def tv_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Total-variation distance between two probability vectors.

    Raises
    ------
    InputDomainError
        On length mismatch, or if either vector is not normalized to 1
        within 1e-9 with nonnegative entries.
    """
    if len(a) != len(b):
        raise InputDomainError(f"length mismatch: {len(a)} vs {len(b)}")
    for name, vec in (("a", a), ("b", b)):
        if min(vec) < -LP_TOL or abs(sum(vec) - 1.0) > LP_TOL:
            raise InputDomainError(f"{name} is not a normalized distribution: {tuple(vec)}")
    return 0.5 * sum(abs(x - y) for x, y in zip(a, b))


def product_epistemic(point: PrepPoint) -> tuple[float, float, float, float]:
    """Canonical reproducing epistemic state: the product decomposition.

    With a = P(0|P,X) and b = P(0|P,Y), weights the four ontic states
    (X outcome, Y outcome) as (a b, a(1-b), (1-a)b, (1-a)(1-b)); this
    reproduces the point's statistics exactly and certifies feasibility of
    every reproduction constraint used by the linear programs.
    """
    a = point.prob0x
    b = point.prob0y
    return (a * b, a * (1.0 - b), (1.0 - a) * b, (1.0 - a) * (1.0 - b))


def feasible_interval(point: PrepPoint) -> tuple[float, float]:
    """Range of mu(state (0,0)) over reproducing epistemic states.

    The three reproduction constraints leave one free parameter
    t = mu((0,0)); the full state is (t, a-t, b-t, 1-a-b+t) with
    t in [max(0, a+b-1), min(a, b)].
    """
    a = point.prob0x
    b = point.prob0y
    return (max(0.0, a + b - 1.0), min(a, b))


@dataclass(frozen=True, slots=True)
class LinearProgram:
    """A small LP: minimize objective . x subject to equality/inequality rows.

    constraints_eq and constraints_le are sequences of (coefficients, rhs);
    lower_bounds gives per-variable lower bounds (upper bounds are open).
    """

    objective: tuple[float, ...]
    constraints_eq: tuple[tuple[tuple[float, ...], float], ...]
    constraints_le: tuple[tuple[tuple[float, ...], float], ...]
    lower_bounds: tuple[float, ...]

    def __post_init__(self) -> None:
        n = len(self.objective)
        if len(self.lower_bounds) != n:
            raise InputDomainError("lower_bounds length must match objective length")
        for rows in (self.constraints_eq, self.constraints_le):
            for coeffs, _ in rows:
                if len(coeffs) != n:
                    raise InputDomainError("constraint row length must match objective length")


@dataclass(frozen=True, slots=True)
class LpSolution:
    """Solver outcome: status is 'optimal', 'infeasible' or 'unbounded'."""

    status: str
    optimum: float | None
    solution: tuple[float, ...] | None


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Solve a LinearProgram, reporting infeasibility as a status, not an error."""
    a_eq = [list(c) for c, _ in lp.constraints_eq] or None
    b_eq = [r for _, r in lp.constraints_eq] or None
    a_ub = [list(c) for c, _ in lp.constraints_le] or None
    b_ub = [r for _, r in lp.constraints_le] or None
    res = linprog(
        list(lp.objective),
        A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
        bounds=[(lb, None) for lb in lp.lower_bounds],
        method="highs",
    )
    if res.status == 2:
        return LpSolution("infeasible", None, None)
    if res.status == 3:
        return LpSolution("unbounded", None, None)
    if not res.success:
        raise ScenarioLpError(f"linear program failed: {res.message}")
    return LpSolution("optimal", float(res.fun), tuple(float(v) for v in res.x))


def _reproduction_rows(scenario: Scenario, n_vars: int
                       ) -> list[tuple[tuple[float, ...], float]]:
    """Equality rows forcing each mu_ij block to reproduce its statistics.

    Variable layout: four blocks of 4 (mu for labels 00, 01, 10, 11 in
    order), then any auxiliaries up to n_vars.
    """
    rows: list[tuple[tuple[float, ...], float]] = []
    for k, lab in enumerate(LABELS):
        point = scenario.preps[lab]
        for response, rhs in (((1.0, 1.0, 1.0, 1.0), 1.0),
                              (RESPONSE_X, point.prob0x),
                              (RESPONSE_Y, point.prob0y)):
            coeffs = [0.0] * n_vars
            coeffs[4 * k:4 * k + 4] = response
            rows.append((tuple(coeffs), rhs))
    return rows


def _mixture_tv_program(scenario: Scenario,
                        even_weights: tuple[float, float],
                        odd_weights: tuple[float, float]) -> LinearProgram:
    """LP minimizing TV(even mixture, odd mixture) over reproducing models.

    The even mixture weights (mu_00, mu_11) by even_weights; the odd one
    weights (mu_01, mu_10) by odd_weights.  TV is linearized with one
    auxiliary per ontic state: t_s >= +-(even - odd)(s), objective
    (1/2) sum_s t_s.  16 distribution variables + 4 auxiliaries.
    """
    n_vars = 20
    rows_eq = _reproduction_rows(scenario, n_vars)
    rows_le: list[tuple[tuple[float, ...], float]] = []
    for state in range(4):
        for sign in (1.0, -1.0):
            coeffs = [0.0] * n_vars
            coeffs[0 + state] = sign * even_weights[0]       # mu_00
            coeffs[12 + state] = sign * even_weights[1]      # mu_11
            coeffs[4 + state] = -sign * odd_weights[0]       # mu_01
            coeffs[8 + state] = -sign * odd_weights[1]       # mu_10
            coeffs[16 + state] = -1.0
            rows_le.append((tuple(coeffs), 0.0))
    objective = tuple([0.0] * 16 + [0.5] * 4)
    return LinearProgram(objective, tuple(rows_eq), tuple(rows_le), (0.0,) * n_vars)


def _solved_minimum(lp: LinearProgram) -> float:
    sol = solve_lp(lp)
    if sol.status != "optimal":
        raise ScenarioLpError(f"expected a bounded feasible program, got {sol.status}")
    return max(sol.optimum, 0.0)  # clip solver noise on an objective >= 0


def min_parity_tv(scenario: Scenario) -> float:
    """Least TV distance between epistemic parity mixtures over all models.

    Minimizes TV(mu_+, mu_-) with mu_+ = (mu_00 + mu_11)/2 and
    mu_- = (mu_01 + mu_10)/2 subject to every mu_ij reproducing its
    preparation.  The parity-preservation gap is this value minus
    op_distance(P_+, P_-) and is always nonnegative.
    """
    return _solved_minimum(_mixture_tv_program(scenario, (0.5, 0.5), (0.5, 0.5)))


def min_pair_tv(scenario: Scenario) -> float:
    """Least TV distance between the epistemic images of the equivalent pair.

    Uses the mixtures p mu_00 + (1-p) mu_11 and q mu_01 + (1-q) mu_10 whose
    operational counterparts coincide at the diagonal intersection; the
    minimum is a certified lower bound on the largest epistemic distance
    between operationally equivalent preparations.
    """
    weights = decomposition_weights(scenario)
    return _solved_minimum(_mixture_tv_program(
        scenario, (weights.p, 1.0 - weights.p), (weights.q, 1.0 - weights.q)))


def pnc_feasible(scenario: Scenario) -> bool:
    """Whether a model gives the equivalent mixtures identical epistemic states.

    Feasibility of the reproduction constraints plus the four equalities
    (p mu_00 + (1-p) mu_11)(s) = (q mu_01 + (1-q) mu_10)(s).  True means the
    scenario admits a preparation-noncontextual assignment for this
    equivalence, which is sufficient for one overall.
    """
    weights = decomposition_weights(scenario)
    n_vars = 16
    rows_eq = _reproduction_rows(scenario, n_vars)
    for state in range(4):
        coeffs = [0.0] * n_vars
        coeffs[0 + state] = weights.p
        coeffs[12 + state] = 1.0 - weights.p
        coeffs[4 + state] = -weights.q
        coeffs[8 + state] = -(1.0 - weights.q)
        rows_eq.append((tuple(coeffs), 0.0))
    lp = LinearProgram((0.0,) * n_vars, tuple(rows_eq), (), (0.0,) * n_vars)
    return solve_lp(lp).status == "optimal"


def brute_force_min_tv(scenario: Scenario, resolution: float,
                       weights: tuple[float, float] | None = None) -> float:
    """Grid-search oracle for the mixture-TV minima, independent of the LP.

    Each preparation's reproducing epistemic states form a one-parameter
    family (see :func:`feasible_interval`), so each mixture is determined
    by a single scalar ranging over an interval; the objective is scanned
    on a 2D grid over those two scalars at the given resolution.  The
    result is an upper bound on the true minimum and lies within
    4 * resolution of it.

    Parameters
    ----------
    scenario : Scenario
    resolution : float
        Grid step, in (0, 0.1].
    weights : optional (p, q)
        Mixture weights for the even/odd families; default (1/2, 1/2)
        matches :func:`min_parity_tv`, passing the decomposition weights
        matches :func:`min_pair_tv`.
    """
    if not (0.0 < resolution <= 0.1):
        raise InputDomainError(f"resolution must lie in (0, 0.1], got {resolution}")
    if weights is None:
        wp, wq = 0.5, 0.5
    else:
        wp, wq = float(weights[0]), float(weights[1])

    def family(lab: str) -> tuple[float, float, float, float]:
        point = scenario.preps[lab]
        lo, hi = feasible_interval(point)
        return (lo, hi, point.prob0x, point.prob0y)

    lo00, hi00, a00, b00 = family("00")
    lo11, hi11, a11, b11 = family("11")
    lo01, hi01, a01, b01 = family("01")
    lo10, hi10, a10, b10 = family("10")

    # Even mixture: (u, A-u, B-u, 1-A-B+u) with u an average of free params.
    u_lo = wp * lo00 + (1.0 - wp) * lo11
    u_hi = wp * hi00 + (1.0 - wp) * hi11
    ma = wp * a00 + (1.0 - wp) * a11
    mb = wp * b00 + (1.0 - wp) * b11
    m_lo = wq * lo01 + (1.0 - wq) * lo10
    m_hi = wq * hi01 + (1.0 - wq) * hi10
    mc = wq * a01 + (1.0 - wq) * a10
    md = wq * b01 + (1.0 - wq) * b10

    def grid(lo: float, hi: float) -> np.ndarray:
        count = max(2, int(np.ceil((hi - lo) / resolution)) + 1)
        return np.linspace(lo, hi, count)

    u = grid(u_lo, u_hi)[:, None]
    m = grid(m_lo, m_hi)[None, :]
    tv = 0.5 * (np.abs(u - m)
                + np.abs((ma - u) - (mc - m))
                + np.abs((mb - u) - (md - m))
                + np.abs((1.0 - ma - mb + u) - (1.0 - mc - md + m)))
    return float(tv.min())


def coarse_grain(scenario: Scenario,
                 mus: dict[str, Sequence[float]],
                 response_x: Sequence[float],
                 response_y: Sequence[float]) -> EpistemicModel:
    """Push a model over an arbitrary finite ontic space onto the 4-state one.

    Each source state s, with response pair (gx, gy) = (xi(0|s,X), xi(0|s,Y)),
    is mapped to the product distribution (gx gy, gx(1-gy), (1-gx)gy,
    (1-gx)(1-gy)) over the deterministic states; each epistemic state is
    pushed through this stochastic map.  The output reproduces the same
    operational statistics, and TV distances never increase.

    Raises
    ------
    InputDomainError
        If responses leave [0, 1], shapes disagree, or the input model does
        not reproduce the scenario's statistics.
    """
    gx = [float(v) for v in response_x]
    gy = [float(v) for v in response_y]
    n = len(gx)
    if len(gy) != n:
        raise InputDomainError("response vectors must have equal length")
    if any(v < 0.0 or v > 1.0 for v in gx + gy):
        raise InputDomainError("responses must be probabilities in [0, 1]")
    kernel = np.array([[x * y, x * (1.0 - y), (1.0 - x) * y, (1.0 - x) * (1.0 - y)]
                       for x, y in zip(gx, gy)])
    pushed: dict[str, tuple[float, float, float, float]] = {}
    for lab in LABELS:
        vec = np.asarray(mus[lab], dtype=float)
        if vec.shape != (n,):
            raise InputDomainError(f"mu[{lab}] must have length {n}")
        if vec.min() < -LP_TOL or abs(vec.sum() - 1.0) > LP_TOL:
            raise InputDomainError(f"mu[{lab}] is not a probability vector")
        point = scenario.preps[lab]
        if (abs(float(vec @ gx) - point.prob0x) > LP_TOL
                or abs(float(vec @ gy) - point.prob0y) > LP_TOL):
            raise InputDomainError(
                f"input model does not reproduce the statistics of preparation {lab}"
            )
        out = vec @ kernel
        pushed[lab] = tuple(float(v) for v in out)
    return EpistemicModel(pushed)


def parity_gap(scenario: Scenario) -> float:
    """The parity-preservation gap: min_parity_tv minus epsilon.

    Nonnegative up to solver tolerance: any reproducing model's parity
    mixtures are at least as far apart epistemically as operationally.
    """
    return min_parity_tv(scenario) - parity_mixtures(scenario).epsilon
