"""Parity-oblivious multiplexing analysis of a scenario.

In the multiplexing game Alice receives two uniform input bits, encodes
them into one of the four preparations, and Bob — asked for bit y in
{0, 1} — performs measurement X (y = 0) or Y (y = 1) and announces the
outcome as his guess.  The wiring fixed here sends input bits (x1, x2) to
preparation "x1 x2", with outcome 0 of X (resp. Y) meaning x1 = 0
(resp. x2 = 0).  Parity-obliviousness demands that the transmitted
ensemble reveal nothing about x1 XOR x2; in the relaxed game the parity
mixtures may differ by operational distance at most epsilon.

Classical (noncontextual) strategies with exact obliviousness win with
probability at most 3/4 — established here by exhaustive enumeration of
deterministic encodings and decodings, with shared randomness handled by
convexity — and at most 3/4 + epsilon/4 in the relaxed game, where the
leak is modeled as an independent coin revealing the exact parity with
probability epsilon.  A success probability above that bound therefore
witnesses a positive parity-preservation gap, which
:func:`pom_analysis` cross-checks against the exact linear-programming
gap of :mod:`pmwitness.ontology`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import (
    InputDomainError,
    Scenario,
    ScenarioError,
    parity_mixtures,
)
from .ontology import parity_gap

CLASSICAL_MARGIN_TOL = 1e-9

__all__ = [
    "CLASSICAL_MARGIN_TOL",
    "CrossCheckError",
    "PomOutcome",
    "classical_brute_force",
    "pom_analysis",
    "pom_success",
]


class CrossCheckError(ScenarioError):
    """A proved implication between computed quantities failed numerically."""


@dataclass(frozen=True, slots=True)
class PomOutcome:
    """Multiplexing performance of a scenario against the classical bound.

    exceeds_classical is true iff success_probability clears the bound by
    more than 1e-9; by the parity-preservation theorem this forces a
    positive least parity gap.
    """

    success_probability: float
    epsilon: float
    classical_bound: float
    exceeds_classical: bool

    def __post_init__(self) -> None:
        for name, value in (("success_probability", self.success_probability),
                            ("epsilon", self.epsilon)):
            if not 0.0 <= value <= 1.0:
                raise InputDomainError(f"{name} must lie in [0, 1], got {value}")
        if abs(self.classical_bound - (0.75 + 0.25 * self.epsilon)) > 1e-12:
            raise InputDomainError(
                f"classical bound must equal 3/4 + epsilon/4, got {self.classical_bound}"
            )
        expected = self.success_probability > self.classical_bound + CLASSICAL_MARGIN_TOL
        if self.exceeds_classical is not expected:
            raise InputDomainError("exceeds_classical flag inconsistent with values")


def pom_success(scenario: Scenario) -> float:
    """Success probability of the multiplexing wiring on this scenario.

    Averages, over the eight equally likely (input, question) pairs, the
    probability that the designated measurement outcome matches the
    queried bit:

        (1/8) [ P(0|P00,X) + P(0|P01,X) + P(1|P10,X) + P(1|P11,X)
              + P(0|P00,Y) + P(0|P10,Y) + P(1|P01,Y) + P(1|P11,Y) ].

    Examples
    --------
    Ideal scenario: (1 + 1/sqrt(2))/2 ~= 0.8536; center-only scenario: 1/2.
    """
    p00, p01 = scenario.preps["00"], scenario.preps["01"]
    p10, p11 = scenario.preps["10"], scenario.preps["11"]
    return (p00.prob0x + p01.prob0x + (1.0 - p10.prob0x) + (1.0 - p11.prob0x)
            + p00.prob0y + p10.prob0y + (1.0 - p01.prob0y) + (1.0 - p11.prob0y)) / 8.0


_INPUTS = ((0, 0), (0, 1), (1, 0), (1, 1))


def _parity_oblivious(encoding: tuple[int, int, int, int]) -> bool:
    """Whether a deterministic encoding reveals nothing about the parity.

    Under uniform inputs the message distribution conditioned on even
    parity must match the one conditioned on odd parity, i.e. the multiset
    of messages on {00, 11} must equal the multiset on {01, 10}.
    """
    return sorted((encoding[0], encoding[3])) == sorted((encoding[1], encoding[2]))


def _best_oblivious_success() -> float:
    """Maximum multiplexing success over deterministic oblivious strategies.

    Enumerates all 16 one-bit encodings, filters by parity-obliviousness,
    and pairs each survivor with all 16 decodings (message, question) ->
    guess.  Shared randomness cannot beat the deterministic maximum since
    the success probability is affine in strategy mixtures.
    """
    best = 0
    for enc_bits in range(16):
        encoding = tuple((enc_bits >> k) & 1 for k in range(4))
        if not _parity_oblivious(encoding):
            continue
        for dec_bits in range(16):
            correct = 0
            for idx, bits in enumerate(_INPUTS):
                message = encoding[idx]
                for question in (0, 1):
                    guess = (dec_bits >> (2 * message + question)) & 1
                    if guess == bits[question]:
                        correct += 1
            if correct > best:
                best = correct
    return best / 8.0


def classical_brute_force(epsilon: float) -> float:
    """Best classical success probability in the epsilon-relaxed game.

    At epsilon = 0 the value is the enumerated maximum over deterministic
    parity-oblivious strategies (exactly 3/4).  For epsilon > 0 the best
    strategy augments that optimum with a side channel revealing the
    exact parity with probability epsilon, in which case Bob answers
    perfectly; the value is the enumerated base plus epsilon/4.

    Raises
    ------
    InputDomainError
        If epsilon is outside [0, 1].
    """
    if not isinstance(epsilon, (int, float)) or isinstance(epsilon, bool):
        raise InputDomainError(f"epsilon must be a real number, got {epsilon!r}")
    epsilon = float(epsilon)
    if not math.isfinite(epsilon) or not 0.0 <= epsilon <= 1.0:
        raise InputDomainError(f"epsilon must lie in [0, 1], got {epsilon}")
    base = _best_oblivious_success()
    # With probability epsilon the known parity plus the message determine
    # both bits: conditional success 1; otherwise the base strategy runs.
    return base + 0.25 * epsilon


def pom_analysis(scenario: Scenario, parity_gap_value: float | None = None) -> PomOutcome:
    """Evaluate the relaxed multiplexing game on a scenario.

    epsilon is the operational distance of the parity mixtures, the
    classical bound comes from :func:`classical_brute_force`, and the
    outcome flags whether the scenario's success probability exceeds it.
    When it does, the least parity gap must be positive; this is
    cross-checked with the exact linear program (or the caller's
    precomputed parity_gap_value) and a failure raises
    :class:`CrossCheckError`.
    """
    epsilon = parity_mixtures(scenario).epsilon
    success = pom_success(scenario)
    bound = classical_brute_force(epsilon)
    exceeds = success > bound + CLASSICAL_MARGIN_TOL
    if exceeds:
        gap = parity_gap(scenario) if parity_gap_value is None else parity_gap_value
        if not gap > CLASSICAL_MARGIN_TOL:
            raise CrossCheckError(
                f"success {success} exceeds the classical bound {bound} but the "
                f"least parity gap {gap} is not positive"
            )
    return PomOutcome(success, epsilon, bound, exceeds)
