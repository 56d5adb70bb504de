"""Coordinate algebra for the simplest nontrivial prepare-and-measure scenario.

The scenario consists of four preparations probed by two binary-outcome,
tomographically complete measurements X and Y.  Each preparation is fully
described by the pair of outcome biases

    x = P(0|P, X) - P(1|P, X),    y = P(0|P, Y) - P(1|P, Y),

so states live in the "gbit square" [-1, 1]^2.  The four ideal preparations
sit at (+-1/sqrt(2), +-1/sqrt(2)); labels follow the sign pattern
(x-sign, y-sign) = ((-1)^i, (-1)^j) for label "ij".

This module provides:

- probability <-> coordinate conversions,
- the operational distance d(a, b) = max_M |P(0|a,M) - P(0|b,M)|, which in
  coordinates is half the Chebyshev distance,
- the noise parameter delta (worst distance of a realized preparation from
  its ideal counterpart),
- the even/odd parity mixtures P+ = (P00+P11)/2 and P- = (P01+P10)/2 and
  their distinguishability epsilon = d(P+, P-),
- the intersection point c of the two diagonals P00--P11 and P01--P10, the
  mixing weights p, q realizing c on either diagonal, and the common-weight
  recast (1-r) P+ + r P+' = c = (1-r) P- + r P-',
- small exact 2D computational-geometry utilities (monotone-chain convex
  hull, ray exit through a convex polygon boundary) used by the witness
  bounds built on guessing-game geometry.

All operations are pure functions of immutable inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

GEOMETRY_TOL = 1e-9          # absolute tolerance for geometric identities
PARALLEL_DET_TOL = 1e-12     # determinant threshold for parallel segments

LABELS = ("00", "01", "10", "11")

__all__ = [
    "GEOMETRY_TOL",
    "LABELS",
    "DecompositionWeights",
    "DegenerateScenarioError",
    "InputDomainError",
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
]


class ScenarioError(Exception):
    """Base error for scenario construction and analysis."""


class InputDomainError(ScenarioError, ValueError):
    """Inputs violate the contract: out-of-range values, bad shapes."""


class DegenerateScenarioError(ScenarioError):
    """The preparations admit no well-defined mixture decomposition.

    Raised when the two diagonals fail to intersect transversally inside
    the closed segments, or when a required normalization degenerates
    (coincident opposite vertices making a mixing weight undefined).
    """


def _require_prob(value: float, name: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise InputDomainError(f"{name} must be a finite number, got {value!r}")
    v = float(value)
    if not math.isfinite(v) or v < 0.0 or v > 1.0:
        raise InputDomainError(f"{name} must lie in [0, 1], got {v}")
    return v


def _require_coord(value: float, name: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise InputDomainError(f"{name} must be a finite number, got {value!r}")
    v = float(value)
    if not math.isfinite(v) or v < -1.0 or v > 1.0:
        raise InputDomainError(f"{name} must lie in [-1, 1], got {v}")
    return v


@dataclass(frozen=True, slots=True)
class PrepPoint:
    """A preparation as a point (x, y) of the gbit square [-1, 1]^2.

    x and y are the outcome biases under the two measurements:
    x = 2 P(0|P, X) - 1 and y = 2 P(0|P, Y) - 1.
    """

    x: float
    y: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _require_coord(self.x, "x"))
        object.__setattr__(self, "y", _require_coord(self.y, "y"))

    @property
    def prob0x(self) -> float:
        """P(outcome 0 | this preparation, measurement X)."""
        return (1.0 + self.x) / 2.0

    @property
    def prob0y(self) -> float:
        """P(outcome 0 | this preparation, measurement Y)."""
        return (1.0 + self.y) / 2.0

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


def coords_from_probs(p0x: float, p0y: float) -> PrepPoint:
    """Convert outcome-0 probabilities under X and Y into coordinates.

    Parameters
    ----------
    p0x, p0y : float
        Probabilities of outcome 0 under measurements X and Y.

    Returns
    -------
    PrepPoint
        The point (2 p0x - 1, 2 p0y - 1).

    Raises
    ------
    InputDomainError
        If either probability lies outside [0, 1].
    """
    a = _require_prob(p0x, "p0x")
    b = _require_prob(p0y, "p0y")
    return PrepPoint(2.0 * a - 1.0, 2.0 * b - 1.0)


def op_distance(a: PrepPoint, b: PrepPoint) -> float:
    """Operational distance: worst-case single-measurement distinguishability.

    Equals max over measurements of |P(0|a,M) - P(0|b,M)|, i.e. half the
    Chebyshev distance between the coordinate vectors.  It is a metric on
    the gbit square with values in [0, 1].
    """
    return 0.5 * max(abs(a.x - b.x), abs(a.y - b.y))


_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def ideal_points() -> dict[str, PrepPoint]:
    """The four ideal preparations (+-1/sqrt(2), +-1/sqrt(2)) by label."""
    return {
        "00": PrepPoint(_INV_SQRT2, _INV_SQRT2),
        "01": PrepPoint(_INV_SQRT2, -_INV_SQRT2),
        "10": PrepPoint(-_INV_SQRT2, _INV_SQRT2),
        "11": PrepPoint(-_INV_SQRT2, -_INV_SQRT2),
    }


@dataclass(frozen=True, slots=True)
class Scenario:
    """Four labeled preparations plus the derived noise parameter.

    Construction validates that the diagonals P00--P11 and P01--P10 admit a
    transversal intersection inside the closed segments; scenarios without
    one are rejected with :class:`DegenerateScenarioError` because every
    downstream witness presumes the induced operational equivalence.
    """

    p00: PrepPoint
    p01: PrepPoint
    p10: PrepPoint
    p11: PrepPoint

    def __post_init__(self) -> None:
        for name in ("p00", "p01", "p10", "p11"):
            value = getattr(self, name)
            if not isinstance(value, PrepPoint):
                raise InputDomainError(f"{name} must be a PrepPoint, got {type(value).__name__}")
        diagonal_intersection(self)  # raises DegenerateScenarioError if invalid

    @property
    def delta(self) -> float:
        """max over labels of op_distance(realized, ideal)."""
        return noise_delta(self.preps)

    @property
    def preps(self) -> dict[str, PrepPoint]:
        return {"00": self.p00, "01": self.p01, "10": self.p10, "11": self.p11}

    @classmethod
    def from_mapping(cls, preps: dict[str, PrepPoint]) -> "Scenario":
        """Build a scenario from a label -> PrepPoint mapping."""
        missing = [lab for lab in LABELS if lab not in preps]
        extra = [lab for lab in preps if lab not in LABELS]
        if missing or extra:
            raise InputDomainError(
                f"preparations must carry exactly the labels {list(LABELS)}; "
                f"missing={missing}, unexpected={extra}"
            )
        return cls(preps["00"], preps["01"], preps["10"], preps["11"])


def ideal_scenario() -> Scenario:
    """The noiseless scenario: all four preparations at their ideal points."""
    return Scenario.from_mapping(ideal_points())


def noise_delta(preps: dict[str, PrepPoint]) -> float:
    """Noise parameter: worst operational distance to the ideal points."""
    ideal = ideal_points()
    return max(op_distance(preps[lab], ideal[lab]) for lab in LABELS)


@dataclass(frozen=True, slots=True)
class ParityMixtures:
    """Even/odd parity mixtures and their operational distinguishability.

    p_plus is the equal mixture of the even-parity preparations (labels 00
    and 11), p_minus of the odd-parity ones (01 and 10); epsilon is their
    operational distance.
    """

    p_plus: PrepPoint
    p_minus: PrepPoint
    epsilon: float


def parity_mixtures(scenario: Scenario) -> ParityMixtures:
    """Componentwise midpoints of the two diagonal pairs, with epsilon."""
    p_plus = PrepPoint((scenario.p00.x + scenario.p11.x) / 2.0,
                       (scenario.p00.y + scenario.p11.y) / 2.0)
    p_minus = PrepPoint((scenario.p01.x + scenario.p10.x) / 2.0,
                        (scenario.p01.y + scenario.p10.y) / 2.0)
    return ParityMixtures(p_plus, p_minus, op_distance(p_plus, p_minus))


def _intersection_params(scenario: Scenario) -> tuple[float, float]:
    """Segment parameters (t1, t2) of the diagonal intersection.

    Solves P00 + t1 (P11 - P00) = P01 + t2 (P10 - P01) by 2x2 elimination.
    Handles the fully degenerate case in which both diagonals collapse to
    the same single point (then t1 = t2 = 1/2 canonically).

    Raises
    ------
    DegenerateScenarioError
        Parallel or non-intersecting segments, including intersections that
        exist only on the extensions of the segments.
    """
    ax, ay = scenario.p00.as_tuple()
    bx, by = scenario.p11.as_tuple()
    cx, cy = scenario.p01.as_tuple()
    dx, dy = scenario.p10.as_tuple()
    d1x, d1y = bx - ax, by - ay
    d2x, d2y = dx - cx, dy - cy
    det = d1x * (-d2y) - (-d2x) * d1y
    if abs(det) <= PARALLEL_DET_TOL:
        # Singular system: zero-length or parallel diagonals.
        len1 = math.hypot(d1x, d1y)
        len2 = math.hypot(d2x, d2y)
        if len1 <= PARALLEL_DET_TOL and len2 <= PARALLEL_DET_TOL:
            # Both diagonals are points; they intersect iff they coincide.
            if math.hypot(ax - cx, ay - cy) <= GEOMETRY_TOL:
                return (0.5, 0.5)
            raise DegenerateScenarioError(
                "both diagonals collapse to distinct points; no intersection"
            )
        raise DegenerateScenarioError(
            "diagonals are parallel or collinear; no transversal intersection"
        )
    rx, ry = cx - ax, cy - ay
    t1 = (rx * (-d2y) - (-d2x) * ry) / det
    t2 = (d1x * ry - rx * d1y) / det
    pad = GEOMETRY_TOL
    if not (-pad <= t1 <= 1.0 + pad and -pad <= t2 <= 1.0 + pad):
        raise DegenerateScenarioError(
            f"diagonals intersect only outside the closed segments "
            f"(parameters t1={t1:.6g}, t2={t2:.6g})"
        )
    return (min(max(t1, 0.0), 1.0), min(max(t2, 0.0), 1.0))


def diagonal_intersection(scenario: Scenario) -> PrepPoint:
    """The unique point c where the segments P00--P11 and P01--P10 cross.

    Raises
    ------
    DegenerateScenarioError
        If the closed segments do not intersect transversally.
    """
    t1, _ = _intersection_params(scenario)
    ax, ay = scenario.p00.as_tuple()
    bx, by = scenario.p11.as_tuple()
    return PrepPoint(ax + t1 * (bx - ax), ay + t1 * (by - ay))


@dataclass(frozen=True, slots=True)
class DecompositionWeights:
    """Mixture weights realizing the diagonal intersection c.

    p and q solve c = p P00 + (1-p) P11 = q P01 + (1-q) P10.  The common
    weight r = max(r_plus, r_minus) recasts both as mixtures of the parity
    midpoints: (1-r) P+ + r p_plus_prime = c = (1-r) P- + r p_minus_prime,
    where the branch attaining the maximum has its primed point at an
    original vertex and the other primed point is a convex combination
    interior to its diagonal.
    """

    c: PrepPoint
    p: float
    q: float
    r_plus: float
    r_minus: float
    r: float
    p_plus_prime: PrepPoint
    p_minus_prime: PrepPoint


def _norm(a: PrepPoint, b: PrepPoint) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def _clamped_point(x: float, y: float) -> PrepPoint:
    """PrepPoint with coordinates clipped against harmless float overshoot."""
    return PrepPoint(min(max(x, -1.0), 1.0), min(max(y, -1.0), 1.0))


def _branch_weight(mid: PrepPoint, c: PrepPoint, weight: float,
                   head: PrepPoint, tail: PrepPoint) -> tuple[float, PrepPoint]:
    """Ratio r and vertex V with (1-r) mid + r V = c along one diagonal.

    `head` is the vertex whose mixture weight is `weight` (the coefficient
    on head in c = weight*head + (1-weight)*tail).  For weight >= 1/2 the
    intersection sits on the head side of the midpoint, else the tail side.
    """
    vertex = head if weight >= 0.5 else tail
    span = _norm(mid, vertex)
    offset = _norm(mid, c)
    if span <= PARALLEL_DET_TOL:
        # Zero-length diagonal: c coincides with the midpoint, no mixing needed.
        return (0.0, vertex)
    return (offset / span, vertex)


def decomposition_weights(scenario: Scenario) -> DecompositionWeights:
    """Weights p, q and the common-weight recast of the intersection point.

    Returns
    -------
    DecompositionWeights
        With r_plus, r_minus the per-diagonal Euclidean length ratios,
        r their maximum, and primed points making the recast exact.

    Raises
    ------
    DegenerateScenarioError
        If the diagonals do not intersect, or the recast weight reaches 1
        (intersection at an original vertex leaves no mixing room).
    """
    t1, t2 = _intersection_params(scenario)
    c = diagonal_intersection(scenario)
    p = 1.0 - t1
    q = 1.0 - t2
    mixtures = parity_mixtures(scenario)
    r_plus, v_plus = _branch_weight(mixtures.p_plus, c, p, scenario.p00, scenario.p11)
    r_minus, v_minus = _branch_weight(mixtures.p_minus, c, q, scenario.p01, scenario.p10)
    r = max(r_plus, r_minus)
    if r >= 1.0 - PARALLEL_DET_TOL:
        raise DegenerateScenarioError(
            f"common weight r={r:.6g} leaves no mixing room; the intersection "
            "sits at an original vertex"
        )
    if r <= 0.0 or abs(r_plus - r_minus) <= PARALLEL_DET_TOL:
        # Tie (or no mixing needed): both recasts are exact at the vertices.
        p_plus_prime, p_minus_prime = v_plus, v_minus
    elif r_plus > r_minus:
        # The plus branch attains the max: its primed point is the vertex.
        p_plus_prime = v_plus
        p_minus_prime = _clamped_point((c.x - (1.0 - r) * mixtures.p_minus.x) / r,
                                       (c.y - (1.0 - r) * mixtures.p_minus.y) / r)
    else:
        p_minus_prime = v_minus
        p_plus_prime = _clamped_point((c.x - (1.0 - r) * mixtures.p_plus.x) / r,
                                      (c.y - (1.0 - r) * mixtures.p_plus.y) / r)
    return DecompositionWeights(c, p, q, r_plus, r_minus, r, p_plus_prime, p_minus_prime)


def _cross(o: tuple[float, float], a: tuple[float, float], b: tuple[float, float]) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Convex hull of a small 2D point set, counterclockwise, no duplicates.

    Monotone-chain construction; collinear boundary points are dropped.
    Intended for the tiny point sets of this scenario (at most 8 points).
    """
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) <= 2:
        return pts
    lower: list[tuple[float, float]] = []
    for pt in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], pt) <= 0.0:
            lower.pop()
        lower.append(pt)
    upper: list[tuple[float, float]] = []
    for pt in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], pt) <= 0.0:
            upper.pop()
        upper.append(pt)
    return lower[:-1] + upper[:-1]


def _point_strictly_inside(point: tuple[float, float],
                           hull: list[tuple[float, float]]) -> bool:
    if len(hull) < 3:
        return False
    n = len(hull)
    return all(_cross(hull[i], hull[(i + 1) % n], point) > PARALLEL_DET_TOL
               for i in range(n))


def ray_polytope_exit(origin: PrepPoint, through: PrepPoint,
                      hull_points: list[PrepPoint]) -> PrepPoint:
    """Exit point of the ray origin -> through on a convex hull boundary.

    The hull is computed from `hull_points`; the ray starts at `origin`
    (which must lie strictly inside) and passes through `through`.

    Raises
    ------
    InputDomainError
        If origin is not strictly inside the hull, or through == origin.
    """
    hull = convex_hull([p.as_tuple() for p in hull_points])
    o = origin.as_tuple()
    if not _point_strictly_inside(o, hull):
        raise InputDomainError("ray origin must lie strictly inside the hull")
    dx, dy = through.x - o[0], through.y - o[1]
    if math.hypot(dx, dy) <= PARALLEL_DET_TOL:
        raise InputDomainError("ray direction is undefined: through == origin")
    best_tau = None
    n = len(hull)
    for i in range(n):
        v1 = hull[i]
        v2 = hull[(i + 1) % n]
        ex, ey = v2[0] - v1[0], v2[1] - v1[1]
        det = dx * (-ey) - (-ex) * dy
        if abs(det) <= PARALLEL_DET_TOL:
            continue  # ray parallel to this edge
        rx, ry = v1[0] - o[0], v1[1] - o[1]
        tau = (rx * (-ey) - (-ex) * ry) / det
        sigma = (dx * ry - rx * dy) / det
        if tau > 0.0 and -PARALLEL_DET_TOL <= sigma <= 1.0 + PARALLEL_DET_TOL:
            if best_tau is None or tau > best_tau:
                best_tau = tau  # corner touches yield two hits; keep the exit
    if best_tau is None:
        raise InputDomainError("ray does not exit the hull; inconsistent geometry")
    return _clamped_point(o[0] + best_tau * dx, o[1] + best_tau * dy)
