"""Closed-form measure algebra for the three base uncertainty families.

Three kinds of scalar uncertain quantities are covered, each with its own
self-dual measure:

* type-1 fuzzy variables (triangular, trapezoidal, Gaussian and generalized
  trapezoidal) under the credibility measure,
* rough variables (a certain interval nested in a possible interval) under
  the trust measure,
* Liu-style uncertain variables (linear, zigzag, normal) under the uncertain
  measure.

All values are immutable; every operation is a pure function of its
arguments.  Piecewise formulas evaluate boundary points with the left
branch; interior continuity is asserted in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyCombinationError, UnattainableLevelError

__all__ = [
    "TriangularFuzzy",
    "TrapezoidalFuzzy",
    "GaussianFuzzy",
    "GeneralizedTrapezoidalFuzzy",
    "RoughVariable",
    "LinearUncertain",
    "ZigzagUncertain",
    "NormalUncertain",
    "membership",
    "cred_leq",
    "cred_geq",
    "gen_cred_leq",
    "gen_cred_geq",
    "fuzzy_expected",
    "gtrfv_critical_leq",
    "gtrfv_critical_geq",
    "gfn_critical_geq",
    "trust_leq",
    "trust_geq",
    "rough_optimistic",
    "rough_pessimistic",
    "unc_cdf",
    "unc_inv",
    "unc_expected",
    "unc_optimistic",
    "unc_pessimistic",
    "unc_linear_combo_inverse",
    "check_level",
]

_SQRT3_OVER_PI = math.sqrt(3.0) / math.pi


def check_level(alpha: float, name: str = "confidence level") -> float:
    """Validate a confidence level in [0, 1]."""
    if not 0.0 <= alpha <= 1.0:
        raise UnattainableLevelError(f"{name} must lie in [0, 1], got {alpha!r}")
    return float(alpha)


# ---------------------------------------------------------------------------
# fuzzy variables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TriangularFuzzy:
    """Triangular fuzzy number (lo, mode, hi).

    Weak ordering lo <= mode <= hi is accepted so that degenerate (crisp)
    triangles occurring in published instance data remain representable.
    """

    lo: float
    mode: float
    hi: float

    def __post_init__(self):
        if not (self.lo <= self.mode <= self.hi):
            raise ValueError(f"triangular fuzzy number needs lo <= mode <= hi, got {self}")

    def shifted(self, offset: float) -> "TriangularFuzzy":
        return TriangularFuzzy(self.lo + offset, self.mode + offset, self.hi + offset)


@dataclass(frozen=True)
class TrapezoidalFuzzy:
    """Trapezoidal fuzzy number (a, b, c, d) with a <= b <= c <= d."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise ValueError(f"trapezoidal fuzzy number needs a <= b <= c <= d, got {self}")


@dataclass(frozen=True)
class GaussianFuzzy:
    """Gaussian fuzzy number with peak ``rho`` and width ``delta > 0``."""

    rho: float
    delta: float

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("Gaussian fuzzy number needs delta > 0")


@dataclass(frozen=True)
class GeneralizedTrapezoidalFuzzy:
    """Trapezoidal fuzzy variable of height ``w`` in (0, 1]."""

    a: float
    b: float
    c: float
    d: float
    w: float = 1.0

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise ValueError(f"generalized trapezoid needs a <= b <= c <= d, got {self}")
        if not (0.0 < self.w <= 1.0):
            raise ValueError("height w must lie in (0, 1]")


def _ramp(x: float, left: float, right: float, lo: float, hi: float) -> float:
    # linear interpolation with a step convention when the segment collapses
    if right == left:
        return hi
    return lo + (hi - lo) * (x - left) / (right - left)


def membership(v, x: float) -> float:
    """Membership degree mu_v(x) of a fuzzy variant at ``x``."""
    if isinstance(v, TriangularFuzzy):
        if x < v.lo or x > v.hi:
            return 0.0
        if x <= v.mode:
            return _ramp(x, v.lo, v.mode, 0.0, 1.0)
        return _ramp(x, v.mode, v.hi, 1.0, 0.0)
    if isinstance(v, TrapezoidalFuzzy):
        if x < v.a or x > v.d:
            return 0.0
        if x < v.b:
            return _ramp(x, v.a, v.b, 0.0, 1.0)
        if x <= v.c:
            return 1.0
        return _ramp(x, v.c, v.d, 1.0, 0.0)
    if isinstance(v, GeneralizedTrapezoidalFuzzy):
        if x < v.a or x > v.d:
            return 0.0
        if x < v.b:
            return _ramp(x, v.a, v.b, 0.0, v.w)
        if x <= v.c:
            return v.w
        return _ramp(x, v.c, v.d, v.w, 0.0)
    if isinstance(v, GaussianFuzzy):
        z = (x - v.rho) / v.delta
        return math.exp(-z * z)
    raise TypeError(f"no membership function for {type(v).__name__}")


def cred_leq(v, x: float) -> float:
    """Credibility Cr{v <= x} for a normalized fuzzy variant."""
    if isinstance(v, TrapezoidalFuzzy):
        if x < v.a:
            return 0.0
        if x < v.b:
            return (x - v.a) / (2.0 * (v.b - v.a))
        if x < v.c:
            return 0.5
        if x < v.d:
            return (x + v.d - 2.0 * v.c) / (2.0 * (v.d - v.c))
        return 1.0
    if isinstance(v, TriangularFuzzy):
        if x < v.lo:
            return 0.0
        if x < v.mode:
            return (x - v.lo) / (2.0 * (v.mode - v.lo))
        if x < v.hi:
            return (x + v.hi - 2.0 * v.mode) / (2.0 * (v.hi - v.mode))
        return 1.0
    if isinstance(v, GaussianFuzzy):
        z = (v.rho - x) / v.delta
        if x <= v.rho:
            return 0.5 * math.exp(-z * z)
        return 1.0 - 0.5 * math.exp(-z * z)
    raise TypeError(f"no credibility distribution for {type(v).__name__}")


def cred_geq(v, x: float) -> float:
    """Credibility Cr{v >= x}; dual of :func:`cred_leq`."""
    if isinstance(v, TrapezoidalFuzzy):
        if x < v.a:
            return 1.0
        if x < v.b:
            return (2.0 * v.b - x - v.a) / (2.0 * (v.b - v.a))
        if x < v.c:
            return 0.5
        if x < v.d:
            return (v.d - x) / (2.0 * (v.d - v.c))
        return 0.0
    if isinstance(v, TriangularFuzzy):
        if x < v.lo:
            return 1.0
        if x < v.mode:
            return (2.0 * v.mode - v.lo - x) / (2.0 * (v.mode - v.lo))
        if x < v.hi:
            return (v.hi - x) / (2.0 * (v.hi - v.mode))
        return 0.0
    if isinstance(v, GaussianFuzzy):
        z = (v.rho - x) / v.delta
        if x <= v.rho:
            return 1.0 - 0.5 * math.exp(-z * z)
        return 0.5 * math.exp(-z * z)
    raise TypeError(f"no credibility distribution for {type(v).__name__}")


def gen_cred_leq(v: GeneralizedTrapezoidalFuzzy, x: float) -> float:
    """Generalized credibility C̃r{v <= x}; reaches at most the height w."""
    w = v.w
    if x <= v.a:
        return 0.0
    if x <= v.b:
        return w * (x - v.a) / (2.0 * (v.b - v.a)) if v.b > v.a else 0.5 * w
    if x <= v.c:
        return 0.5 * w
    if x <= v.d:
        return w * (x + v.d - 2.0 * v.c) / (2.0 * (v.d - v.c)) if v.d > v.c else w
    return w


def gen_cred_geq(v: GeneralizedTrapezoidalFuzzy, x: float) -> float:
    """Generalized credibility C̃r{v >= x} = w - C̃r{v <= x} pointwise."""
    w = v.w
    if x <= v.a:
        return w
    if x <= v.b:
        return w - w * (x - v.a) / (2.0 * (v.b - v.a)) if v.b > v.a else 0.5 * w
    if x <= v.c:
        return 0.5 * w
    if x <= v.d:
        return w * (v.d - x) / (2.0 * (v.d - v.c)) if v.d > v.c else 0.0
    return 0.0


def fuzzy_expected(v) -> float:
    """Expected value of a normalized fuzzy variant (credibility integral)."""
    if isinstance(v, TrapezoidalFuzzy):
        return 0.25 * (v.a + v.b + v.c + v.d)
    if isinstance(v, TriangularFuzzy):
        return 0.25 * (v.lo + 2.0 * v.mode + v.hi)
    if isinstance(v, GaussianFuzzy):
        return v.rho
    raise TypeError(f"no closed-form expected value for {type(v).__name__}")


def gtrfv_critical_leq(v: GeneralizedTrapezoidalFuzzy, alpha: float) -> float:
    """Smallest x with C̃r{v <= x} >= alpha, for 0 < alpha <= w."""
    w = v.w
    if not 0.0 < alpha <= w:
        raise UnattainableLevelError(
            f"level {alpha} exceeds attainable range (0, {w}] of the generalized trapezoid"
        )
    if alpha <= 0.5 * w:
        return ((w - 2.0 * alpha) * v.a + 2.0 * alpha * v.b) / w
    return (2.0 * (w - alpha) * v.c + (2.0 * alpha - w) * v.d) / w


def gtrfv_critical_geq(v: GeneralizedTrapezoidalFuzzy, alpha: float) -> float:
    """Largest x with C̃r{v >= x} >= alpha, for 0 < alpha <= w."""
    w = v.w
    if not 0.0 < alpha <= w:
        raise UnattainableLevelError(
            f"level {alpha} exceeds attainable range (0, {w}] of the generalized trapezoid"
        )
    if alpha <= 0.5 * w:
        return ((w - 2.0 * alpha) * v.d + 2.0 * alpha * v.c) / w
    return (2.0 * (w - alpha) * v.b + (2.0 * alpha - w) * v.a) / w


def gfn_critical_geq(v: GaussianFuzzy, alpha: float) -> float:
    """Largest x with Cr{v >= x} >= alpha for a Gaussian fuzzy number."""
    if not 0.0 < alpha < 1.0:
        raise UnattainableLevelError("Gaussian critical value needs 0 < alpha < 1")
    if alpha > 0.5:
        return v.rho - v.delta * math.sqrt(-math.log(2.0 - 2.0 * alpha))
    return v.rho + v.delta * math.sqrt(-math.log(2.0 * alpha))


# ---------------------------------------------------------------------------
# rough variables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RoughVariable:
    """Rough variable ([a, b], [c, d]) with the certain interval [a, b]
    nested in the possible interval [c, d]."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.c <= self.a <= self.b <= self.d):
            raise ValueError(f"rough variable needs c <= a <= b <= d, got {self}")
        if self.c == self.d:
            raise ValueError("possible interval [c, d] must have positive length")

    @property
    def is_interval(self) -> bool:
        """True when lower and upper approximations coincide."""
        return self.a == self.c and self.b == self.d


def trust_leq(r: RoughVariable, x: float) -> float:
    """Trust Tr{r <= x}: mean of lower- and upper-approximation measures."""
    a, b, c, d = r.a, r.b, r.c, r.d
    if x <= c:
        return 0.0
    if x <= a:
        return (x - c) / (2.0 * (d - c))
    if x <= b:
        inner = (x - a) / (b - a) if b > a else 1.0
        return 0.5 * (inner + (x - c) / (d - c))
    if x <= d:
        return 0.5 * (1.0 + (x - c) / (d - c))
    return 1.0


def trust_geq(r: RoughVariable, x: float) -> float:
    """Trust Tr{r >= x} = 1 - Tr{r <= x} at every point."""
    a, b, c, d = r.a, r.b, r.c, r.d
    if x >= d:
        return 0.0
    if x >= b:
        return (d - x) / (2.0 * (d - c))
    if x >= a:
        inner = (b - x) / (b - a) if b > a else 0.0
        return 0.5 * ((d - x) / (d - c) + inner)
    if x >= c:
        return 0.5 * (1.0 + (d - x) / (d - c))
    return 1.0


def rough_optimistic(r: RoughVariable, alpha: float) -> float:
    """alpha-optimistic value sup{x : Tr{r >= x} >= alpha}."""
    check_level(alpha)
    a, b, c, d = r.a, r.b, r.c, r.d
    if r.is_interval:
        return alpha * a + (1.0 - alpha) * b
    if alpha <= (d - b) / (2.0 * (d - c)):
        return (1.0 - 2.0 * alpha) * d + 2.0 * alpha * c
    if alpha >= (2.0 * d - a - c) / (2.0 * (d - c)):
        return 2.0 * (1.0 - alpha) * d + (2.0 * alpha - 1.0) * c
    return (d * (b - a) + b * (d - c) - 2.0 * alpha * (b - a) * (d - c)) / ((b - a) + (d - c))


def rough_pessimistic(r: RoughVariable, alpha: float) -> float:
    """alpha-pessimistic value inf{x : Tr{r <= x} >= alpha}."""
    check_level(alpha)
    a, b, c, d = r.a, r.b, r.c, r.d
    if r.is_interval:
        return (1.0 - alpha) * a + alpha * b
    if alpha <= (a - c) / (2.0 * (d - c)):
        return (1.0 - 2.0 * alpha) * c + 2.0 * alpha * d
    if alpha >= (b + d - 2.0 * c) / (2.0 * (d - c)):
        return 2.0 * (1.0 - alpha) * c + (2.0 * alpha - 1.0) * d
    return (c * (b - a) + a * (d - c) + 2.0 * alpha * (b - a) * (d - c)) / ((b - a) + (d - c))


# ---------------------------------------------------------------------------
# uncertain variables (Liu)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearUncertain:
    """Linear uncertain variable L(a, b) with a < b."""

    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("linear uncertain variable needs a < b")


@dataclass(frozen=True)
class ZigzagUncertain:
    """Zigzag uncertain variable Z(a, b, c) with a < b < c."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a < self.b < self.c):
            raise ValueError("zigzag uncertain variable needs a < b < c")


@dataclass(frozen=True)
class NormalUncertain:
    """Normal uncertain variable N(rho, sigma) with logistic-shaped distribution."""

    rho: float
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("normal uncertain variable needs sigma > 0")


def unc_cdf(u, x: float) -> float:
    """Uncertainty distribution M{u <= x}."""
    if isinstance(u, LinearUncertain):
        if x < u.a:
            return 0.0
        if x < u.b:
            return (x - u.a) / (u.b - u.a)
        return 1.0
    if isinstance(u, ZigzagUncertain):
        if x < u.a:
            return 0.0
        if x < u.b:
            return (x - u.a) / (2.0 * (u.b - u.a))
        if x < u.c:
            return (x + u.c - 2.0 * u.b) / (2.0 * (u.c - u.b))
        return 1.0
    if isinstance(u, NormalUncertain):
        return 1.0 / (1.0 + math.exp(math.pi * (u.rho - x) / (u.sigma * math.sqrt(3.0))))
    raise TypeError(f"no uncertainty distribution for {type(u).__name__}")


def unc_inv(u, alpha: float) -> float:
    """Inverse uncertainty distribution at a regular point alpha.

    Bounded variants clamp alpha in {0, 1} to their support endpoints;
    the unbounded normal variant raises instead of returning infinities.
    """
    check_level(alpha)
    if isinstance(u, LinearUncertain):
        return u.a + alpha * (u.b - u.a)
    if isinstance(u, ZigzagUncertain):
        if alpha < 0.5:
            return u.a + 2.0 * alpha * (u.b - u.a)
        return 2.0 * u.b - u.c + 2.0 * alpha * (u.c - u.b)
    if isinstance(u, NormalUncertain):
        if alpha in (0.0, 1.0):
            raise UnattainableLevelError(
                "normal uncertain inverse is unbounded at alpha in {0, 1}"
            )
        return u.rho + u.sigma * _SQRT3_OVER_PI * math.log(alpha / (1.0 - alpha))
    raise TypeError(f"no inverse distribution for {type(u).__name__}")


def unc_expected(u) -> float:
    """Expected value of an uncertain variable."""
    if isinstance(u, LinearUncertain):
        return 0.5 * (u.a + u.b)
    if isinstance(u, ZigzagUncertain):
        return 0.25 * (u.a + 2.0 * u.b + u.c)
    if isinstance(u, NormalUncertain):
        return u.rho
    raise TypeError(f"no expected value for {type(u).__name__}")


def unc_optimistic(u, alpha: float) -> float:
    """alpha-optimistic value sup{t : M{u >= t} >= alpha}."""
    check_level(alpha)
    if isinstance(u, LinearUncertain):
        return alpha * u.a + (1.0 - alpha) * u.b
    if isinstance(u, ZigzagUncertain):
        if alpha < 0.5:
            return 2.0 * alpha * u.b + (1.0 - 2.0 * alpha) * u.c
        return (2.0 * alpha - 1.0) * u.a + (2.0 - 2.0 * alpha) * u.b
    if isinstance(u, NormalUncertain):
        if alpha in (0.0, 1.0):
            raise UnattainableLevelError("normal optimistic value unbounded at alpha in {0, 1}")
        return u.rho - u.sigma * _SQRT3_OVER_PI * math.log(alpha / (1.0 - alpha))
    raise TypeError(f"no optimistic value for {type(u).__name__}")


def unc_pessimistic(u, alpha: float) -> float:
    """alpha-pessimistic value inf{t : M{u <= t} >= alpha}."""
    check_level(alpha)
    if isinstance(u, LinearUncertain):
        return (1.0 - alpha) * u.a + alpha * u.b
    if isinstance(u, ZigzagUncertain):
        if alpha < 0.5:
            return (1.0 - 2.0 * alpha) * u.a + 2.0 * alpha * u.b
        return (2.0 - 2.0 * alpha) * u.b + (2.0 * alpha - 1.0) * u.c
    if isinstance(u, NormalUncertain):
        if alpha in (0.0, 1.0):
            raise UnattainableLevelError("normal pessimistic value unbounded at alpha in {0, 1}")
        return u.rho + u.sigma * _SQRT3_OVER_PI * math.log(alpha / (1.0 - alpha))
    raise TypeError(f"no pessimistic value for {type(u).__name__}")


def unc_linear_combo_inverse(terms, alpha: float) -> float:
    """Inverse distribution of sum_i coeff_i * u_i for independent terms.

    ``terms`` is a sequence of (uncertain variant, real coefficient).
    Positive coefficients pull the inverse at ``alpha``; negative ones at
    ``1 - alpha``, matching the monotone composition rule.
    """
    terms = list(terms)
    if not terms:
        raise EmptyCombinationError("linear combination of uncertain terms is empty")
    total = 0.0
    for u, coeff in terms:
        if coeff > 0:
            total += coeff * unc_inv(u, alpha)
        elif coeff < 0:
            total += coeff * unc_inv(u, 1.0 - alpha)
    return total
