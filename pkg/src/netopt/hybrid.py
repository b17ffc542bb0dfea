"""Two-fold uncertainty types and the crisp reductions of their chance
constraints: interval type-2 fuzzy, random-fuzzy and rough-fuzzy variables.

Every reduction returns plain floats and is pure.  The formulas are the
per-membership critical values of the generalized credibility measure, the
normal-around-fuzzy-mean capacity bounds, and the per-edge linearization of
rough-fuzzy chance constraints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ReductionDomainError, UnattainableLevelError
from .measures import (
    GaussianFuzzy,
    GeneralizedTrapezoidalFuzzy,
    TrapezoidalFuzzy,
    TriangularFuzzy,
    fuzzy_expected,
    gtrfv_critical_geq,
    gtrfv_critical_leq,
)

__all__ = [
    "IT2Trapezoidal",
    "RandomFuzzyNormal",
    "RoughFuzzy",
    "it2_reduce",
    "rf_expected_bound",
    "rf_chance_bound",
    "rough_fuzzy_coeff",
    "inv_norm",
    "norm_cdf",
]


@dataclass(frozen=True)
class IT2Trapezoidal:
    """Trapezoidal interval type-2 fuzzy variable (UMF, LMF).

    The footprint of uncertainty is bounded above by ``umf`` and below by
    ``lmf``: the LMF height may not exceed the UMF height and the LMF
    support must sit inside the UMF support.
    """

    umf: GeneralizedTrapezoidalFuzzy
    lmf: GeneralizedTrapezoidalFuzzy

    def __post_init__(self):
        if self.lmf.w > self.umf.w:
            raise ValueError("LMF height exceeds UMF height")
        if self.lmf.a < self.umf.a or self.lmf.d > self.umf.d:
            raise ValueError("LMF support not contained in UMF support")


@dataclass(frozen=True)
class RandomFuzzyNormal:
    """Normally distributed quantity whose mean is itself fuzzy.

    ``mean`` is a trapezoidal or Gaussian fuzzy number; ``sigma`` is the
    crisp variance of the normal layer.
    """

    mean: object
    sigma: float

    def __post_init__(self):
        if not isinstance(self.mean, (TrapezoidalFuzzy, GaussianFuzzy)):
            raise TypeError("random-fuzzy mean must be trapezoidal or Gaussian fuzzy")
        if self.sigma <= 0:
            raise ValueError("variance sigma must be positive")


@dataclass(frozen=True)
class RoughFuzzy:
    """Rough variable whose interval endpoints are shifts of one triangular
    fuzzy core: [core+o_m, core+o_n][core+o_p, core+o_q]."""

    core: TriangularFuzzy
    o_m: float
    o_n: float
    o_p: float
    o_q: float

    def __post_init__(self):
        if not (self.o_p <= self.o_m <= self.o_n <= self.o_q):
            raise ValueError("offsets must satisfy o_p <= o_m <= o_n <= o_q")


def it2_reduce(v: IT2Trapezoidal, level_u: float, level_l: float, direction: str):
    """Per-membership critical values (F_umf, F_lmf) of an IT2 trapezoid.

    ``direction`` is ``"leq"`` for constraints of the form value <= variable
    (demand style) and ``"geq"`` for value >= variable (capacity style).
    Levels exceeding the corresponding membership height raise.
    """
    if direction == "leq":
        f = gtrfv_critical_leq
    elif direction == "geq":
        f = gtrfv_critical_geq
    else:
        raise ValueError("direction must be 'leq' or 'geq'")
    try:
        fu = f(v.umf, level_u)
    except UnattainableLevelError as exc:
        raise UnattainableLevelError(f"UMF level {level_u}: {exc}") from exc
    try:
        fl = f(v.lmf, level_l)
    except UnattainableLevelError as exc:
        raise UnattainableLevelError(f"LMF level {level_l}: {exc}") from exc
    return fu, fl


def rf_expected_bound(v: RandomFuzzyNormal) -> float:
    """Expected capacity bound of a random-fuzzy normal quantity.

    The normal layer integrates out, leaving the fuzzy mean's expected
    value; the variance never enters.
    """
    return fuzzy_expected(v.mean)


# --- standard normal quantile --------------------------------------------

_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)


def norm_cdf(x: float) -> float:
    """Standard normal distribution function via the error function."""
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def inv_norm(p: float) -> float:
    """Standard normal quantile, |Phi(inv_norm(p)) - p| < 1e-10.

    Rational approximation refined by one Newton step on the erf-based
    distribution function.
    """
    if not 0.0 < p < 1.0:
        raise UnattainableLevelError("normal quantile needs 0 < p < 1")
    p_low, p_high = 0.02425, 1.0 - 0.02425
    if p < p_low:
        q = math.sqrt(-2.0 * math.log(p))
        x = ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
             / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    elif p <= p_high:
        q = p - 0.5
        r = q * q
        x = ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
             / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))
    else:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        x = -((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
              / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    # one Newton step: x -= (Phi(x) - p) / phi(x)
    err = norm_cdf(x) - p
    pdf = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    if pdf > 0.0:
        x -= err / pdf
    return x


def rf_chance_bound(v: RandomFuzzyNormal, pr_level: float, cr_level: float) -> float:
    """Capacity upper bound of a random-fuzzy chance constraint.

    ``pr_level`` is the inner probability level, ``cr_level`` the outer
    credibility level.  The trapezoidal-mean branch pairs cr_level > 0.5
    with the rising ramp and cr_level <= 0.5 with the falling ramp; the
    Gaussian-mean branch mirrors this.  The implied position of the shifted
    threshold is validated against the branch interval afterwards.
    """
    if not 0.0 < pr_level < 1.0:
        raise UnattainableLevelError("probability level must lie in (0, 1)")
    if not 0.0 <= cr_level <= 1.0:
        raise UnattainableLevelError("credibility level must lie in [0, 1]")
    shift = inv_norm(1.0 - pr_level) * math.sqrt(v.sigma)
    beta = cr_level
    mean = v.mean
    if isinstance(mean, TrapezoidalFuzzy):
        r1, r2, r3, r4 = mean.a, mean.b, mean.c, mean.d
        if beta > 0.5:
            bound = 2.0 * r2 - r1 - 2.0 * beta * (r2 - r1) + shift
            lo, hi = r1, r2
        else:
            bound = r4 - 2.0 * beta * (r4 - r3) + shift
            lo, hi = r3, r4
        b_val = bound - shift
        if not lo - 1e-9 <= b_val <= hi + 1e-9:
            raise ReductionDomainError(
                f"shifted threshold {b_val:.6g} outside branch interval [{lo}, {hi}] "
                f"for cr_level={cr_level}"
            )
        return bound
    # Gaussian fuzzy mean
    rho, delta = mean.rho, mean.delta
    if beta > 0.5:
        bound = rho - delta * math.sqrt(-math.log(2.0 - 2.0 * beta)) + shift
        ok = bound - shift <= rho + 1e-9
    else:
        bound = rho + delta * math.sqrt(-math.log(2.0 * beta)) + shift if beta > 0.0 else math.inf
        if beta == 0.0:
            raise UnattainableLevelError("credibility level 0 gives an unbounded capacity")
        ok = bound - shift >= rho - 1e-9
    if not ok:
        raise ReductionDomainError(
            f"shifted threshold {bound - shift:.6g} violates the Gaussian branch test "
            f"for cr_level={cr_level}"
        )
    return bound


def rough_fuzzy_coeff(v: RoughFuzzy, alpha: float, beta: float) -> float:
    """Crisp per-edge coefficient of a rough-fuzzy chance constraint.

    ``alpha`` is the inner trust level, ``beta`` the outer credibility
    level.  beta <= 0.5 selects the rising-ramp linearization and
    beta > 0.5 the falling-ramp one; the two branches are discontinuous at
    beta = 0.5 exactly as the source reduction states them.
    """
    if not 0.0 <= alpha <= 1.0:
        raise UnattainableLevelError("trust level alpha must lie in [0, 1]")
    if not 0.0 < beta <= 1.0:
        raise UnattainableLevelError("credibility level beta must lie in (0, 1]")
    u = v.core.lo + v.o_p
    vv = v.core.mode + v.o_p
    w = v.core.hi + v.o_p
    q1 = v.o_q - v.o_p
    u_t = u + 2.0 * alpha * q1
    v_t = vv + 2.0 * alpha * q1
    w_t = w + 2.0 * alpha * q1
    if beta <= 0.5:
        return u_t + 2.0 * beta * (v_t - u_t)
    return 2.0 * (vv + alpha * q1) - w_t + 2.0 * beta * (w_t - v_t)
