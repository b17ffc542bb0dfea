"""Classical multi-objective scalarizations, the argument-dependent OWA
operator, nondominated filtering and front-quality indicators.

Internal convention: all objectives are minimized; maximization objectives
are negated on ingest and un-negated when reporting.  Scalarizers operate
on multi-objective :class:`~netopt.crisp.CrispProgram` instances and
return single-objective programs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .crisp.linprog import Constraint, CrispProgram, Objective, Variable
from .errors import NormalizationError

__all__ = [
    "OwaResult", "owa_dependent", "scalarize_weighted", "scalarize_epsilon",
    "scalarize_goal_attainment", "scalarize_fuzzy_programming",
    "GlobalCriterion", "nondominated_filter", "dominates", "hv", "spread",
    "gd", "igd", "summarize", "normalize_front",
]


@dataclass(frozen=True)
class OwaResult:
    weights: tuple
    aggregate: float
    permutation: tuple


def owa_dependent(args) -> OwaResult:
    """Ordered weighted average with argument-dependent weights.

    Weights derive from each argument's similarity to the mean; equal
    arguments degenerate to uniform weights (the similarity normalizer
    would otherwise divide by zero).
    """
    values = [float(a) for a in args]
    n = len(values)
    if n == 0:
        raise ValueError("OWA needs at least one argument")
    order = tuple(sorted(range(n), key=lambda i: (-values[i], i)))
    mu = sum(values) / n
    total_dev = sum(abs(v - mu) for v in values)
    if total_dev == 0.0:
        weights = tuple([1.0 / n] * n)
        return OwaResult(weights, mu, order)
    sims = [1.0 - abs(values[i] - mu) / total_dev for i in order]
    s_total = sum(sims)
    weights = tuple(s / s_total for s in sims)
    aggregate = sum(w * values[i] for w, i in zip(weights, order))
    return OwaResult(weights, aggregate, order)


def _signed(obj: Objective):
    sign = 1.0 if obj.sense == "min" else -1.0
    return sign, np.asarray(obj.coeffs, dtype=float)


def scalarize_weighted(program: CrispProgram, weights, ideals=None) -> CrispProgram:
    """Weighted-sum scalarization (max-sense objectives enter negated).

    When ``ideals`` is given, each objective is divided by the magnitude of
    its ideal value before weighting.
    """
    if len(weights) != len(program.objectives):
        raise ValueError("one weight per objective required")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    combined = np.zeros(len(program.variables))
    constant = 0.0
    for k, (w, obj) in enumerate(zip(weights, program.objectives)):
        sign, coeffs = _signed(obj)
        scale = 1.0
        if ideals is not None:
            if ideals[k] == 0:
                raise NormalizationError(f"ideal value of objective {k} is zero")
            scale = 1.0 / abs(ideals[k])
        combined += w * sign * scale * coeffs
        constant += w * sign * scale * obj.constant
    return program.with_objective(Objective("min", tuple(combined), constant))


def scalarize_epsilon(program: CrispProgram, keep_index: int, eps) -> CrispProgram:
    """Keep one objective; bound the others by the epsilon vector.

    ``eps`` entries are stated in each objective's own sense: minimized
    objectives become <= constraints, maximized ones >= constraints.
    """
    extra = []
    e_iter = iter(eps)
    for k, obj in enumerate(program.objectives):
        if k == keep_index:
            continue
        bound = float(next(e_iter))
        rel = "<=" if obj.sense == "min" else ">="
        extra.append(Constraint(tuple(obj.coeffs), rel, bound - obj.constant,
                                name=f"eps_{k}"))
    out = program.with_constraints(extra)
    return CrispProgram(out.variables, [program.objectives[keep_index]], out.constraints)


def scalarize_goal_attainment(program: CrispProgram, goals, weights) -> CrispProgram:
    """Introduce the attainment factor and couple every objective to its goal."""
    if not all(0.0 <= w <= 1.0 for w in weights):
        raise ValueError("goal-attainment weights must lie in [0, 1]")
    n = len(program.variables)
    variables = list(program.variables) + [Variable("lam", 0.0)]
    constraints = [Constraint(tuple(c.coeffs) + (0.0,), c.relation, c.rhs, c.name)
                   for c in program.constraints]
    for obj, goal, w in zip(program.objectives, goals, weights):
        sign, coeffs = _signed(obj)
        row = tuple(sign * coeffs) + (-float(w),)
        constraints.append(Constraint(row, "<=", sign * (goal - obj.constant),
                                      name="goal"))
    objective = Objective("min", (0.0,) * n + (1.0,))
    return CrispProgram(variables, [objective], constraints)


def scalarize_fuzzy_programming(program: CrispProgram, bounds) -> CrispProgram:
    """Maximize the overall satisfaction level against [lower, upper] bounds.

    ``bounds[k]`` is the (best, worst) pair of objective k in its own
    sense.  Degenerate bounds drop that objective from the coupling.
    """
    n = len(program.variables)
    variables = list(program.variables) + [Variable("lam", 0.0, 1.0)]
    constraints = [Constraint(tuple(c.coeffs) + (0.0,), c.relation, c.rhs, c.name)
                   for c in program.constraints]
    for obj, (best, worst) in zip(program.objectives, bounds):
        span = abs(worst - best)
        if span == 0.0:
            continue
        sign, coeffs = _signed(obj)
        # sign*z <= sign*worst - lam * span
        row = tuple(sign * coeffs) + (span,)
        constraints.append(Constraint(row, "<=", sign * (worst - obj.constant),
                                      name="membership"))
    objective = Objective("max", (0.0,) * n + (1.0,))
    return CrispProgram(variables, [objective], constraints)


class GlobalCriterion:
    """Relative-deviation composite in the L_omega norm.

    Acts as an evaluator over objective vectors; model builders minimize it
    by enumerating candidate nondominated points.
    """

    def __init__(self, senses, ideals, omega: float = 2.0):
        if any(z == 0 for z in ideals):
            raise NormalizationError("global criterion needs nonzero ideal values")
        self.senses = tuple(senses)
        self.ideals = tuple(float(z) for z in ideals)
        self.omega = float(omega)

    def evaluate(self, zvec) -> float:
        total = 0.0
        for sense, ideal, z in zip(self.senses, self.ideals, zvec):
            dev = (ideal - z) if sense == "max" else (z - ideal)
            total += abs(dev / ideal) ** self.omega
        return total ** (1.0 / self.omega)

    def solve_over(self, points):
        """Return (best point, value) over an iterable of (zvec, payload)."""
        best = None
        best_val = math.inf
        for zvec, payload in points:
            val = self.evaluate(zvec)
            if val < best_val - 1e-12:
                best, best_val = (zvec, payload), val
        if best is None:
            raise ValueError("no candidate points supplied")
        return best[0], best[1], best_val


# ---------------------------------------------------------------------------
# dominance and indicators (all-minimization convention)
# ---------------------------------------------------------------------------

def dominates(p, q, tol=0.0) -> bool:
    """True if p weakly improves every coordinate and strictly one."""
    better = False
    for a, b in zip(p, q):
        if a > b + tol:
            return False
        if a < b - tol:
            better = True
    return better


def nondominated_filter(points):
    """Maximal nondominated subset of objective vectors, stable order."""
    pts = [tuple(p) for p in points]
    keep = []
    for i, p in enumerate(pts):
        dominated = False
        for j, q in enumerate(pts):
            if i != j and (dominates(q, p) or (q == p and j < i)):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return keep


def _check_reference(points, reference):
    for p in points:
        if any(pi > ri for pi, ri in zip(p, reference)):
            raise ValueError(f"reference point {reference} does not bound point {p}")


def hv(points, reference) -> float:
    """Hypervolume of the region dominated by ``points`` up to ``reference``.

    Exact: 2-D by sweep, 3-D by slab decomposition along the last axis.
    """
    pts = [tuple(map(float, p)) for p in points]
    if not pts:
        return 0.0
    arity = len(pts[0])
    _check_reference(pts, reference)
    idx = nondominated_filter(pts)
    pts = [pts[i] for i in idx]
    if arity == 1:
        return reference[0] - min(p[0] for p in pts)
    if arity == 2:
        pts.sort(key=lambda p: (p[0], p[1]))
        area = 0.0
        y_prev = reference[1]
        for x, y in pts:
            if y < y_prev:
                area += (reference[0] - x) * (y_prev - y)
                y_prev = y
        return area
    if arity == 3:
        zs = sorted({p[2] for p in pts})
        total = 0.0
        for k, z in enumerate(zs):
            z_next = zs[k + 1] if k + 1 < len(zs) else reference[2]
            slab = [p[:2] for p in pts if p[2] <= z]
            if slab and z_next > z:
                total += hv(slab, reference[:2]) * (z_next - z)
        return total
    raise NotImplementedError("exact hypervolume implemented for up to 3 objectives")


def _sq_dist(p, q) -> float:
    return sum((a - b) ** 2 for a, b in zip(p, q))


def spread(front, pf) -> float:
    """Diversity measure of ``front`` against the reference front ``pf``.

    Extreme solutions are the per-objective minimizers of ``pf``; distances
    are squared Euclidean nearest-neighbour distances into the front.
    """
    front = [tuple(p) for p in front]
    pf = [tuple(p) for p in pf]
    if not front or not pf:
        raise ValueError("spread needs nonempty fronts")
    arity = len(pf[0])

    def d(x):
        cands = [_sq_dist(x, y) for y in front if y != x]
        if not cands:
            return 0.0
        return min(cands)

    extremes = [min(pf, key=lambda p: p[k]) for k in range(arity)]
    d_ext = sum(d(e) for e in extremes)
    dists = [d(x) for x in pf]
    mean_d = sum(dists) / len(dists)
    numerator = d_ext + sum(abs(dx - mean_d) for dx in dists)
    denominator = d_ext + len(pf) * mean_d
    if denominator == 0.0:
        return 0.0
    return numerator / denominator


def gd(front, pf) -> float:
    """Generational distance: root-sum-square of nearest distances over n."""
    front = [tuple(p) for p in front]
    if not front or not pf:
        raise ValueError("gd needs nonempty fronts")
    total = sum(min(_sq_dist(p, q) for q in pf) for p in front)
    return math.sqrt(total) / len(front)


def igd(front, pf) -> float:
    """Inverted generational distance: mean distance from pf into the front."""
    front = [tuple(p) for p in front]
    if not front or not pf:
        raise ValueError("igd needs nonempty fronts")
    total = sum(math.sqrt(min(_sq_dist(q, p) for p in front)) for q in pf)
    return total / len(pf)


def summarize(samples) -> dict:
    """Mean, sample sd, median, IQR, min and max of a nonempty sample."""
    data = np.asarray(list(samples), dtype=float)
    if data.size == 0:
        raise ValueError("summarize needs at least one sample")
    sd = float(np.std(data, ddof=1)) if data.size > 1 else 0.0
    q1, q3 = np.percentile(data, [25.0, 75.0])
    return {
        "mean": float(np.mean(data)),
        "sd": sd,
        "median": float(np.median(data)),
        "iqr": float(q3 - q1),
        "min": float(np.min(data)),
        "max": float(np.max(data)),
    }


def normalize_front(front, reference_front):
    """Scale objectives to [0, 1] per coordinate against a reference front.

    Degenerate coordinates (zero range) map to 0.  Used before indicator
    computation so hypervolume against reference point (1.1, ..., 1.1) is
    comparable across instances.
    """
    ref = np.asarray(list(reference_front), dtype=float)
    pts = np.asarray(list(front), dtype=float)
    lo = ref.min(axis=0)
    hi = ref.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    return [(tuple((np.asarray(p) - lo) / span)) for p in pts]
