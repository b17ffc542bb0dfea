"""Dense two-phase simplex and a small branch-and-bound layer.

The programs produced by the chance-constraint reductions are desk scale
(tens of variables), so the tableau is kept dense and pivoting uses
Bland's rule throughout to rule out cycling.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ResourceLimitError

__all__ = ["Variable", "Constraint", "Objective", "CrispProgram", "Solution",
           "simplex_lp", "branch_bound"]

_PIVOT_TOL = 1e-9
_FEAS_TOL = 1e-7


@dataclass(frozen=True)
class Variable:
    name: str
    lower: float = 0.0
    upper: float = math.inf
    binary: bool = False


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: str  # '<=', '=', '>='
    rhs: float
    name: str = ""

    def __post_init__(self):
        if self.relation not in ("<=", "=", ">="):
            raise ValueError(f"bad relation {self.relation!r}")


@dataclass(frozen=True)
class Objective:
    sense: str  # 'min' | 'max'
    coeffs: tuple
    constant: float = 0.0

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError(f"bad sense {self.sense!r}")

    def value(self, x) -> float:
        return float(np.dot(self.coeffs, x)) + self.constant


@dataclass
class CrispProgram:
    """One or more linear objectives over bounded continuous/binary variables."""

    variables: list
    objectives: list
    constraints: list = field(default_factory=list)

    def __post_init__(self):
        n = len(self.variables)
        for obj in self.objectives:
            if len(obj.coeffs) != n:
                raise ValueError("objective arity mismatch")
        for con in self.constraints:
            if len(con.coeffs) != n:
                raise ValueError("constraint arity mismatch")

    @property
    def binary_indices(self):
        return [i for i, v in enumerate(self.variables) if v.binary]

    def compiled(self):
        """Cached dense (A, rhs, relations) of the constraint system."""
        cache = getattr(self, "_compiled", None)
        if cache is None:
            a = np.array([c.coeffs for c in self.constraints], dtype=float) \
                if self.constraints else np.zeros((0, len(self.variables)))
            b = np.array([c.rhs for c in self.constraints], dtype=float)
            rels = [c.relation for c in self.constraints]
            cache = (a, b, rels)
            object.__setattr__(self, "_compiled", cache)
        return cache

    def with_constraints(self, extra):
        return CrispProgram(self.variables, self.objectives, list(self.constraints) + list(extra))

    def with_objective(self, objective):
        return CrispProgram(self.variables, [objective], list(self.constraints))

    def check_feasible(self, x, tol=_FEAS_TOL):
        for con in self.constraints:
            lhs = float(np.dot(con.coeffs, x))
            if con.relation == "<=" and lhs > con.rhs + tol:
                return False
            if con.relation == ">=" and lhs < con.rhs - tol:
                return False
            if con.relation == "=" and abs(lhs - con.rhs) > tol:
                return False
        for xi, v in zip(x, self.variables):
            if xi < v.lower - tol or xi > v.upper + tol:
                return False
        return True


@dataclass
class Solution:
    status: str  # 'optimal' | 'infeasible' | 'unbounded'
    x: np.ndarray | None = None
    objective: float | None = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _bland_pivot_col(cost_row, tol=_PIVOT_TOL):
    neg = np.nonzero(cost_row < -tol)[0]
    return int(neg[0]) if neg.size else -1


def _ratio_row(tableau, col, basis, tol=_PIVOT_TOL):
    column = tableau[:-1, col]
    mask = column > tol
    if not mask.any():
        return -1
    rows = np.nonzero(mask)[0]
    ratios = tableau[rows, -1] / column[rows]
    ties = rows[ratios <= ratios.min() + 1e-12]
    basis_arr = np.asarray(basis)
    return int(ties[np.argmin(basis_arr[ties])])


def _pivot(tableau, row, col):
    tableau[row] /= tableau[row, col]
    for i in range(tableau.shape[0]):
        if i != row and abs(tableau[i, col]) > 1e-14:
            tableau[i] -= tableau[i, col] * tableau[row]


def _run_simplex(tableau, basis):
    """Minimize the last tableau row; returns 'optimal' or 'unbounded'."""
    while True:
        col = _bland_pivot_col(tableau[-1, :-1])
        if col < 0:
            return "optimal"
        row = _ratio_row(tableau, col, basis)
        if row < 0:
            return "unbounded"
        _pivot(tableau, row, col)
        basis[row] = col


def simplex_lp(program: CrispProgram, objective_index: int = 0,
               lower_override=None, upper_override=None) -> Solution:
    """Solve a single-objective LP relaxation of ``program``.

    Binary variables are treated as continuous in [0, 1] clipped to their
    declared bounds; call :func:`branch_bound` for the integral optimum.
    Bound overrides allow branch-and-bound to fix variables without adding
    constraint rows.
    """
    n = len(program.variables)
    obj = program.objectives[objective_index]
    sense = 1.0 if obj.sense == "min" else -1.0
    c = sense * np.asarray(obj.coeffs, dtype=float)

    # shift lower bounds to zero; upper bounds become extra rows
    lowers = np.array([v.lower for v in program.variables], dtype=float)
    uppers = np.array([min(v.upper, 1.0) if v.binary else v.upper
                       for v in program.variables], dtype=float)
    if lower_override is not None:
        lowers = np.maximum(lowers, lower_override)
    if upper_override is not None:
        uppers = np.minimum(uppers, upper_override)
    if np.any(lowers > uppers + 1e-12):
        return Solution("infeasible")
    if np.any(~np.isfinite(lowers)):
        raise ValueError("free variables are not supported; give finite lower bounds")
    pinned = np.isfinite(uppers) & (uppers - lowers <= 1e-12)
    c = np.where(pinned, 0.0, c)
    a0, b0, rels0 = program.compiled()
    a_con = a0.copy()
    if pinned.any():
        a_con[:, pinned] = 0.0
    b_con = b0 - a0 @ lowers
    ub_idx = [j for j in range(n) if math.isfinite(uppers[j]) and not pinned[j]]
    m = len(rels0) + len(ub_idx)
    a = np.zeros((m, n))
    b = np.zeros(m)
    a[: len(rels0)] = a_con
    b[: len(rels0)] = b_con
    relations = list(rels0)
    for offset, j in enumerate(ub_idx):
        a[len(rels0) + offset, j] = 1.0
        b[len(rels0) + offset] = uppers[j] - lowers[j]
        relations.append("<=")
    flip = b < 0
    if flip.any():
        a[flip] = -a[flip]
        b[flip] = -b[flip]
        swap = {"<=": ">=", ">=": "<=", "=": "="}
        relations = [swap[r] if f else r for r, f in zip(relations, flip)]

    n_slack = sum(1 for r in relations if r != "=")
    n_art = sum(1 for r in relations if r != "<=")
    total = n + n_slack + n_art
    tableau = np.zeros((m + 1, total + 1))
    tableau[:m, :n] = a
    tableau[:m, -1] = b
    basis = [0] * m
    s_at, a_at = n, n + n_slack
    art_cols = []
    for i, rel in enumerate(relations):
        if rel == "<=":
            tableau[i, s_at] = 1.0
            basis[i] = s_at
            s_at += 1
        elif rel == ">=":
            tableau[i, s_at] = -1.0
            s_at += 1
            tableau[i, a_at] = 1.0
            basis[i] = a_at
            art_cols.append(a_at)
            a_at += 1
        else:
            tableau[i, a_at] = 1.0
            basis[i] = a_at
            art_cols.append(a_at)
            a_at += 1

    if art_cols:
        # phase 1: minimize artificial sum
        tableau[-1, art_cols] = 1.0
        for i in range(m):
            if basis[i] in art_cols:
                tableau[-1] -= tableau[i]
        status = _run_simplex(tableau, basis)
        if status == "unbounded" or tableau[-1, -1] < -_FEAS_TOL:
            return Solution("infeasible")
        if -tableau[-1, -1] > _FEAS_TOL:
            return Solution("infeasible")
        # drive lingering artificials out of the basis
        for i in range(m):
            if basis[i] in art_cols and tableau[i, -1] <= _FEAS_TOL:
                for j in range(n + n_slack):
                    if abs(tableau[i, j]) > _PIVOT_TOL:
                        _pivot(tableau, i, j)
                        basis[i] = j
                        break
        tableau[:, art_cols] = 0.0

    # phase 2
    tableau[-1, :] = 0.0
    tableau[-1, :n] = c
    for i in range(m):
        if basis[i] < n:
            tableau[-1] -= c[basis[i]] * tableau[i]
    status = _run_simplex(tableau, basis)
    if status == "unbounded":
        return Solution("unbounded")

    x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tableau[i, -1]
    x = x + lowers
    if not program.check_feasible(x, tol=1e-6):
        return Solution("infeasible")
    return Solution("optimal", x, obj.value(x))


def branch_bound(program: CrispProgram, objective_index: int = 0,
                 node_limit: int = 200_000, first_feasible: bool = False) -> Solution:
    """Global optimum of a program with binary variables.

    Best-bound node selection (depth breaks ties toward diving), branching
    on the most fractional binary; binaries are fixed through bound
    overrides so the tableau never grows.  A rounding heuristic seeds the
    incumbent.  With ``first_feasible`` the search stops at the first
    integral solution (feasibility checks).  Raises
    :class:`ResourceLimitError` past ``node_limit`` explored nodes.
    """
    obj = program.objectives[objective_index]
    sense = 1.0 if obj.sense == "min" else -1.0
    n = len(program.variables)
    binaries = program.binary_indices
    if not binaries:
        return simplex_lp(program, objective_index)
    bset = set(binaries)

    def relax(lo, hi):
        return simplex_lp(program, objective_index, lo, hi)

    lo0 = np.full(n, -math.inf)
    hi0 = np.full(n, math.inf)
    root = relax(lo0, hi0)
    if not root.optimal:
        return root

    best: Solution = Solution("infeasible")
    best_val = math.inf

    def try_incumbent(x):
        nonlocal best, best_val
        rounded = np.array(x, dtype=float)
        for i in binaries:
            rounded[i] = round(rounded[i])
        if program.check_feasible(rounded, tol=1e-6):
            val = obj.value(rounded)
            if sense * val < best_val - 1e-12:
                best_val = sense * val
                best = Solution("optimal", rounded, val)
            return True
        return False

    # rounding heuristic: activate every binary the relaxation uses
    lo_h, hi_h = lo0.copy(), hi0.copy()
    for i in binaries:
        v = 1.0 if root.x[i] > 1e-9 else 0.0
        lo_h[i] = hi_h[i] = v
    heur = relax(lo_h, hi_h)
    if heur.optimal:
        try_incumbent(heur.x)
        if first_feasible and best.optimal:
            return best

    counter = 0
    heap = [(sense * root.objective, 0, 0, lo0, hi0)]
    explored = 0
    while heap:
        bound_key, neg_depth, _, lo, hi = heapq.heappop(heap)
        if bound_key >= best_val - 1e-9:
            continue
        explored += 1
        if explored > node_limit:
            raise ResourceLimitError(f"branch-and-bound exceeded {node_limit} nodes")
        sol = relax(lo, hi)
        if not sol.optimal:
            continue
        key = sense * sol.objective
        if key >= best_val - 1e-9:
            continue
        frac = [(abs(sol.x[i] - round(sol.x[i])), i) for i in binaries]
        frac = [(f, i) for f, i in frac if f > 1e-6]
        if not frac:
            try_incumbent(sol.x)
            if first_feasible and best.optimal:
                return best
            continue
        _, branch_var = max(frac)
        for val in (1.0, 0.0):
            clo, chi = lo.copy(), hi.copy()
            clo[branch_var] = chi[branch_var] = val
            counter += 1
            heapq.heappush(heap, (key, neg_depth - 1, counter, clo, chi))
    return best
