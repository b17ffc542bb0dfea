"""Builders that turn each uncertain network formulation into crisp
programs, plus the multi-step compromise pipelines.

Pipelines covered:

* IT2 chance-constrained STP / SPP / MST (per-membership reductions, then
  fuzzy-programming or equal-weight compromise),
* random-fuzzy max flow (expected-value and chance-constrained capacity
  bounds),
* multi-criteria rough chance-constrained shortest path with goal
  attainment,
* uncertain multi-item fixed-charge solid transportation with budget
  (expected value / chance-constrained / dependent chance-constrained),
* bi-objective rough-fuzzy quadratic spanning tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .crisp.graphs import dijkstra, enumerate_paths, enumerate_trees, kruskal, max_flow
from .crisp.linprog import (Constraint, CrispProgram, Objective, Solution,
                            Variable, branch_bound, simplex_lp)
from .errors import (ConfigurationError, InfeasibleReductionError,
                     UnattainableLevelError)
from .hybrid import it2_reduce, rf_chance_bound, rf_expected_bound, rough_fuzzy_coeff
from .measures import (RoughVariable, rough_optimistic, rough_pessimistic,
                       unc_expected, unc_inv)
from .moo import GlobalCriterion, nondominated_filter, owa_dependent

__all__ = [
    "solve_spp_it2", "solve_mst_it2", "solve_stp_it2", "build_spp_binary_program",
    "build_mst_binary_program", "rf_capacities", "solve_rfmfp",
    "solve_mrccsspp", "mrccsspp_path_objectives", "UmmfstpwbModel",
    "brfqmst_coefficients", "brfqmst_tree_objectives", "solve_brfqmst_exact",
    "MODEL_KINDS",
]

MODEL_KINDS = ("stp-it2-ccm", "spp-it2-ccm", "mst-it2-ccm", "rfmfp-evm",
               "rfmfp-ccm", "mrccsspp", "ummfstpwb-evm", "ummfstpwb-ccm",
               "ummfstpwb-dccm", "brfqmst")


# ---------------------------------------------------------------------------
# chapter 2: IT2 chance-constrained SPP / MST / STP
# ---------------------------------------------------------------------------

def _it2_cost_weights(net, level_u, level_l, key="cost"):
    fu, fl = [], []
    for value in net.payloads(key):
        u, l = it2_reduce(value, level_u, level_l, "leq")
        fu.append(u)
        fl.append(l)
    comp = [0.5 * (a + b) for a, b in zip(fu, fl)]
    return fu, fl, comp


@dataclass
class It2PathResult:
    weights_u: list
    weights_l: list
    weights_comp: list
    cost_u: float
    cost_l: float
    cost_comp: float
    path_u: list
    path_l: list
    path_comp: list

    @property
    def interval(self):
        lo, hi = sorted((self.cost_u, self.cost_l))
        return lo, hi


def solve_spp_it2(net, level_u, level_l) -> It2PathResult:
    """Per-membership and compromise shortest paths for IT2 edge costs."""
    fu, fl, comp = _it2_cost_weights(net, level_u, level_l)
    pu, cu = dijkstra(net, fu, net.source, net.sink)
    pl, cl = dijkstra(net, fl, net.source, net.sink)
    pc, cc = dijkstra(net, comp, net.source, net.sink)
    return It2PathResult(fu, fl, comp, cu, cl, cc, pu, pl, pc)


def solve_mst_it2(net, level_u, level_l) -> It2PathResult:
    """Per-membership and compromise spanning trees for IT2 edge costs."""
    fu, fl, comp = _it2_cost_weights(net, level_u, level_l)
    tu, cu = kruskal(net, fu)
    tl, cl = kruskal(net, fl)
    tc, cc = kruskal(net, comp)
    return It2PathResult(fu, fl, comp, cu, cl, cc, tu, tl, tc)


def build_spp_binary_program(net, weights) -> CrispProgram:
    """Binary flow-conservation program equivalent to the reduced SPP."""
    m = len(net.edges)
    variables = [Variable(f"x_{u}_{v}", 0.0, 1.0, binary=True)
                 for u, v, _ in net.edges]
    constraints = []
    for vertex in range(1, net.vertex_count + 1):
        row = [0.0] * m
        for idx, (u, v, _) in enumerate(net.edges):
            if u == vertex:
                row[idx] += 1.0
            if v == vertex:
                row[idx] -= 1.0
        rhs = 1.0 if vertex == net.source else -1.0 if vertex == net.sink else 0.0
        constraints.append(Constraint(tuple(row), "=", rhs, name=f"flow_{vertex}"))
    return CrispProgram(variables, [Objective("min", tuple(weights))], constraints)


def build_mst_binary_program(net, weights) -> CrispProgram:
    """Binary cardinality + cycle-elimination program for the reduced MST.

    Subset constraints are enumerated explicitly; intended for desk-scale
    cross-validation against Kruskal only.
    """
    from itertools import combinations

    n, m = net.vertex_count, len(net.edges)
    variables = [Variable(f"x_{u}_{v}", 0.0, 1.0, binary=True)
                 for u, v, _ in net.edges]
    constraints = [Constraint((1.0,) * m, "=", float(n - 1), name="cardinality")]
    for size in range(3, n):
        for subset in combinations(range(1, n + 1), size):
            inside = set(subset)
            row = [1.0 if (u in inside and v in inside) else 0.0
                   for u, v, _ in net.edges]
            if sum(row) >= size:
                constraints.append(Constraint(tuple(row), "<=", float(size - 1)))
    return CrispProgram(variables, [Objective("min", tuple(weights))], constraints)


@dataclass
class StpIt2Result:
    f_avail: dict
    f_demand: dict
    f_convey: dict
    z_umf: float
    z_lmf: float
    lam: float
    z_comp: float
    plan: dict  # (i, j, k) 1-based -> quantity


def _stp_feasibility(fa, fb, fe, label):
    if sum(fa) < sum(fb) - 1e-9:
        raise InfeasibleReductionError(
            f"{label}: total availability {sum(fa):.4f} below total demand {sum(fb):.4f}")
    if sum(fe) < sum(fb) - 1e-9:
        raise InfeasibleReductionError(
            f"{label}: total conveyance {sum(fe):.4f} below total demand {sum(fb):.4f}")


def _stp_lp(inst, fa, fb, fe):
    m, n, K = inst.m, inst.n, inst.K
    idx = lambda i, j, k: (i * n + j) * K + k
    nvar = m * n * K
    cost = [0.0] * nvar
    for i in range(m):
        for j in range(n):
            for k in range(K):
                cost[idx(i, j, k)] = float(inst.cost_crisp[i][j][k])
    cons = []
    for i in range(m):
        row = [0.0] * nvar
        for j in range(n):
            for k in range(K):
                row[idx(i, j, k)] = 1.0
        cons.append(Constraint(tuple(row), "<=", fa[i], name=f"avail_{i + 1}"))
    for j in range(n):
        row = [0.0] * nvar
        for i in range(m):
            for k in range(K):
                row[idx(i, j, k)] = 1.0
        cons.append(Constraint(tuple(row), ">=", fb[j], name=f"demand_{j + 1}"))
    for k in range(K):
        row = [0.0] * nvar
        for i in range(m):
            for j in range(n):
                row[idx(i, j, k)] = 1.0
        cons.append(Constraint(tuple(row), "<=", fe[k], name=f"convey_{k + 1}"))
    variables = [Variable(f"x_{i + 1}{j + 1}{k + 1}")
                 for i in range(m) for j in range(n) for k in range(K)]
    # variables order must match idx()
    variables = [None] * nvar
    for i in range(m):
        for j in range(n):
            for k in range(K):
                variables[idx(i, j, k)] = Variable(f"x_{i + 1}{j + 1}{k + 1}")
    return CrispProgram(variables, [Objective("min", tuple(cost))], cons), cost, idx


def solve_stp_it2(inst, level_u, level_l) -> StpIt2Result:
    """Full three-stage pipeline: UMF program, LMF program, compromise.

    The compromise stage maximizes the overall satisfaction level against
    the per-constraint envelopes; the reported plan is the cheapest plan
    among the maximal-satisfaction optima (second-stage cost minimization).
    """
    fa_u = [it2_reduce(v, level_u, level_l, "geq")[0] for v in inst.availability_it2]
    fa_l = [it2_reduce(v, level_u, level_l, "geq")[1] for v in inst.availability_it2]
    fb_u = [it2_reduce(v, level_u, level_l, "leq")[0] for v in inst.demand_it2]
    fb_l = [it2_reduce(v, level_u, level_l, "leq")[1] for v in inst.demand_it2]
    fe_u = [it2_reduce(v, level_u, level_l, "geq")[0] for v in inst.conveyance_it2]
    fe_l = [it2_reduce(v, level_u, level_l, "geq")[1] for v in inst.conveyance_it2]
    _stp_feasibility(fa_u, fb_u, fe_u, "UMF reduction")
    _stp_feasibility(fa_l, fb_l, fe_l, "LMF reduction")

    prog_u, cost, idx = _stp_lp(inst, fa_u, fb_u, fe_u)
    prog_l, _, _ = _stp_lp(inst, fa_l, fb_l, fe_l)
    sol_u = simplex_lp(prog_u)
    sol_l = simplex_lp(prog_l)
    if not (sol_u.optimal and sol_l.optimal):
        raise InfeasibleReductionError("membership-level program infeasible")
    z_u, z_l = sol_u.objective, sol_l.objective
    z_min, z_max = sorted((z_u, z_l))

    m, n, K = inst.m, inst.n, inst.K
    nvar = m * n * K
    variables = [None] * nvar
    for i in range(m):
        for j in range(n):
            for k in range(K):
                variables[idx(i, j, k)] = Variable(f"x_{i + 1}{j + 1}{k + 1}")
    variables.append(Variable("lam", 0.0, 1.0))
    cons = []

    def envelope_row(row, lo, hi, sense):
        # sense '<=': lhs <= hi - lam (hi - lo);  sense '>=': lhs >= lo + lam (hi - lo)
        if sense == "<=":
            cons.append(Constraint(tuple(row) + (hi - lo,), "<=", hi))
        else:
            cons.append(Constraint(tuple(row) + (-(hi - lo),), ">=", lo))

    envelope_row(cost, z_min, z_max, "<=")
    for i in range(m):
        row = [0.0] * nvar
        for j in range(n):
            for k in range(K):
                row[idx(i, j, k)] = 1.0
        envelope_row(row, min(fa_u[i], fa_l[i]), max(fa_u[i], fa_l[i]), "<=")
    for j in range(n):
        row = [0.0] * nvar
        for i in range(m):
            for k in range(K):
                row[idx(i, j, k)] = 1.0
        envelope_row(row, min(fb_u[j], fb_l[j]), max(fb_u[j], fb_l[j]), ">=")
    for k in range(K):
        row = [0.0] * nvar
        for i in range(m):
            for j in range(n):
                row[idx(i, j, k)] = 1.0
        envelope_row(row, min(fe_u[k], fe_l[k]), max(fe_u[k], fe_l[k]), "<=")

    lam_prog = CrispProgram(variables, [Objective("max", (0.0,) * nvar + (1.0,))], cons)
    lam_sol = simplex_lp(lam_prog)
    if not lam_sol.optimal:
        raise InfeasibleReductionError("compromise program infeasible")
    lam = lam_sol.objective
    # second stage: cheapest plan at the maximal satisfaction level
    pin = cons + [Constraint((0.0,) * nvar + (1.0,), ">=", lam - 1e-9)]
    stage2 = CrispProgram(variables, [Objective("min", tuple(cost) + (0.0,))], pin)
    sol2 = simplex_lp(stage2)
    if not sol2.optimal:
        sol2 = lam_sol
    z_comp = float(np.dot(cost, sol2.x[:nvar]))
    plan = {}
    for i in range(m):
        for j in range(n):
            for k in range(K):
                q = sol2.x[idx(i, j, k)]
                if q > 1e-7:
                    plan[(i + 1, j + 1, k + 1)] = float(q)
    return StpIt2Result(
        {"umf": fa_u, "lmf": fa_l}, {"umf": fb_u, "lmf": fb_l},
        {"umf": fe_u, "lmf": fe_l}, z_u, z_l, lam, z_comp, plan)


# ---------------------------------------------------------------------------
# chapter 3: random-fuzzy max flow
# ---------------------------------------------------------------------------

def rf_capacities(net, mode, pr_level=None, cr_level=None):
    """Reduced crisp capacities of a random-fuzzy network.

    Negative chance bounds are clamped to zero (a capacity cannot be
    negative).
    """
    caps = []
    for value in net.payloads("capacity"):
        if mode == "evm":
            caps.append(rf_expected_bound(value))
        elif mode == "ccm":
            if pr_level is None or cr_level is None:
                raise ConfigurationError("ccm reduction needs pr and cr levels")
            caps.append(max(0.0, rf_chance_bound(value, pr_level, cr_level)))
        else:
            raise ConfigurationError(f"unknown rfmfp mode {mode!r}")
    return caps


def solve_rfmfp(net, mode, pr_level=None, cr_level=None):
    caps = rf_capacities(net, mode, pr_level, cr_level)
    value, flows = max_flow(net, caps, net.source, net.sink)
    return value, flows, caps


# ---------------------------------------------------------------------------
# chapter 4: multi-criteria rough chance-constrained shortest path
# ---------------------------------------------------------------------------

CRITERIA = ("distance", "cost", "time")


def _aggregate_rough(net, edge_idxs, key) -> RoughVariable:
    a = b = c = d = 0.0
    for idx in edge_idxs:
        r = net.edges[idx][2][key]
        a, b, c, d = a + r.a, b + r.b, c + r.c, d + r.d
    return RoughVariable(a, b, c, d)


def mrccsspp_path_objectives(net, edge_idxs, tm, mode):
    """Per-criterion reduced value of one path: the trust reduction is
    applied to the aggregated rough objective of the path."""
    fn = rough_pessimistic if mode == "pessimistic" else rough_optimistic
    return tuple(fn(_aggregate_rough(net, edge_idxs, key), tm) for key in CRITERIA)


@dataclass
class MrccssppResult:
    tm: float
    single: dict      # (criterion, mode) -> (value, vertex path, edge idxs)
    goals: dict       # mode -> 3-tuple of goals
    owa_weights: dict  # mode -> 3-tuple paired with criteria by index
    delta: dict       # mode -> attainment factor
    compromise: dict  # mode -> (objective 3-tuple, vertex path, edge idxs)


def solve_mrccsspp(net, tm) -> MrccssppResult:
    """Chance-constrained multi-criteria shortest path at one trust level.

    Single-criterion models are solved exactly by path enumeration with the
    reduction folded through the aggregated rough objective.  The goal
    programs use argument-dependent OWA weights paired with the criteria by
    index, and minimize the largest weighted goal overshoot over paths.
    """
    paths = enumerate_paths(net, net.source, net.sink)
    single = {}
    values = {}
    for mode in ("pessimistic", "optimistic"):
        per_path = [mrccsspp_path_objectives(net, e, tm, mode) for _, e in paths]
        values[mode] = per_path
        for k, crit in enumerate(CRITERIA):
            best = min(range(len(paths)), key=lambda p: (per_path[p][k], paths[p][0]))
            single[(crit, mode)] = (per_path[best][k], paths[best][0], paths[best][1])
    goals, weights, delta, compromise = {}, {}, {}, {}
    for mode in ("pessimistic", "optimistic"):
        goal = tuple(single[(crit, mode)][0] for crit in CRITERIA)
        owa = owa_dependent(goal)
        w = owa.weights  # positional weights, paired with criteria by index
        goals[mode] = goal
        weights[mode] = w
        best_p, best_delta = None, math.inf
        for p, (_, edge_idxs) in enumerate(paths):
            z = values[mode][p]
            over = max((z[k] - goal[k]) / w[k] for k in range(3))
            if over < best_delta - 1e-12:
                best_p, best_delta = p, over
        delta[mode] = best_delta
        compromise[mode] = (values[mode][best_p], paths[best_p][0], paths[best_p][1])
    return MrccssppResult(tm, single, goals, weights, delta, compromise)


# ---------------------------------------------------------------------------
# chapter 5: uncertain multi-item fixed-charge STP with budget
# ---------------------------------------------------------------------------

CL1_LEVELS = {"alpha1": 0.4, "alpha2": 0.4, "beta": 0.45, "gamma": 0.35,
              "delta": 0.45, "rho": 0.4}
CL2_LEVELS = {"alpha1": 0.9, "alpha2": 0.9, "beta": 0.8, "gamma": 0.75,
              "delta": 0.85, "rho": 0.8}


class UmmfstpwbModel:
    """Crisp-equivalent builder and solver for the budgeted multi-item
    fixed-charge solid transportation models.

    ``dist`` selects the uncertain family ("zigzag" or "normal") from the
    instance.  The bi-objective program maximizes profit and minimizes
    time; fixed charges activate through big-M rows x <= M y with the
    tightest valid per-cell bound.
    """

    def __init__(self, inst, dist):
        fam = inst.family(dist)
        self.inst = inst
        self.dist = dist
        self.cost = fam["cost"]          # [p][i][j][k]
        self.fixed = fam["fixed"]
        self.time = fam["time"]
        self.avail = fam["availability"]  # [p][i]
        self.demand = fam["demand"]      # [p][j]
        self.convey = fam["conveyance"]  # [k]
        self.budget = fam["budget"]      # [j]
        self.r, self.m, self.n, self.K = inst.r, inst.m, inst.n, inst.K
        self.ncells = self.r * self.m * self.n * self.K

    # -- indexing ----------------------------------------------------------
    def xi(self, p, i, j, k):
        return ((p * self.m + i) * self.n + j) * self.K + k

    def yi(self, p, i, j, k):
        return self.ncells + self.xi(p, i, j, k)

    def cells(self):
        for p in range(self.r):
            for i in range(self.m):
                for j in range(self.n):
                    for k in range(self.K):
                        yield p, i, j, k

    # -- reductions --------------------------------------------------------
    def _tables(self, mode, levels):
        """Crisp coefficient tables for the requested uncertain model."""
        if mode == "evm":
            red = lambda u, *_: unc_expected(u)
            lv = {"alpha1": None, "alpha2": None, "beta": None, "gamma": None,
                  "delta": None, "rho": None}
        elif mode in ("ccm", "dccm"):
            red = lambda u, level: unc_inv(u, level)
            lv = levels
        else:
            raise ConfigurationError(f"unknown mode {mode!r}")

        def cell_table(table, level):
            return [[[[red(table[p][i][j][k], level) for k in range(self.K)]
                      for j in range(self.n)] for i in range(self.m)]
                    for p in range(self.r)]

        tabs = {}
        if mode == "evm":
            tabs["c_obj"] = cell_table(self.cost, None)
            tabs["f_obj"] = cell_table(self.fixed, None)
            tabs["t_obj"] = cell_table(self.time, None)
            tabs["c_budget"] = tabs["c_obj"]
            tabs["f_budget"] = tabs["f_obj"]
            tabs["avail"] = [[unc_expected(self.avail[p][i]) for i in range(self.m)]
                             for p in range(self.r)]
            tabs["demand"] = [[unc_expected(self.demand[p][j]) for j in range(self.n)]
                              for p in range(self.r)]
            tabs["convey"] = [unc_expected(self.convey[k]) for k in range(self.K)]
            tabs["budget"] = [unc_expected(self.budget[j]) for j in range(self.n)]
        else:
            a1, a2 = levels.get("alpha1"), levels.get("alpha2")
            beta, gamma = levels["beta"], levels["gamma"]
            delta, rho = levels["delta"], levels["rho"]
            if mode == "ccm":
                tabs["c_obj"] = cell_table(self.cost, a1)
                tabs["f_obj"] = cell_table(self.fixed, a1)
                tabs["t_obj"] = cell_table(self.time, a2)
            tabs["c_budget"] = cell_table(self.cost, rho)
            tabs["f_budget"] = cell_table(self.fixed, rho)
            tabs["avail"] = [[unc_inv(self.avail[p][i], 1.0 - beta)
                              for i in range(self.m)] for p in range(self.r)]
            tabs["demand"] = [[unc_inv(self.demand[p][j], gamma)
                               for j in range(self.n)] for p in range(self.r)]
            tabs["convey"] = [unc_inv(self.convey[k], 1.0 - delta)
                              for k in range(self.K)]
            tabs["budget"] = [unc_inv(self.budget[j], 1.0 - rho)
                              for j in range(self.n)]
        return tabs

    def build(self, mode, levels=None) -> CrispProgram:
        """Bi-objective crisp program (max profit, min time)."""
        tabs = self._tables(mode, levels)
        nv = 2 * self.ncells
        profit = [0.0] * nv
        time_obj = [0.0] * nv
        selling, purchase = self.inst.selling, self.inst.purchase
        for p, i, j, k in self.cells():
            profit[self.xi(p, i, j, k)] = (selling[p][j] - purchase[p][i]
                                           - (tabs["c_obj"][p][i][j][k] if mode != "dccm" else 0.0))
            if mode != "dccm":
                profit[self.yi(p, i, j, k)] = -tabs["f_obj"][p][i][j][k]
                time_obj[self.yi(p, i, j, k)] = tabs["t_obj"][p][i][j][k]
        cons = []
        for p in range(self.r):
            for i in range(self.m):
                row = [0.0] * nv
                for j in range(self.n):
                    for k in range(self.K):
                        row[self.xi(p, i, j, k)] = 1.0
                cons.append(Constraint(tuple(row), "<=", tabs["avail"][p][i],
                                       name=f"avail_p{p + 1}_i{i + 1}"))
        for p in range(self.r):
            for j in range(self.n):
                row = [0.0] * nv
                for i in range(self.m):
                    for k in range(self.K):
                        row[self.xi(p, i, j, k)] = 1.0
                cons.append(Constraint(tuple(row), ">=", tabs["demand"][p][j],
                                       name=f"demand_p{p + 1}_j{j + 1}"))
        for k in range(self.K):
            row = [0.0] * nv
            for p in range(self.r):
                for i in range(self.m):
                    for j in range(self.n):
                        row[self.xi(p, i, j, k)] = 1.0
            cons.append(Constraint(tuple(row), "<=", tabs["convey"][k],
                                   name=f"convey_k{k + 1}"))
        for j in range(self.n):
            row = [0.0] * nv
            for p in range(self.r):
                for i in range(self.m):
                    for k in range(self.K):
                        row[self.xi(p, i, j, k)] = (purchase[p][i]
                                                    + tabs["c_budget"][p][i][j][k])
                        row[self.yi(p, i, j, k)] = tabs["f_budget"][p][i][j][k]
            cons.append(Constraint(tuple(row), "<=", tabs["budget"][j],
                                   name=f"budget_j{j + 1}"))
        big_m = {}
        for p, i, j, k in self.cells():
            big_m[(p, i, j, k)] = min(max(tabs["avail"][p][i], 0.0),
                                      max(tabs["convey"][k], 0.0))
            row = [0.0] * nv
            row[self.xi(p, i, j, k)] = 1.0
            row[self.yi(p, i, j, k)] = -big_m[(p, i, j, k)]
            cons.append(Constraint(tuple(row), "<=", 0.0, name="link"))
        # implied activation covers: served demand needs enough active links;
        # redundant for the binary model but they lift the relaxation bound
        for p in range(self.r):
            for j in range(self.n):
                dem = tabs["demand"][p][j]
                if dem <= 0:
                    continue
                row = [0.0] * nv
                for i in range(self.m):
                    for k in range(self.K):
                        row[self.yi(p, i, j, k)] = big_m[(p, i, j, k)]
                cons.append(Constraint(tuple(row), ">=", dem,
                                       name=f"cover_p{p + 1}_j{j + 1}"))
                card = [0.0] * nv
                for i in range(self.m):
                    for k in range(self.K):
                        card[self.yi(p, i, j, k)] = 1.0
                need = math.ceil(dem / max(big_m[(p, i, j, k)]
                                           for i in range(self.m)
                                           for k in range(self.K)) - 1e-9)
                cons.append(Constraint(tuple(card), ">=", float(max(1, need)),
                                       name=f"card_p{p + 1}_j{j + 1}"))
        # complement covers: demand that cannot be met by the other sources
        # (conveyances) must flow through this one, forcing activations
        for p in range(self.r):
            total_dem = sum(max(tabs["demand"][p][j], 0.0) for j in range(self.n))
            for i in range(self.m):
                others = sum(max(tabs["avail"][p][ii], 0.0)
                             for ii in range(self.m) if ii != i)
                residual = total_dem - others
                if residual <= 0:
                    continue
                row = [0.0] * nv
                for j in range(self.n):
                    for k in range(self.K):
                        row[self.yi(p, i, j, k)] = big_m[(p, i, j, k)]
                cons.append(Constraint(tuple(row), ">=", residual,
                                       name=f"srccover_p{p + 1}_i{i + 1}"))
        grand_dem = sum(max(tabs["demand"][p][j], 0.0)
                        for p in range(self.r) for j in range(self.n))
        for k in range(self.K):
            others = sum(max(tabs["convey"][kk], 0.0)
                         for kk in range(self.K) if kk != k)
            residual = grand_dem - others
            if residual <= 0:
                continue
            row = [0.0] * nv
            for p in range(self.r):
                for i in range(self.m):
                    for j in range(self.n):
                        row[self.yi(p, i, j, k)] = big_m[(p, i, j, k)]
            cons.append(Constraint(tuple(row), ">=", residual,
                                   name=f"convcover_k{k + 1}"))
        variables = [None] * nv
        for p, i, j, k in self.cells():
            variables[self.xi(p, i, j, k)] = Variable(f"x{p + 1}{i + 1}{j + 1}{k + 1}")
            variables[self.yi(p, i, j, k)] = Variable(f"y{p + 1}{i + 1}{j + 1}{k + 1}",
                                                      0.0, 1.0, binary=True)
        objectives = [Objective("max", tuple(profit)), Objective("min", tuple(time_obj))]
        return CrispProgram(variables, objectives, cons)

    # -- exact bi-objective machinery ---------------------------------------
    @staticmethod
    def _lexi(prog, primary_idx, secondary_idx):
        """Optimize objective primary, then secondary at the primary optimum."""
        first = branch_bound(prog, primary_idx)
        if not first.optimal:
            return None, None
        obj = prog.objectives[primary_idx]
        slack = 1e-7 * max(1.0, abs(first.objective))
        if obj.sense == "max":
            rel, bound = ">=", first.objective - slack
        else:
            rel, bound = "<=", first.objective + slack
        pinned = prog.with_constraints(
            [Constraint(tuple(obj.coeffs), rel, bound - obj.constant)])
        second = branch_bound(pinned, secondary_idx)
        if not second.optimal:
            return first, first
        return first, second

    def corners(self, prog, max_corners=200, stop=None):
        """Nondominated staircase points (Z1 max-profit, Z2 min-time).

        Z2 takes finitely many values (activation pattern sums): the sweep
        constrains Z2 below each achieved level and re-maximizes Z1.  The
        reported Z2 of each point is the achieved time of the max-profit
        solution, so a point may sit marginally above the true tread; the
        dominance filter keeps the sweep's maximal set.  ``stop`` may end
        the sweep early based on the latest (z1, z2) point.
        """
        out = []
        prog_now = prog
        t_obj = prog.objectives[1]
        for _ in range(max_corners):
            sol = branch_bound(prog_now, 0)
            if not sol.optimal:
                break
            x = sol.x
            z1 = prog.objectives[0].value(x)
            z2 = t_obj.value(x)
            out.append((float(z1), float(z2), x))
            if stop is not None and stop(float(z1), float(z2)):
                break
            # the cut must exceed the solver feasibility tolerance; treads
            # closer than 1e-3 in time are merged
            prog_now = prog.with_constraints(
                [Constraint(tuple(t_obj.coeffs), "<=", z2 - 1e-3 - t_obj.constant)])
        out.sort(key=lambda c: (-c[0], c[1]))
        keep = nondominated_filter([(-z1, z2) for z1, z2, _ in out])
        return [out[i] for i in keep]

    # -- scalarization drivers ----------------------------------------------
    def solve_weighted(self, prog, lam1, lam2):
        """Plain weighted compromise Min(-lam1 Z1 + lam2 Z2)."""
        nv = len(prog.variables)
        combined = (-lam1) * np.asarray(prog.objectives[0].coeffs) \
            + lam2 * np.asarray(prog.objectives[1].coeffs)
        single = prog.with_objective(Objective("min", tuple(combined)))
        # break objective-value ties toward max profit, then min time
        sol = branch_bound(single)
        if not sol.optimal:
            return None
        bound = sol.objective + 1e-7 * max(1.0, abs(sol.objective))
        pinned = prog.with_constraints([Constraint(tuple(combined), "<=", bound)])
        first, second = self._lexi(pinned, 0, 1)
        use = second if second is not None else sol
        return (prog.objectives[0].value(use.x), prog.objectives[1].value(use.x), use.x)

    def ideals(self, prog):
        """(Z1 ideal, Z2 ideal) with the companion value of each optimum.

        Companion values are resolved lexicographically (the other
        objective is optimized at the pinned optimum).
        """
        p_first, p_second = self._lexi(prog, 0, 1)
        t_first, t_second = self._lexi(prog, 1, 0)
        if p_first is None or t_first is None:
            raise InfeasibleReductionError("model infeasible at the given levels")
        z1_ideal = prog.objectives[0].value(p_second.x)
        z2_at_z1 = prog.objectives[1].value(p_second.x)
        z2_ideal = prog.objectives[1].value(t_second.x)
        z1_at_z2 = prog.objectives[0].value(t_second.x)
        return (z1_ideal, z2_at_z1), (z2_ideal, z1_at_z2)

    def solve_global(self, prog, corners=None):
        """Global-criterion compromise: best composite over the staircase.

        The sweep can stop once the profit shortfall alone exceeds the best
        composite found so far (the shortfall only grows as the sweep
        tightens the time cap).
        """
        (z1_ideal, _), (z2_ideal, _) = self.ideals(prog)
        crit = GlobalCriterion(("max", "min"), (z1_ideal, z2_ideal))
        if corners is None:
            best = [math.inf]

            def stop(z1, z2):
                best[0] = min(best[0], crit.evaluate((z1, z2)))
                return abs((z1_ideal - z1) / z1_ideal) > best[0] + 1e-12

            corners = self.corners(prog, stop=stop)
        zvec, x, _ = crit.solve_over(((z1, z2), x) for z1, z2, x in corners)
        return zvec[0], zvec[1], x

    def solve_fuzzy(self, prog):
        from .moo import scalarize_fuzzy_programming
        (z1_ub, z2_at_z1), (z2_lb, z1_at_z2) = self.ideals(prog)
        bounds = [(z1_ub, z1_at_z2), (z2_lb, z2_at_z1)]
        lam_prog = scalarize_fuzzy_programming(prog, bounds)
        sol = branch_bound(lam_prog)
        if not sol.optimal:
            return None
        # pin lambda, then resolve ties lexicographically on the objectives
        nv = len(prog.variables)
        lam_row = (0.0,) * nv + (1.0,)
        pinned = lam_prog.with_constraints(
            [Constraint(lam_row, ">=", sol.objective - 1e-6)])
        ext = CrispProgram(lam_prog.variables,
                           [Objective("max", tuple(prog.objectives[0].coeffs) + (0.0,)),
                            Objective("min", tuple(prog.objectives[1].coeffs) + (0.0,))],
                           pinned.constraints)
        first, second = self._lexi(ext, 0, 1)
        use = second if second is not None and second.optimal else sol
        x = use.x[:nv]
        return (prog.objectives[0].value(x), prog.objectives[1].value(x), x,
                float(sol.objective))

    # -- dependent chance-constrained model ---------------------------------
    def dccm_aggregates(self, x):
        """(profit components, time components) of the uncertain objectives.

        For the zigzag family each aggregate is the (g, h, l) triple of the
        induced zigzag variable; for the normal family the (mu, sigma)
        pair.
        """
        nv = 2 * self.ncells
        sell, buy = self.inst.selling, self.inst.purchase
        if self.dist == "zigzag":
            g1 = h1 = l1 = 0.0
            g2 = h2 = l2 = 0.0
            for p, i, j, k in self.cells():
                xq = x[self.xi(p, i, j, k)]
                yq = x[self.yi(p, i, j, k)]
                c, f, t = (self.cost[p][i][j][k], self.fixed[p][i][j][k],
                           self.time[p][i][j][k])
                base = (sell[p][j] - buy[p][i])
                # profit falls with cost/fixed draws: high draw -> g side
                g1 += (base - c.c) * xq - f.c * yq
                h1 += (base - c.b) * xq - f.b * yq
                l1 += (base - c.a) * xq - f.a * yq
                g2 += t.a * yq
                h2 += t.b * yq
                l2 += t.c * yq
            return (g1, h1, l1), (g2, h2, l2)
        mu1 = sig1 = mu2 = sig2 = 0.0
        for p, i, j, k in self.cells():
            xq = x[self.xi(p, i, j, k)]
            yq = x[self.yi(p, i, j, k)]
            c, f, t = (self.cost[p][i][j][k], self.fixed[p][i][j][k],
                       self.time[p][i][j][k])
            mu1 += (sell[p][j] - buy[p][i] - c.rho) * xq - f.rho * yq
            sig1 += c.sigma * xq + f.sigma * yq
            mu2 += t.rho * yq
            sig2 += t.sigma * yq
        return (mu1, sig1), (mu2, sig2)

    def dccm_satisfaction(self, x, thresholds):
        """(v1, v2): chance the profit beats its floor / time meets its cap."""
        z1p, z2p = thresholds
        agg1, agg2 = self.dccm_aggregates(x)
        if self.dist == "zigzag":
            v1 = 1.0 - _zigzag_cdf(agg1, z1p)
            v2 = _zigzag_cdf(agg2, z2p)
        else:
            v1 = 1.0 - _normal_cdf_pair(agg1, z1p)
            v2 = _normal_cdf_pair(agg2, z2p)
        return v1, v2

    def _dccm_rows(self, t1, t2, thresholds):
        """Linear feasibility rows encoding v1 >= t1 and v2 >= t2."""
        nv = 2 * self.ncells
        z1p, z2p = thresholds
        sell, buy = self.inst.selling, self.inst.purchase
        rows = []

        def combo(weights_x, weights_y, rel, rhs, name):
            row = [0.0] * nv
            for p, i, j, k in self.cells():
                row[self.xi(p, i, j, k)] = weights_x[(p, i, j, k)]
                row[self.yi(p, i, j, k)] = weights_y[(p, i, j, k)]
            rows.append(Constraint(tuple(row), rel, rhs, name=name))

        if self.dist == "zigzag":
            # v1 >= t1  <=>  Z1' <= Phi^{-1}(1-t1) of the profit aggregate
            if t1 > 0.0:
                w = 1.0 - t1
                wx, wy = {}, {}
                for p, i, j, k in self.cells():
                    c, f = self.cost[p][i][j][k], self.fixed[p][i][j][k]
                    base = sell[p][j] - buy[p][i]
                    if w < 0.5:
                        # g + 2w (h - g) per component
                        cc = c.c + 2.0 * w * (c.b - c.c)
                        ff = f.c + 2.0 * w * (f.b - f.c)
                    else:
                        cc = 2.0 * c.b - c.a + 2.0 * w * (c.a - c.b)
                        ff = 2.0 * f.b - f.a + 2.0 * w * (f.a - f.b)
                    wx[(p, i, j, k)] = base - cc
                    wy[(p, i, j, k)] = -ff
                combo(wx, wy, ">=", z1p, "v1_floor")
            # v2 >= t2  <=>  Phi^{-1}(t2) of the time aggregate <= Z2'
            if t2 > 0.0:
                wx, wy = {}, {}
                for p, i, j, k in self.cells():
                    t = self.time[p][i][j][k]
                    if t2 < 0.5:
                        tt = t.a + 2.0 * t2 * (t.b - t.a)
                    else:
                        tt = 2.0 * t.b - t.c + 2.0 * t2 * (t.c - t.b)
                    wx[(p, i, j, k)] = 0.0
                    wy[(p, i, j, k)] = tt
                combo(wx, wy, "<=", z2p, "v2_cap")
        else:
            k1 = math.sqrt(3.0) / math.pi * math.log((1.0 - t1) / t1) if 0 < t1 < 1 else None
            k2 = math.sqrt(3.0) / math.pi * math.log(t2 / (1.0 - t2)) if 0 < t2 < 1 else None
            wx, wy = {}, {}
            for p, i, j, k in self.cells():
                c, f = self.cost[p][i][j][k], self.fixed[p][i][j][k]
                base = sell[p][j] - buy[p][i]
                kk = k1 if k1 is not None else 0.0
                wx[(p, i, j, k)] = base - c.rho + kk * c.sigma
                wy[(p, i, j, k)] = -f.rho + kk * f.sigma
            if t1 > 0.0:
                combo(wx, wy, ">=", z1p, "v1_floor")
            wx, wy = {}, {}
            for p, i, j, k in self.cells():
                t = self.time[p][i][j][k]
                kk = k2 if k2 is not None else 0.0
                wx[(p, i, j, k)] = 0.0
                wy[(p, i, j, k)] = t.rho + kk * t.sigma
            if t2 > 0.0:
                combo(wx, wy, "<=", z2p, "v2_cap")
        return rows

    def dccm_feasible(self, base_prog, t1, t2, thresholds):
        rows = self._dccm_rows(t1, t2, thresholds)
        prog = base_prog.with_constraints(rows)
        zero = prog.with_objective(Objective("min", (0.0,) * len(prog.variables)))
        sol = branch_bound(zero, first_feasible=True)
        return sol if sol.optimal else None

    def dccm_max_v1(self, base_prog, t2, thresholds, tol=1e-6):
        """Bisection on the profit-satisfaction level with v2 >= t2 pinned."""
        lo, hi = 0.0, 1.0
        best = self.dccm_feasible(base_prog, lo, t2, thresholds)
        if best is None:
            return None, None
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            sol = self.dccm_feasible(base_prog, mid, t2, thresholds)
            if sol is not None:
                lo, best = mid, sol
            else:
                hi = mid
        return lo, best

    def dccm_corners(self, thresholds, levels=None, max_corners=64):
        """Nondominated (v1, v2) corners of the dependent-chance model."""
        if thresholds is None:
            raise ConfigurationError("dccm mode needs profit/time thresholds")
        levels = levels or CL2_LEVELS
        base = self.build("dccm", levels)
        base = CrispProgram(base.variables,
                            [Objective("min", (0.0,) * len(base.variables))],
                            base.constraints)
        corners = []
        t2 = 0.0
        for _ in range(max_corners):
            t1, sol = self.dccm_max_v1(base, t2, thresholds)
            if sol is None:
                break
            v1, v2 = self.dccm_satisfaction(sol.x, thresholds)
            corners.append((v1, v2, sol.x))
            t2 = v2 + 1e-4
            if t2 >= 1.0:
                break
        keep = nondominated_filter([(-v1, -v2) for v1, v2, _ in corners])
        return [corners[i] for i in keep]

    def dccm_solve(self, thresholds, method, weights=(0.5, 0.5), levels=None):
        """Dependent-chance compromise over (v1, v2) by the named method."""
        corners = self.dccm_corners(thresholds, levels)
        if not corners:
            return None
        if method == "weighted":
            best = max(corners, key=lambda c: weights[0] * c[0] + weights[1] * c[1])
            return best[0], best[1], best[2]
        ub1 = max(c[0] for c in corners)
        ub2 = max(c[1] for c in corners)
        if method == "global":
            crit = GlobalCriterion(("max", "max"), (ub1, ub2))
            zvec, x, _ = crit.solve_over(((v1, v2), x) for v1, v2, x in corners)
            return zvec[0], zvec[1], x
        if method == "fuzzy":
            lb1 = min(c[0] for c in corners)
            lb2 = min(c[1] for c in corners)
            span1 = max(ub1 - lb1, 1e-12)
            span2 = max(ub2 - lb2, 1e-12)
            best = max(corners, key=lambda c: min((c[0] - lb1) / span1,
                                                  (c[1] - lb2) / span2))
            return best[0], best[1], best[2]
        raise ConfigurationError(f"unknown dccm method {method!r}")


def _zigzag_cdf(components, x):
    g, h, l = components
    if x <= g:
        return 0.0
    if x <= h:
        return (x - g) / (2.0 * (h - g)) if h > g else 0.5
    if x <= l:
        return (x + l - 2.0 * h) / (2.0 * (l - h)) if l > h else 1.0
    return 1.0


def _normal_cdf_pair(components, x):
    mu, sigma = components
    if sigma <= 0:
        return 0.0 if x < mu else 1.0
    return 1.0 / (1.0 + math.exp(math.pi * (mu - x) / (sigma * math.sqrt(3.0))))


# ---------------------------------------------------------------------------
# chapter 6: bi-objective rough-fuzzy quadratic spanning tree
# ---------------------------------------------------------------------------

def brfqmst_coefficients(net, alpha, beta):
    """Per-edge linear and per-pair quadratic crisp coefficients."""
    linear = [rough_fuzzy_coeff(payload["weight"], alpha, beta)
              for _, _, payload in net.edges]
    quadratic = {tuple(sorted(pair)): rough_fuzzy_coeff(w, alpha, beta)
                 for pair, w in net.quadratic.items()}
    return linear, quadratic


def brfqmst_tree_objectives(tree, linear, quadratic):
    """Objective pair of an edge-index tuple (0-based indices)."""
    chosen = set(i + 1 for i in tree)
    f1 = sum(linear[i] for i in tree)
    f2 = sum(w for pair, w in quadratic.items()
             if pair[0] in chosen and pair[1] in chosen)
    return f1, f2


def solve_brfqmst_exact(net, alpha, beta, limit=10**6):
    """Exact Pareto set by spanning-tree enumeration.

    Returns a list of (f1, f2, tree edge-index tuple) sorted by f1; every
    entry is nondominated and every nondominated value appears.
    """
    linear, quadratic = brfqmst_coefficients(net, alpha, beta)
    trees = enumerate_trees(net, limit)
    scored = [(*brfqmst_tree_objectives(t, linear, quadratic), t) for t in trees]
    keep = nondominated_filter([(f1, f2) for f1, f2, _ in scored])
    front = sorted((scored[i] for i in keep), key=lambda s: (s[0], s[1]))
    return front
