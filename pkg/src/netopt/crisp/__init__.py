"""Exact desk-scale solvers for the crisp programs produced by reductions."""

from .graphs import (
    dijkstra,
    enumerate_paths,
    enumerate_trees,
    is_connected,
    kruskal,
    max_flow,
)
from .linprog import (
    Constraint,
    CrispProgram,
    Objective,
    Solution,
    Variable,
    branch_bound,
    simplex_lp,
)

__all__ = [
    "dijkstra", "kruskal", "max_flow", "enumerate_paths", "enumerate_trees",
    "is_connected", "Variable", "Constraint", "Objective", "CrispProgram",
    "Solution", "simplex_lp", "branch_bound",
]
