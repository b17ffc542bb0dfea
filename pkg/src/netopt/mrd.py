"""Label-setting shortest paths over rough edge triples: per-criterion and
OWA-compromise channels at pessimistic and optimistic trust reductions.

Every channel is an independent nonnegative shortest-path problem, so each
runs as a Dijkstra sweep over its own reduced edge weights; a priority
queue with index tie-break guarantees termination with optimal labels.
The per-edge-then-sum semantics here deliberately differs from the
reduce-the-aggregate semantics of the chance-constrained path models; both
are exposed and compared by the reporting layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .crisp.graphs import dijkstra
from .errors import UnattainableLevelError
from .moo import owa_dependent

__all__ = ["edge_values", "edge_compromise", "mrd_run", "MrdResult", "CHANNELS"]

CRITERIA = ("distance", "cost", "time")
CHANNELS = tuple((crit, mode) for mode in ("pessimistic", "optimistic")
                 for crit in CRITERIA + ("compromise",))


def _rough_arrays(net, key):
    a = np.array([p[key].a for _, _, p in net.edges])
    b = np.array([p[key].b for _, _, p in net.edges])
    c = np.array([p[key].c for _, _, p in net.edges])
    d = np.array([p[key].d for _, _, p in net.edges])
    return a, b, c, d


def _pessimistic(a, b, c, d, tm):
    lo_bound = (a - c) / (2.0 * (d - c))
    hi_bound = (b + d - 2.0 * c) / (2.0 * (d - c))
    lo = (1.0 - 2.0 * tm) * c + 2.0 * tm * d
    hi = 2.0 * (1.0 - tm) * c + (2.0 * tm - 1.0) * d
    denom = (b - a) + (d - c)
    mid = (c * (b - a) + a * (d - c) + 2.0 * tm * (b - a) * (d - c)) / denom
    return np.where(tm <= lo_bound, lo, np.where(tm >= hi_bound, hi, mid))


def _optimistic(a, b, c, d, tm):
    lo_bound = (d - b) / (2.0 * (d - c))
    hi_bound = (2.0 * d - a - c) / (2.0 * (d - c))
    lo = (1.0 - 2.0 * tm) * d + 2.0 * tm * c
    hi = 2.0 * (1.0 - tm) * d + (2.0 * tm - 1.0) * c
    denom = (b - a) + (d - c)
    mid = (d * (b - a) + b * (d - c) - 2.0 * tm * (b - a) * (d - c)) / denom
    return np.where(tm <= lo_bound, lo, np.where(tm >= hi_bound, hi, mid))


def edge_values(rough_triple, tm):
    """(pessimistic triple, optimistic triple) of one rough edge triple."""
    if not 0.0 < tm <= 1.0:
        raise UnattainableLevelError("trust level must lie in (0, 1]")
    pess, opti = [], []
    for r in rough_triple:
        a, b, c, d = (np.array([r.a]), np.array([r.b]), np.array([r.c]), np.array([r.d]))
        pess.append(float(_pessimistic(a, b, c, d, tm)[0]))
        opti.append(float(_optimistic(a, b, c, d, tm)[0]))
    return tuple(pess), tuple(opti)


def edge_compromise(triple):
    """OWA aggregate of one edge's three criterion values."""
    return owa_dependent(triple).aggregate


@dataclass
class MrdResult:
    tm: float
    weights: dict  # (criterion, mode) -> per-edge reduced weights
    paths: dict    # (criterion, mode) -> (vertex path, total weight)


def mrd_run(net, tm1, tm2):
    """Eight shortest-path channels per trust level.

    ``tm1`` must lie in (0, 0.5] and ``tm2`` in (0.5, 1].  Returns a dict
    mapping each trust level to an :class:`MrdResult` whose channels cover
    the three criteria plus the OWA compromise, each in pessimistic and
    optimistic mode.
    """
    if not 0.0 < tm1 <= 0.5:
        raise UnattainableLevelError("tm1 must lie in (0, 0.5]")
    if not 0.5 < tm2 <= 1.0:
        raise UnattainableLevelError("tm2 must lie in (0.5, 1]")
    out = {}
    arrays = {key: _rough_arrays(net, key) for key in CRITERIA}
    for tm in (tm1, tm2):
        weights = {}
        for key in CRITERIA:
            a, b, c, d = arrays[key]
            weights[(key, "pessimistic")] = _pessimistic(a, b, c, d, tm)
            weights[(key, "optimistic")] = _optimistic(a, b, c, d, tm)
        m = len(net.edges)
        for mode in ("pessimistic", "optimistic"):
            comp = np.empty(m)
            stacked = np.stack([weights[(key, mode)] for key in CRITERIA], axis=1)
            for e in range(m):
                comp[e] = edge_compromise(tuple(stacked[e]))
            weights[("compromise", mode)] = comp
        paths = {}
        for channel, w in weights.items():
            path, total = dijkstra(net, w, net.source, net.sink)
            paths[channel] = (path, total)
        out[tm] = MrdResult(tm, weights, paths)
    return out
