"""Exact combinatorial solvers: shortest path, spanning tree, max flow and
exhaustive enumeration oracles.

All functions accept a network object exposing ``vertex_count`` (int),
``edges`` (sequence whose items start with 1-based endpoints ``u, v``) and
``directed`` (bool); weights and capacities are passed separately as
sequences aligned with the edge list.
"""

from __future__ import annotations

import heapq
from collections import deque
from itertools import combinations
from math import comb, inf

from ..errors import NoPathError, ResourceLimitError

__all__ = [
    "dijkstra",
    "kruskal",
    "max_flow",
    "enumerate_paths",
    "enumerate_trees",
    "is_connected",
]


def _adjacency(net):
    """Outgoing (neighbour, edge index) lists; both directions if undirected."""
    adj = [[] for _ in range(net.vertex_count + 1)]
    for idx, edge in enumerate(net.edges):
        u, v = edge[0], edge[1]
        adj[u].append((v, idx))
        if not net.directed:
            adj[v].append((u, idx))
    return adj


def dijkstra(net, weights, s, t):
    """Minimum-cost s -> t path under nonnegative edge weights.

    Ties are broken toward the smaller vertex index both when settling
    labels and when recording predecessors.  Returns (vertex path, cost).
    """
    n = net.vertex_count
    adj = _adjacency(net)
    dist = [inf] * (n + 1)
    pred = [0] * (n + 1)
    done = [False] * (n + 1)
    dist[s] = 0.0
    heap = [(0.0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        if u == t:
            break
        for v, idx in adj[u]:
            w = weights[idx]
            if w < 0:
                raise ValueError("dijkstra requires nonnegative weights")
            nd = d + w
            if nd < dist[v] - 1e-15 or (abs(nd - dist[v]) <= 1e-15 and u < pred[v]):
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    if not done[t]:
        raise NoPathError(f"vertex {t} unreachable from {s}")
    path = [t]
    while path[-1] != s:
        path.append(pred[path[-1]])
    path.reverse()
    return path, dist[t]


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n + 1))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def kruskal(net, weights):
    """Minimum spanning tree of a connected undirected network.

    Ties are broken by lexicographic edge id.  Returns (edge index list,
    cost).
    """
    n = net.vertex_count
    order = sorted(range(len(net.edges)), key=lambda i: (weights[i], i))
    uf = _UnionFind(n)
    tree, cost = [], 0.0
    for idx in order:
        u, v = net.edges[idx][0], net.edges[idx][1]
        if uf.union(u, v):
            tree.append(idx)
            cost += weights[idx]
            if len(tree) == n - 1:
                return tree, cost
    raise NoPathError("network is disconnected; no spanning tree exists")


def max_flow(net, capacities, s, t):
    """Maximum s -> t flow by shortest augmenting paths (BFS).

    Returns (value, per-edge flow list).  The result is checked against the
    capacity of the cut induced by residual reachability from ``s``.
    """
    n = net.vertex_count
    m = len(net.edges)
    residual = [float(c) for c in capacities] + [0.0] * m  # arc i reversed at i+m
    head = [0] * (2 * m)
    adj = [[] for _ in range(n + 1)]
    for idx, edge in enumerate(net.edges):
        u, v = edge[0], edge[1]
        head[idx] = v
        head[idx + m] = u
        adj[u].append(idx)
        adj[v].append(idx + m)
    value = 0.0
    while True:
        parent_arc = [-1] * (n + 1)
        parent_arc[s] = -2
        queue = deque([s])
        while queue and parent_arc[t] == -1:
            u = queue.popleft()
            for arc in adj[u]:
                v = head[arc]
                if parent_arc[v] == -1 and residual[arc] > 1e-12:
                    parent_arc[v] = arc
                    queue.append(v)
        if parent_arc[t] == -1:
            break

        def tail(arc):
            return net.edges[arc][0] if arc < m else net.edges[arc - m][1]

        bottleneck = inf
        v = t
        while v != s:
            arc = parent_arc[v]
            bottleneck = min(bottleneck, residual[arc])
            v = tail(arc)
        v = t
        while v != s:
            arc = parent_arc[v]
            residual[arc] -= bottleneck
            residual[arc + m if arc < m else arc - m] += bottleneck
            v = tail(arc)
        value += bottleneck
    # min-cut check: capacity across the residual-reachable set equals value
    reach = [False] * (n + 1)
    reach[s] = True
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for arc in adj[u]:
            v = head[arc]
            if not reach[v] and residual[arc] > 1e-9:
                reach[v] = True
                queue.append(v)
    cut = sum(capacities[i] for i, e in enumerate(net.edges) if reach[e[0]] and not reach[e[1]])
    if abs(cut - value) > 1e-6 * max(1.0, abs(value)):
        raise AssertionError(f"max-flow/min-cut mismatch: flow {value} vs cut {cut}")
    flows = [capacities[i] - residual[i] for i in range(m)]
    return value, flows


def enumerate_paths(net, s, t, limit=10**6):
    """All simple s -> t paths as (vertex list, edge index list) pairs."""
    adj = _adjacency(net)
    out = []
    on_path = [False] * (net.vertex_count + 1)

    def walk(u, vertices, edges):
        if len(out) > limit:
            raise ResourceLimitError(f"more than {limit} paths")
        if u == t:
            out.append((vertices[:], edges[:]))
            return
        on_path[u] = True
        for v, idx in adj[u]:
            if not on_path[v]:
                vertices.append(v)
                edges.append(idx)
                walk(v, vertices, edges)
                vertices.pop()
                edges.pop()
        on_path[u] = False

    walk(s, [s], [])
    return out


def enumerate_trees(net, limit=10**6):
    """All spanning trees of an undirected network as edge-index tuples."""
    n = net.vertex_count
    m = len(net.edges)
    if n < 2:
        return [()]
    if comb(m, n - 1) > limit:
        raise ResourceLimitError(f"C({m},{n - 1}) spanning-tree candidates exceed {limit}")
    pairs = [(e[0], e[1]) for e in net.edges]
    trees = []
    for combo in combinations(range(m), n - 1):
        uf = _UnionFind(n)
        for idx in combo:
            if not uf.union(*pairs[idx]):
                break
        else:
            trees.append(combo)
    return trees


def is_connected(vertex_count, pairs):
    """Undirected-sense connectivity over 1-based vertex pairs."""
    if vertex_count == 0:
        return True
    adj = [[] for _ in range(vertex_count + 1)]
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * (vertex_count + 1)
    seen[1] = True
    queue = deque([1])
    count = 1
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(v)
    return count == vertex_count
