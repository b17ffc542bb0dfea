"""Metaheuristics: a varying-population GA with indeterminate crossover for
max-flow decoding, plus NSGA-II and MOCHC for binary bi-objective network
problems.

The varying-population GA evolves vertex-priority permutations.  Each
chromosome carries an age and a lifetime; the lifetime comes from an
improved allocation strategy keyed to population fitness statistics, and
the crossover probability is a linguistic uncertain variable selected by
an age-class rule base.  Crossover is weight-mapping (segment exchange
followed by rank remapping); mutation removes one gene and reinserts it
elsewhere.  All runs are reproducible from a seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .measures import LinearUncertain, ZigzagUncertain, unc_cdf
from .moo import dominates

__all__ = [
    "GAConfig", "PriorityChromosome", "single_path_growth", "overall_flow",
    "ilas_lifetime", "blas_lifetime", "age_class", "crossover_class",
    "crossover_decide", "wmx_crossover", "insertion_mutation", "vpga_run",
    "BinaryProblem", "PathProblem", "TreeProblem", "nsga2_run", "mochc_run",
    "fast_nondominated_sort", "crowding_distance",
]


# ---------------------------------------------------------------------------
# varying-population GA
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GAConfig:
    initial_pop: int = 50
    pop_size_threshold: int = 5000
    reproduction_ratio: float = 0.45
    min_lifetime: float = 1.0
    max_lifetime: float = 7.0
    mutation_prob: float = 0.015
    gamma: float = 0.25
    max_gen: int = 500
    max_same_count: int = 20
    seed: int = 1
    lifetime_strategy: str = "ilas"  # or "blas"

    def __post_init__(self):
        if not 0 < self.reproduction_ratio <= 1:
            raise ValueError("reproduction ratio must lie in (0, 1]")
        if self.min_lifetime > self.max_lifetime:
            raise ValueError("min lifetime exceeds max lifetime")


@dataclass
class PriorityChromosome:
    priorities: np.ndarray  # permutation of 1..n over vertices
    age: int = 0
    lifetime: float = 0.0
    fitness: float = -1.0

    def copy(self):
        return PriorityChromosome(self.priorities.copy(), self.age,
                                  self.lifetime, self.fitness)


# age classes as uncertain variables over normalized relative age
YOUNG = LinearUncertain(0.0, 0.275)
MIDDLE = ZigzagUncertain(0.225, 0.350, 0.675)
OLD = LinearUncertain(0.650, 1.0)
# crossover-probability classes
PC_LOW = LinearUncertain(0.0, 0.250)
PC_MED = ZigzagUncertain(0.150, 0.350, 0.750)
PC_HIGH = LinearUncertain(0.70, 1.0)

CROSSOVER_RULES = {
    ("young", "young"): "L", ("young", "middle"): "M", ("young", "old"): "L",
    ("middle", "middle"): "H", ("middle", "old"): "M", ("old", "old"): "L",
}


def single_path_growth(priorities, adjacency, visited_template, s, t):
    """Grow one source-to-sink path greedily by vertex priority.

    ``adjacency`` maps each vertex to its current successor list; dead
    ends backtrack and zero the dead vertex's priority in the working
    copy.  Returns the vertex path, or an empty list when no successor of
    the source remains.
    """
    prio = priorities  # working copy owned by the caller
    visited = visited_template[:]
    path = [s]
    visited[s] = True
    while True:
        u = path[-1]
        candidates = [v for v in adjacency[u] if not visited[v] and prio[v - 1] > 0]
        if u == s and not adjacency[s]:
            return []
        if not candidates:
            if u == t:
                return path
            path.pop()
            prio[u - 1] = 0
            if not path:
                return []
            continue
        best = max(candidates, key=lambda v: prio[v - 1])
        path.append(best)
        visited[best] = True
        if best == t:
            return path
    # unreachable


def overall_flow(chrom: PriorityChromosome, net, capacities):
    """Decode a chromosome to a feasible flow value (its fitness).

    Paths grow repeatedly on residual capacities; each path pushes its
    bottleneck, saturated arcs leave the adjacency, and paths ending off
    the sink remove their dead endpoint.  The decoded value never exceeds
    the true maximum flow.
    """
    n = net.vertex_count
    s, t = net.source, net.sink
    arc = {}
    adjacency = [[] for _ in range(n + 1)]
    for idx, (u, v, _) in enumerate(net.edges):
        if capacities[idx] > 1e-12:
            adjacency[u].append(v)
            arc[(u, v)] = capacities[idx]
    prio = [float(p) for p in chrom.priorities]
    visited_template = [False] * (n + 1)
    total = 0.0
    while adjacency[s]:
        path = single_path_growth(prio, adjacency, visited_template, s, t)
        if not path:
            break
        if path[-1] == t and len(path) > 1:
            bottleneck = min(arc[(path[i], path[i + 1])] for i in range(len(path) - 1))
            total += bottleneck
            for i in range(len(path) - 1):
                key = (path[i], path[i + 1])
                arc[key] -= bottleneck
                if arc[key] <= 1e-12:
                    adjacency[path[i]].remove(path[i + 1])
        else:
            dead = path[-1]
            for u in range(n + 1):
                if dead in adjacency[u]:
                    adjacency[u].remove(dead)
    return total


def ilas_lifetime(fitness, minfit, avgfit, maxfit, min_lt=1.0, max_lt=7.0):
    """Improved lifetime allocation: two-branch interpolation clamped to
    [min_lt, max_lt]; degenerate denominators yield ratio zero."""
    kappa = 0.5 * (max_lt - min_lt)
    if avgfit >= fitness:
        denom = avgfit - minfit
        ratio = (fitness - minfit) / denom if denom > 0 else 0.0
        lt = min_lt + kappa * ratio
    else:
        denom = 2.0 * (maxfit - avgfit)
        ratio = (fitness + maxfit - 2.0 * avgfit) / denom if denom > 0 else 0.0
        lt = 0.5 * (min_lt + max_lt) + kappa * ratio
    return min(max_lt, max(min_lt, lt))


def blas_lifetime(fitness, minfit, avgfit, maxfit, min_lt=1.0, max_lt=7.0):
    """Bilinear allocation strategy kept for comparison runs."""
    kappa = 0.5 * (max_lt - min_lt)
    if avgfit >= fitness:
        denom = avgfit - minfit
        ratio = (fitness - minfit) / denom if denom > 0 else 0.0
        lt = min_lt + 2.0 * kappa * ratio
    else:
        denom = maxfit - avgfit
        ratio = (fitness - avgfit) / denom if denom > 0 else 0.0
        lt = 0.5 * (min_lt + max_lt) + kappa * ratio
    return min(max_lt, max(min_lt, lt))


def _shape(value, dist):
    """Membership-style curve of an age class at a normalized age."""
    cdf = unc_cdf(dist, value)
    if isinstance(dist, ZigzagUncertain):
        return 2.0 * min(cdf, 1.0 - cdf)
    if dist.a == 0.0:  # low-anchored class falls with its distribution
        return 1.0 - cdf
    return cdf


def age_class(relative_age: float) -> str:
    """Classify a normalized relative age; ties resolve toward the older
    class (the classification rule itself is a documented choice)."""
    x = min(1.0, max(0.0, relative_age))
    scores = {"young": _shape(x, YOUNG), "middle": _shape(x, MIDDLE),
              "old": _shape(x, OLD)}
    order = ("old", "middle", "young")
    best = max(scores.values())
    for name in order:
        if scores[name] >= best - 1e-15:
            return name
    return "young"


def crossover_class(class_a: str, class_b: str) -> str:
    key = tuple(sorted((class_a, class_b), key=("young", "middle", "old").index))
    return CROSSOVER_RULES[key]


def crossover_decide(pc_class: str, r: float, gamma: float = 0.25) -> bool:
    """Fire crossover per the uncertain-measure test of the class.

    Low fires when the chance the draw stays below the class variable is
    at least gamma; Medium and High both use the mirrored test, exactly as
    the rule base states them.
    """
    if pc_class == "L":
        return 1.0 - unc_cdf(PC_LOW, r) >= gamma
    if pc_class == "H":
        return unc_cdf(PC_HIGH, r) >= gamma
    if pc_class == "M":
        return unc_cdf(PC_MED, r) >= gamma
    raise ValueError(f"unknown crossover class {pc_class!r}")


def wmx_crossover(parent_a, parent_b, rng):
    """Weight-mapping crossover on permutations.

    One cut point; tails are exchanged and then rank-remapped so each
    child remains a permutation: the incoming tail's values are replaced
    by the outgoing tail's values of equal rank.
    """
    n = len(parent_a)
    if n < 2:
        return parent_a.copy(), parent_b.copy()
    cut = int(rng.integers(1, n))

    def make_child(head_src, tail_src):
        head = head_src[:cut]
        tail_in = tail_src[cut:]
        tail_out = head_src[cut:]
        order_in = np.argsort(np.argsort(tail_in))
        sorted_out = np.sort(tail_out)
        remapped = sorted_out[order_in]
        return np.concatenate([head, remapped])

    return make_child(parent_a, parent_b), make_child(parent_b, parent_a)


def insertion_mutation(perm, rng):
    """Remove one gene and reinsert it at another random position."""
    n = len(perm)
    if n < 2:
        return perm.copy()
    src = int(rng.integers(0, n))
    dst = int(rng.integers(0, n - 1))
    out = list(perm)
    gene = out.pop(src)
    out.insert(dst, gene)
    return np.asarray(out)


@dataclass
class VpgaResult:
    best_fitness: float
    best: PriorityChromosome
    generations: int
    trace: list  # (generation, max fitness, mean fitness, population size)


def vpga_run(net, capacities, config: GAConfig) -> VpgaResult:
    """Varying-population GA over priority chromosomes for max flow."""
    rng = np.random.default_rng(config.seed)
    n = net.vertex_count
    lifetime_fn = ilas_lifetime if config.lifetime_strategy == "ilas" else blas_lifetime

    def fresh():
        return PriorityChromosome(rng.permutation(n) + 1)

    def evaluate(pop):
        newly = [c for c in pop if c.fitness < 0]
        for c in newly:
            c.age = 0
            c.fitness = overall_flow(c, net, capacities)
        fits = [c.fitness for c in pop]
        minf, maxf = min(fits), max(fits)
        avgf = sum(fits) / len(fits)
        for c in newly:
            c.lifetime = lifetime_fn(c.fitness, minf, avgf, maxf,
                                     config.min_lifetime, config.max_lifetime)
        return minf, avgf, maxf

    pop = [fresh() for _ in range(config.initial_pop)]
    _, avgfit, maxfit = evaluate(pop)
    trace = [(0, maxfit, avgfit, len(pop))]
    same_count = 0
    gen = 0
    best = max(pop, key=lambda c: c.fitness).copy()
    while same_count < config.max_same_count and gen < config.max_gen:
        mean_lt = sum(c.lifetime for c in pop) / len(pop)
        classes = [age_class(min(1.0, c.age / mean_lt) if mean_lt > 0 else 1.0)
                   for c in pop]
        children = []
        # the two elites always cross; their offspring persist
        elite_idx = sorted(range(len(pop)), key=lambda i: (-pop[i].fitness, i))[:2]
        if len(elite_idx) == 2:
            ca, cb = wmx_crossover(pop[elite_idx[0]].priorities,
                                   pop[elite_idx[1]].priorities, rng)
            children.extend([PriorityChromosome(ca), PriorityChromosome(cb)])
        target = int(config.reproduction_ratio * len(pop))
        if len(children) + len(pop) <= config.pop_size_threshold:
            guard = 0
            while len(children) < target and guard < 50 * (target + 1):
                guard += 1
                i, j = rng.integers(0, len(pop), size=2)
                if i == j:
                    continue
                pc_class = crossover_class(classes[i], classes[j])
                if not crossover_decide(pc_class, float(rng.random()), config.gamma):
                    continue
                ca, cb = wmx_crossover(pop[i].priorities, pop[j].priorities, rng)
                for genes in (ca, cb):
                    if float(rng.random()) < config.mutation_prob:
                        genes = insertion_mutation(genes, rng)
                    children.append(PriorityChromosome(np.asarray(genes)))
        for c in pop:
            c.age += 1
        survivors = [c for c in pop if c.age <= c.lifetime]
        pop = survivors + children
        if not pop:
            pop = [fresh()]
        if len(pop) > config.pop_size_threshold:
            elite_pair = sorted(range(len(pop)), key=lambda i: (-pop[i].fitness, i))[:2]
            keep = set(elite_pair)
            order = rng.permutation(len(pop))
            for idx in order:
                if len(keep) >= config.pop_size_threshold:
                    break
                keep.add(int(idx))
            pop = [pop[i] for i in sorted(keep)]
        prev_avg = avgfit
        _, avgfit, maxfit = evaluate(pop)
        gen += 1
        trace.append((gen, maxfit, avgfit, len(pop)))
        cand = max(pop, key=lambda c: c.fitness)
        if cand.fitness > best.fitness:
            best = cand.copy()
        if abs(avgfit - prev_avg) <= 1e-12:
            same_count += 1
        else:
            same_count = 0
    return VpgaResult(best.fitness, best, gen, trace)


# ---------------------------------------------------------------------------
# binary multi-objective problems and MOGAs
# ---------------------------------------------------------------------------

class BinaryProblem:
    """Interface: evaluate(bits) -> (objective tuple, violation >= 0)."""

    n_bits: int

    def evaluate(self, bits):
        raise NotImplementedError


class PathProblem(BinaryProblem):
    """Edge-selection problem whose feasible points are simple s-t paths.

    ``objective_fn(edge_idxs)`` maps a feasible edge set to its objective
    tuple.  The violation measure counts flow-conservation mismatches.
    """

    def __init__(self, net, objective_fn, arity):
        self.net = net
        self.objective_fn = objective_fn
        self.n_bits = len(net.edges)
        self.arity = arity

    def evaluate(self, bits):
        net = self.net
        chosen = [i for i, b in enumerate(bits) if b]
        excess = [0] * (net.vertex_count + 1)
        for i in chosen:
            u, v, _ = net.edges[i]
            excess[u] += 1
            excess[v] -= 1
        target = [0] * (net.vertex_count + 1)
        target[net.source] = 1
        target[net.sink] = -1
        violation = sum(abs(excess[v] - target[v])
                        for v in range(1, net.vertex_count + 1))
        objs = self.objective_fn(chosen)
        return objs, float(violation)


class TreeProblem(BinaryProblem):
    """Edge-selection problem whose feasible points are spanning trees."""

    def __init__(self, net, objective_fn, arity):
        self.net = net
        self.objective_fn = objective_fn
        self.n_bits = len(net.edges)
        self.arity = arity

    def evaluate(self, bits):
        net = self.net
        n = net.vertex_count
        chosen = [i for i, b in enumerate(bits) if b]
        parent = list(range(n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        components = n
        for i in chosen:
            u, v, _ = net.edges[i]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[rv] = ru
                components -= 1
        violation = abs(len(chosen) - (n - 1)) + (components - 1)
        objs = self.objective_fn(chosen)
        return objs, float(violation)


def fast_nondominated_sort(objs):
    n = len(objs)
    dominated_by = [[] for _ in range(n)]
    count = [0] * n
    fronts = [[]]
    for p in range(n):
        for q in range(n):
            if p == q:
                continue
            if dominates(objs[p], objs[q]):
                dominated_by[p].append(q)
            elif dominates(objs[q], objs[p]):
                count[p] += 1
        if count[p] == 0:
            fronts[0].append(p)
    i = 0
    while fronts[i]:
        nxt = []
        for p in fronts[i]:
            for q in dominated_by[p]:
                count[q] -= 1
                if count[q] == 0:
                    nxt.append(q)
        i += 1
        fronts.append(nxt)
    fronts.pop()
    return fronts


def crowding_distance(front, objs):
    if not front:
        return {}
    dist = {i: 0.0 for i in front}
    arity = len(objs[front[0]])
    for m in range(arity):
        ordered = sorted(front, key=lambda i: objs[i][m])
        dist[ordered[0]] = dist[ordered[-1]] = math.inf
        span = objs[ordered[-1]][m] - objs[ordered[0]][m]
        if span <= 0:
            continue
        for pos in range(1, len(ordered) - 1):
            dist[ordered[pos]] += (objs[ordered[pos + 1]][m]
                                   - objs[ordered[pos - 1]][m]) / span
    return dist


def _constrained_key(objs, violations):
    """Sort key implementing constraint domination."""
    return [(violations[i], objs[i]) for i in range(len(objs))]


def _constraint_dominates(oa, va, ob, vb):
    if va == 0 and vb > 0:
        return True
    if va > 0 and vb > 0:
        return va < vb
    if va > 0:
        return False
    return dominates(oa, ob)


def _rank_population(objs, violations):
    """Fronts under constraint domination."""
    n = len(objs)
    dominated_by = [[] for _ in range(n)]
    count = [0] * n
    fronts = [[]]
    for p in range(n):
        for q in range(n):
            if p == q:
                continue
            if _constraint_dominates(objs[p], violations[p], objs[q], violations[q]):
                dominated_by[p].append(q)
            elif _constraint_dominates(objs[q], violations[q], objs[p], violations[p]):
                count[p] += 1
        if count[p] == 0:
            fronts[0].append(p)
    i = 0
    while fronts[i]:
        nxt = []
        for p in fronts[i]:
            for q in dominated_by[p]:
                count[q] -= 1
                if count[q] == 0:
                    nxt.append(q)
        i += 1
        fronts.append(nxt)
    fronts.pop()
    return fronts


def _select_next(population, objs, violations, n_keep):
    fronts = _rank_population(objs, violations)
    chosen = []
    for front in fronts:
        if len(chosen) + len(front) <= n_keep:
            chosen.extend(front)
        else:
            dist = crowding_distance(front, objs)
            ordered = sorted(front, key=lambda i: -dist[i])
            chosen.extend(ordered[: n_keep - len(chosen)])
            break
    return chosen


def _final_front(population, objs, violations):
    feasible = [i for i in range(len(population)) if violations[i] == 0]
    pool = feasible if feasible else list(range(len(population)))
    fronts = fast_nondominated_sort([objs[i] for i in pool])
    return [(objs[pool[i]], population[pool[i]]) for i in fronts[0]]


def nsga2_run(problem: BinaryProblem, pop_size=100, generations=250,
              crossover_prob=0.9, mutation_prob=0.03, seed=1):
    """NSGA-II with binary tournament, single-point crossover, bit flip."""
    rng = np.random.default_rng(seed)
    nb = problem.n_bits

    def evaluate(pop):
        results = [problem.evaluate(bits) for bits in pop]
        return [r[0] for r in results], [r[1] for r in results]

    pop = [rng.integers(0, 2, nb) for _ in range(pop_size)]
    objs, viol = evaluate(pop)
    for _ in range(generations):
        children = []
        while len(children) < pop_size:
            picks = rng.integers(0, pop_size, size=4)
            a = min(picks[:2], key=lambda i: (viol[i],) + tuple(objs[i]))
            b = min(picks[2:], key=lambda i: (viol[i],) + tuple(objs[i]))
            ca, cb = pop[a].copy(), pop[b].copy()
            if rng.random() < crossover_prob and nb > 1:
                cut = int(rng.integers(1, nb))
                ca[cut:], cb[cut:] = pop[b][cut:].copy(), pop[a][cut:].copy()
            for child in (ca, cb):
                flips = rng.random(nb) < mutation_prob
                child[flips] ^= 1
                children.append(child)
        children = children[:pop_size]
        cobjs, cviol = evaluate(children)
        merged = pop + children
        mobjs = objs + cobjs
        mviol = viol + cviol
        keep = _select_next(merged, mobjs, mviol, pop_size)
        pop = [merged[i] for i in keep]
        objs = [mobjs[i] for i in keep]
        viol = [mviol[i] for i in keep]
    return _final_front(pop, objs, viol)


def _hux(a, b, rng):
    """Half-uniform crossover: exchange half of the differing bits."""
    diff = np.nonzero(a != b)[0]
    ca, cb = a.copy(), b.copy()
    if len(diff) >= 2:
        swap = rng.permutation(diff)[: len(diff) // 2]
        ca[swap], cb[swap] = b[swap], a[swap]
    return ca, cb


def mochc_run(problem: BinaryProblem, pop_size=100, generations=500,
              crossover_prob=0.9, incest_fraction=0.25, convergence_value=1,
              preserved_fraction=0.05, cataclysm_prob=0.35, seed=1):
    """MOCHC: elitist cross-generational selection, HUX recombination with
    incest prevention, and cataclysmic restarts preserving the top slice."""
    rng = np.random.default_rng(seed)
    nb = problem.n_bits

    def evaluate(pop):
        results = [problem.evaluate(bits) for bits in pop]
        return [r[0] for r in results], [r[1] for r in results]

    pop = [rng.integers(0, 2, nb) for _ in range(pop_size)]
    objs, viol = evaluate(pop)
    threshold = max(1, int(incest_fraction * nb))
    for _ in range(generations):
        children = []
        order = rng.permutation(pop_size)
        for i in range(0, pop_size - 1, 2):
            a, b = pop[order[i]], pop[order[i + 1]]
            if rng.random() > crossover_prob:
                continue
            if int(np.sum(a != b)) / 2 <= threshold:
                continue  # incest prevention
            ca, cb = _hux(a, b, rng)
            children.extend([ca, cb])
        if children:
            cobjs, cviol = evaluate(children)
            merged = pop + children
            mobjs = objs + cobjs
            mviol = viol + cviol
            keep = _select_next(merged, mobjs, mviol, pop_size)
            new_pop = [merged[i] for i in keep]
            changed = len(new_pop) != len(pop) or any(
                not np.array_equal(x, y) for x, y in zip(new_pop, pop))
            pop = new_pop
            objs = [mobjs[i] for i in keep]
            viol = [mviol[i] for i in keep]
        else:
            changed = False
        if not changed:
            threshold -= convergence_value
        if threshold <= 0:
            # cataclysmic restart around the preserved elite slice
            keep_n = max(1, int(round(preserved_fraction * pop_size)))
            fronts = _rank_population(objs, viol)
            ranked = []
            for front in fronts:
                dist = crowding_distance(front, objs)
                ranked.extend(sorted(front, key=lambda i: -dist[i]))
            elite = [pop[i] for i in ranked[:keep_n]]
            new_pop = [e.copy() for e in elite]
            while len(new_pop) < pop_size:
                src = elite[int(rng.integers(0, keep_n))].copy()
                flips = rng.random(nb) < cataclysm_prob
                src[flips] ^= 1
                new_pop.append(src)
            pop = new_pop
            objs, viol = evaluate(pop)
            threshold = max(1, int(incest_fraction * nb))
    return _final_front(pop, objs, viol)
