"""Synthetic rating datasets and ring-lattice rewiring experiments.

The dataset generator hands person b (1-based, most active first) the first
ceil(n_movies * b**-epsilon) movies, then re-points each initial rating, with
probability rewire_threshold / rewire_outcomes, at a uniformly chosen movie
the person has not rated.  Person 1 starts with every movie and can never be
rewired away from one (there is no unseen target), so the bipartite graph
stays connected; the repair pass exists for configurations that break that
property by hand.

All randomness flows through one stdlib Random stream per call, consumed in
a documented order, so results are a pure function of (config, seed).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csgraph

from .dataset import BipartiteRatings, _bipartite_csgraph
from .errors import UndefinedMetricError
from .jumps import SocialGraph
from .metrics import clustering_coefficient, connected_components, measure_l_pp

UNIFORM = "uniform"
PREFERENTIAL = "preferential"
REWIRE_MODES = (UNIFORM, PREFERENTIAL)

# rejection sampling attempts before falling back to an explicit pool scan
_REJECTION_CAP = 64


# -- power-law bipartite generator --------------------------------------------


@dataclass(frozen=True)
class SynthConfig:
    """Parameters for the synthetic rating dataset generator.

    ``rewire_threshold`` out of ``rewire_outcomes`` equally likely integer
    draws trigger a rewire (defaults: 2 of 11).  ``seed`` may be an int or a
    string; it feeds a single stdlib Random stream.
    """

    n_people: int = 500
    n_movies: int = 75
    epsilon: float = 0.7
    rewire_threshold: int = 2
    rewire_outcomes: int = 11
    seed: int | str = 0
    repair_connectivity: bool = True

    def __post_init__(self):
        if self.n_people < 1 or self.n_movies < 1:
            raise ValueError("need at least one person and one movie")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if self.rewire_outcomes < 1 or not 0 <= self.rewire_threshold <= self.rewire_outcomes:
            raise ValueError("rewire threshold must lie within the outcome range")


@dataclass
class GenerationDiagnostics:
    """Counts of events worth knowing about but not worth failing on."""

    skipped_rewires: int = 0
    repair_edges: int = 0


def initial_degree(b: int, epsilon: float, n_movies: int) -> int:
    """Ratings person b starts with: ceil(n_movies * b**-epsilon), capped at n_movies."""
    return min(n_movies, math.ceil(n_movies * float(b) ** -epsilon))


def generate_with_diagnostics(cfg: SynthConfig):
    """Build the synthetic dataset; returns (graph, diagnostics).

    Draw order: edges iterate ascending (person, initial movie rank); each
    edge consumes one rewire-decision draw, and a triggered rewire consumes
    one more draw to pick a uniform unseen movie.
    """
    rng = random.Random(cfg.seed)
    diag = GenerationDiagnostics()
    rated = {}
    for b in range(1, cfg.n_people + 1):
        d = initial_degree(b, cfg.epsilon, cfg.n_movies)
        rated[b] = set(range(1, d + 1))
    for b in range(1, cfg.n_people + 1):
        d = initial_degree(b, cfg.epsilon, cfg.n_movies)
        for movie in range(1, d + 1):
            if rng.randrange(cfg.rewire_outcomes) >= cfg.rewire_threshold:
                continue
            pool = [m for m in range(1, cfg.n_movies + 1) if m not in rated[b]]
            if not pool:
                diag.skipped_rewires += 1
                continue
            target = pool[rng.randrange(len(pool))]
            rated[b].discard(movie)
            rated[b].add(target)

    if cfg.repair_connectivity:
        diag.repair_edges = _repair_connectivity(rated, cfg.n_people, cfg.n_movies)

    pairs = [(b, m) for b in range(1, cfg.n_people + 1) for m in sorted(rated[b])]
    graph = BipartiteRatings(
        pairs,
        people=range(1, cfg.n_people + 1),
        movies=range(1, cfg.n_movies + 1),
    )
    return graph, diag


def generate_power_law_bipartite(cfg: SynthConfig) -> BipartiteRatings:
    """Build the synthetic dataset (see :func:`generate_with_diagnostics`)."""
    return generate_with_diagnostics(cfg)[0]


def _repair_connectivity(rated, n_people, n_movies) -> int:
    """Attach every non-giant component to movie 1; returns edges added.

    The highest-degree person of each stray component (ties to the smaller
    id) gains an edge to movie 1; people already rating movie 1 are passed
    over in favor of the next candidate.
    """
    graph = BipartiteRatings(
        ((b, m) for b in rated for m in rated[b]),
        people=range(1, n_people + 1),
        movies=range(1, n_movies + 1),
    )
    n_comp, labels = csgraph.connected_components(_bipartite_csgraph(graph), directed=False)
    if n_comp <= 1:
        return 0
    sizes = np.bincount(labels, minlength=n_comp)
    people_per = np.bincount(labels[:graph.n_people], minlength=n_comp)
    # giant pick: most vertices, then most people, then smallest first index
    giant = min(range(n_comp), key=lambda c: (-int(sizes[c]), -int(people_per[c]), c))
    added = 0
    for comp in range(n_comp):
        if comp == giant:
            continue
        members = [int(graph.people[i]) for i in range(graph.n_people) if labels[i] == comp]
        members.sort(key=lambda b: (-len(rated[b]), b))
        for b in members:
            if 1 not in rated[b]:
                rated[b].add(1)
                added += 1
                break
    return added


def calibrate_epsilon(kappa: int, n_people: int = 500, n_movies: int = 75) -> float:
    """Find epsilon so the least active person starts with exactly kappa ratings.

    The map epsilon -> ceil(n_movies * n_people**-epsilon) is a
    non-increasing step function of epsilon; bisection brackets the feasible
    interval and the midpoint comes back.  kappa = 1 is the exception: its
    interval is unbounded above, so the smallest feasible epsilon comes back
    instead.
    """
    if not 1 <= kappa <= n_movies:
        raise ValueError(f"kappa must lie in [1, {n_movies}], got {kappa}")
    if n_people < 2:
        raise ValueError("calibration needs at least 2 people")

    def min_count(eps):
        return initial_degree(n_people, eps, n_movies)

    def boundary(target):
        """Smallest epsilon with min_count(eps) <= target, by bisection."""
        lo, hi = 0.0, 64.0
        if min_count(lo) <= target:
            return lo
        for _ in range(200):
            mid = (lo + hi) / 2
            if min_count(mid) <= target:
                hi = mid
            else:
                lo = mid
        return hi

    lower = boundary(kappa)
    if kappa == 1:
        result = lower
    else:
        result = (lower + boundary(kappa - 1)) / 2
    if min_count(result) != kappa:
        raise ArithmeticError(f"calibration failed for kappa={kappa}")  # pragma: no cover
    return result


# -- ring lattices and rewiring ---------------------------------------------------


@dataclass(frozen=True)
class WreathConfig:
    """Ring lattice on n vertices, each adjacent to its k nearest neighbors."""

    n: int
    k: int
    seed: int | str = 0
    mode: str = UNIFORM

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("need at least 3 vertices")
        if self.k % 2 != 0 or not 2 <= self.k < self.n:
            raise ValueError("k must be even with 2 <= k < n")
        if self.mode not in REWIRE_MODES:
            raise ValueError(f"mode must be one of {REWIRE_MODES}")


def generate_wreath(n: int, k: int) -> SocialGraph:
    """Ring lattice: vertex i adjacent to i +- 1 .. k/2, modulo n."""
    WreathConfig(n=n, k=k)  # reuse the validation
    edges = [(i, (i + j) % n) for i in range(n) for j in range(1, k // 2 + 1)]
    return SocialGraph(range(n), edges)


def rewire_with_diagnostics(g: SocialGraph, p: float, mode: str = UNIFORM, seed=0):
    """Rewire one endpoint of each selected edge; returns (graph, skipped).

    Edges are visited in ascending (u, v) order and independently selected
    with probability p (one uniform draw each).  A selected edge keeps its
    smaller-id endpoint u and re-attaches the other end: uniformly over
    non-self, non-adjacent targets, or with probability proportional to
    current degree in preferential mode.  Edges with no valid target are
    left in place and counted.
    """
    if not 0 <= p <= 1:
        raise ValueError("rewire probability must lie in [0, 1]")
    if mode not in REWIRE_MODES:
        raise ValueError(f"mode must be one of {REWIRE_MODES}")
    rng = random.Random(f"rewire:{seed}")
    ids = [int(v) for v in g.vertices]
    pos = {v: i for i, v in enumerate(ids)}
    adj = {v: set(map(int, g.neighbors(v))) for v in ids}
    degrees = np.array([len(adj[v]) for v in ids], dtype=np.int64)
    skipped = 0
    for u, v in g.edge_ids():
        if rng.random() >= p:
            continue
        target = None
        if mode == UNIFORM:
            target = _uniform_target(rng, ids, u, adj[u])
        else:
            target = _preferential_target(rng, ids, pos, degrees, u, adj[u])
        if target is None:
            skipped += 1
            continue
        adj[u].discard(v)
        adj[v].discard(u)
        adj[u].add(target)
        adj[target].add(u)
        degrees[pos[v]] -= 1
        degrees[pos[target]] += 1
    edges = []
    for a in ids:
        for b in adj[a]:
            if a < b:
                edges.append((a, b))
    rewired = SocialGraph(ids, edges)
    return rewired, skipped


def rewire(g: SocialGraph, p: float, mode: str = UNIFORM, seed=0) -> SocialGraph:
    """Rewire one endpoint of each selected edge (see rewire_with_diagnostics)."""
    return rewire_with_diagnostics(g, p, mode, seed)[0]


def _uniform_target(rng, ids, u, taken):
    """Uniform over vertices that are neither u nor already adjacent to u.

    Rejection sampling, falling back to an explicit sorted pool when the
    graph is dense enough to starve it; both paths draw from the same
    stream, so results stay deterministic.
    """
    n = len(ids)
    if len(taken) + 1 >= n:
        return None
    for _ in range(_REJECTION_CAP):
        t = ids[rng.randrange(n)]
        if t != u and t not in taken:
            return t
    pool = [t for t in ids if t != u and t not in taken]
    if not pool:
        return None  # pragma: no cover
    return pool[rng.randrange(len(pool))]


def _preferential_target(rng, ids, pos, degrees, u, taken):
    """Degree-proportional choice among valid targets (one uniform draw)."""
    weights = degrees.astype(float).copy()
    weights[pos[u]] = 0.0
    for t in taken:
        weights[pos[t]] = 0.0
    total = float(weights.sum())
    if total <= 0:
        return None
    cut = rng.random() * total
    cumulative = np.cumsum(weights)
    index = int(np.searchsorted(cumulative, cut, side="right"))
    index = min(index, len(ids) - 1)
    return ids[index]


# -- small-world curves --------------------------------------------------------------


@dataclass(frozen=True)
class CurvePoint:
    """One rewiring probability with its trial-averaged scaled measurements."""

    p: float
    l_ratio: float
    c_ratio: float


def _giant_clustering(graph: SocialGraph) -> float:
    report = connected_components(graph)
    if not report.giant_people:
        raise UndefinedMetricError("no giant component to measure")
    return clustering_coefficient(graph.subgraph(report.giant_people))


def small_world_curve(cfg: WreathConfig, p_values, trials: int = 1):
    """Scaled path length and clustering versus rewiring probability.

    Every measurement runs on the giant component and is scaled by the
    untouched lattice's values; each (p, trial) pair rewires a fresh lattice
    with seed ``f"{cfg.seed}:{trial}:{p_index}"``.  Returns CurvePoints in
    p_values order; p = 0 comes back as exactly (1.0, 1.0).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    lattice = generate_wreath(cfg.n, cfg.k)
    base_l = measure_l_pp(lattice).l_pp
    base_c = clustering_coefficient(lattice)
    points = []
    for i, p in enumerate(p_values):
        if p == 0:
            # rewiring selects nothing at p = 0, so every trial is the lattice
            points.append(CurvePoint(p=0.0, l_ratio=1.0, c_ratio=1.0))
            continue
        l_total = 0.0
        c_total = 0.0
        for t in range(trials):
            graph = rewire(lattice, p, cfg.mode, seed=f"{cfg.seed}:{t}:{i}")
            l_total += measure_l_pp(graph).l_pp
            c_total += _giant_clustering(graph)
        points.append(CurvePoint(
            p=float(p),
            l_ratio=(l_total / trials) / base_l,
            c_ratio=(c_total / trials) / base_c,
        ))
    return points
