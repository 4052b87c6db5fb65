"""Exact structural measurements on social and recommender graphs.

Components, degree distributions, average shortest-path lengths, clustering,
and the small utilities (complementary degree CDFs, L-infinity discrepancy)
the experiment drivers report.  Path lengths are exact breadth-first values:
every graph here is unweighted, so per-source BFS from each giant-component
person replaces anything heavier.  Above 5,000 giant people the source set is
uniformly sampled (seeded) instead, and the result says so.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csgraph

from .errors import UndefinedMetricError
from .jumps import RecommenderGraph, SocialGraph

EXACT_SOURCE_LIMIT = 5000
DEFAULT_SAMPLED_SOURCES = 1000


# -- types -------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentReport:
    """Component structure of a graph.

    ``component_sizes`` holds (people, movies) pairs in the listing order
    described by :func:`connected_components`; ``giant_people`` and
    ``giant_movies`` are the ids inside the largest component.
    """

    component_sizes: tuple
    giant_people: tuple
    giant_movies: tuple
    isolated_people: int
    shattered: bool


@dataclass(frozen=True)
class DegreeDistribution:
    """Degree -> fraction of vertices, over ``n`` vertices."""

    probabilities: dict
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise UndefinedMetricError("degree distribution needs at least one vertex")
        if any(k < 0 for k in self.probabilities):
            raise ValueError("degrees must be non-negative")
        mass = sum(self.probabilities.values())
        if abs(mass - 1.0) > 1e-9:
            raise ValueError(f"probabilities must sum to 1, got {mass}")

    def counts(self) -> dict:
        return {k: round(p * self.n) for k, p in sorted(self.probabilities.items())}


@dataclass(frozen=True)
class JointDegreeDistribution:
    """(indegree, outdegree) -> fraction of vertices, over ``n`` vertices."""

    probabilities: dict
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise UndefinedMetricError("joint degree distribution needs at least one vertex")
        if any(j < 0 or k < 0 for j, k in self.probabilities):
            raise ValueError("degrees must be non-negative")
        mass = sum(self.probabilities.values())
        if abs(mass - 1.0) > 1e-9:
            raise ValueError(f"probabilities must sum to 1, got {mass}")


@dataclass(frozen=True)
class PathLengthStats:
    """Mean shortest-path lengths with the pair counts behind each mean.

    ``sources`` is how many BFS sources ran; ``sampled`` is False when that
    was every person in the giant component.  Means are None when the
    corresponding pair count is zero.
    """

    l_pp: float | None
    l_pm: float | None
    l_r: float | None
    pairs_pp: int
    pairs_pm: int
    sources: int
    sampled: bool


# -- components ---------------------------------------------------------------


def _component_key(people_ids, movie_ids):
    """Listing order: total size desc, people desc, then smallest vertex id."""
    if people_ids:
        anchor = (0, min(people_ids))
    else:
        anchor = (1, min(movie_ids))
    return (-(len(people_ids) + len(movie_ids)), -len(people_ids), anchor)


def connected_components(graph) -> ComponentReport:
    """Component structure of a SocialGraph or RecommenderGraph.

    People partition by the undirected social edges; isolated people are
    single-person components.  For a recommender graph each movie joins the
    component of its raters, picking the one with the most people (ties to
    the smaller minimum person id) when raters span several.  Movies never
    merge person components: their arcs are one-way, so two people belong
    together only when social edges alone connect them.

    Components are listed by total size descending, ties broken toward more
    people and then the smaller minimum vertex id; the first entry is the
    giant component.
    """
    if isinstance(graph, RecommenderGraph):
        social = graph.social
        ratings = graph.ratings
    elif isinstance(graph, SocialGraph):
        social = graph
        ratings = None
    else:
        raise TypeError(f"expected SocialGraph or RecommenderGraph, got {type(graph).__name__}")

    n = social.n
    if n == 0 and (ratings is None or ratings.n_movies == 0):
        return ComponentReport((), (), (), 0, True)

    if n:
        _, labels = csgraph.connected_components(social.adjacency_csr(), directed=False)
    else:
        labels = np.empty(0, dtype=np.int64)

    people_by_label = {}
    for idx, lab in enumerate(labels):
        people_by_label.setdefault(int(lab), []).append(int(social.vertices[idx]))

    movies_by_label = {}
    if ratings is not None:
        # rank labels by (people count desc, min person id asc) for movie assignment
        rank = {lab: (-len(ids), min(ids)) for lab, ids in people_by_label.items()}
        raters = {}
        for pi, mi in zip(ratings.edge_person_idx, ratings.edge_movie_idx):
            raters.setdefault(int(mi), set()).add(int(labels[pi]))
        next_label = (max(people_by_label) + 1) if people_by_label else 0
        for mi in range(ratings.n_movies):
            movie_id = int(ratings.movies[mi])
            labs = raters.get(mi)
            if labs:
                best = min(labs, key=lambda lab: rank[lab])
            else:
                best = next_label  # unrated movie: its own component
                next_label += 1
            movies_by_label.setdefault(best, []).append(movie_id)

    all_labels = set(people_by_label) | set(movies_by_label)
    comps = [
        (people_by_label.get(lab, []), movies_by_label.get(lab, []))
        for lab in all_labels
    ]
    comps.sort(key=lambda c: _component_key(c[0], c[1]))

    degrees = social.degrees()
    isolated = int(np.count_nonzero(degrees == 0))

    if comps:
        giant_people = tuple(sorted(comps[0][0]))
        giant_movies = tuple(sorted(comps[0][1]))
    else:
        giant_people = giant_movies = ()
    giant_set = set(giant_people)
    shattered = all(
        int(degrees[i]) == 0
        for i, v in enumerate(social.vertices)
        if int(v) not in giant_set
    )
    return ComponentReport(
        component_sizes=tuple((len(p), len(m)) for p, m in comps),
        giant_people=giant_people,
        giant_movies=giant_movies,
        isolated_people=isolated,
        shattered=shattered,
    )


# -- degree distributions -------------------------------------------------------


def degree_distribution(gs: SocialGraph, largest_only=False) -> DegreeDistribution:
    """Distribution of social degrees, optionally restricted to the giant.

    The giant component is closed under its own edges, so restriction just
    filters vertices; member degrees are unchanged.
    """
    degrees = gs.degrees()
    if largest_only:
        report = connected_components(gs)
        keep = [gs._index[v] for v in report.giant_people]
        degrees = degrees[keep] if keep else degrees[:0]
    n = len(degrees)
    if n == 0:
        raise UndefinedMetricError("degree distribution of an empty graph")
    values, counts = np.unique(degrees, return_counts=True)
    probs = {int(k): int(c) / n for k, c in zip(values, counts)}
    return DegreeDistribution(probabilities=probs, n=n)


def joint_degree_distribution(gr: RecommenderGraph, largest_only=False) -> JointDegreeDistribution:
    """Joint (indegree, outdegree) distribution over people and movies.

    People have indegree equal to their social degree and outdegree equal to
    social degree plus rated movies; movies have indegree equal to their
    rater count and outdegree 0.  With ``largest_only`` both vertex set and
    arcs are restricted to the giant component (induced counts).
    """
    social = gr.social
    ratings = gr.ratings
    if largest_only:
        report = connected_components(gr)
        people = list(report.giant_people)
        movies = list(report.giant_movies)
    else:
        people = [int(v) for v in social.vertices]
        movies = [int(m) for m in ratings.movies]
    n = len(people) + len(movies)
    if n == 0:
        raise UndefinedMetricError("joint degree distribution of an empty graph")

    person_sel = {p: i for i, p in enumerate(people)}
    movie_sel = {m: i for i, m in enumerate(movies)}
    social_deg = social.degrees()
    person_out_movies = np.zeros(len(people), dtype=np.int64)
    movie_in = np.zeros(len(movies), dtype=np.int64)
    for pi, mi in zip(ratings.edge_person_idx, ratings.edge_movie_idx):
        p = int(ratings.people[pi])
        m = int(ratings.movies[mi])
        if p in person_sel and m in movie_sel:
            person_out_movies[person_sel[p]] += 1
            movie_in[movie_sel[m]] += 1

    counts = {}
    for p, i in person_sel.items():
        j = int(social_deg[social._index[p]])
        k = j + int(person_out_movies[i])
        counts[(j, k)] = counts.get((j, k), 0) + 1
    for m, i in movie_sel.items():
        jk = (int(movie_in[i]), 0)
        counts[jk] = counts.get(jk, 0) + 1
    probs = {jk: c / n for jk, c in counts.items()}
    return JointDegreeDistribution(probabilities=probs, n=n)


# -- path lengths ----------------------------------------------------------------


def _pick_sources(candidates, max_sources, seed):
    """Exact sources up to the limit, else a seeded uniform sample.

    ``max_sources=None`` applies the default policy: exact through
    EXACT_SOURCE_LIMIT people, then DEFAULT_SAMPLED_SOURCES samples.
    """
    ordered = sorted(candidates)
    if max_sources is None:
        if len(ordered) <= EXACT_SOURCE_LIMIT:
            return ordered, False
        count = DEFAULT_SAMPLED_SOURCES
    elif len(ordered) <= max_sources:
        return ordered, False
    else:
        count = max_sources
    rng = random.Random(f"sources:{seed}")
    return sorted(rng.sample(ordered, count)), True


def measure_l_pp(gs: SocialGraph, max_sources=None, seed=0) -> PathLengthStats:
    """Mean shortest-path length between ordered person pairs in the giant.

    BFS runs from every giant-component person (or a seeded sample, see
    :func:`_pick_sources`); self-pairs are excluded.
    """
    report = connected_components(gs)
    if len(report.giant_people) < 2:
        raise UndefinedMetricError("l_pp needs a giant component with at least 2 people")
    sources, sampled = _pick_sources(report.giant_people, max_sources, seed)
    src_idx = np.array([gs._index[v] for v in sources], dtype=np.int64)
    dist = csgraph.dijkstra(gs.adjacency_csr(), directed=False, indices=src_idx,
                            unweighted=True)
    finite = np.isfinite(dist) & (dist > 0)
    total = float(dist[finite].sum())
    pairs = int(finite.sum())
    return PathLengthStats(
        l_pp=total / pairs if pairs else None,
        l_pm=None,
        l_r=None,
        pairs_pp=pairs,
        pairs_pm=0,
        sources=len(sources),
        sampled=sampled,
    )


def measure_l_r_l_pm(gr: RecommenderGraph, max_sources=None, seed=0) -> PathLengthStats:
    """Directed means from giant-component people to people and to movies.

    BFS follows arc directions.  l_pp averages over reachable person
    targets, l_pm over reachable movie targets, and l_r over their union,
    so l_r * (pairs_pp + pairs_pm) == l_pp * pairs_pp + l_pm * pairs_pm.
    Unreachable pairs are simply absent from the counts.
    """
    report = connected_components(gr)
    if not report.giant_people:
        raise UndefinedMetricError("l_r needs at least one person source in the giant")
    sources, sampled = _pick_sources(report.giant_people, max_sources, seed)
    n_people = gr.n_people
    person_ix = {int(p): i for i, p in enumerate(gr.ratings.people)}
    src_idx = np.array([person_ix[v] for v in sources], dtype=np.int64)
    dist = csgraph.dijkstra(gr.out_csr(), directed=True, indices=src_idx,
                            unweighted=True)
    pp = dist[:, :n_people]
    pm = dist[:, n_people:]
    pp_finite = np.isfinite(pp) & (pp > 0)
    pm_finite = np.isfinite(pm) & (pm > 0)
    sum_pp = float(pp[pp_finite].sum())
    sum_pm = float(pm[pm_finite].sum())
    pairs_pp = int(pp_finite.sum())
    pairs_pm = int(pm_finite.sum())
    both = pairs_pp + pairs_pm
    return PathLengthStats(
        l_pp=sum_pp / pairs_pp if pairs_pp else None,
        l_pm=sum_pm / pairs_pm if pairs_pm else None,
        l_r=(sum_pp + sum_pm) / both if both else None,
        pairs_pp=pairs_pp,
        pairs_pm=pairs_pm,
        sources=len(sources),
        sampled=sampled,
    )


# -- clustering --------------------------------------------------------------------


def clustering_coefficient(g: SocialGraph) -> float:
    """Mean over vertices of the edge density among each vertex's neighbors.

    Vertices with fewer than two neighbors contribute zero.
    """
    if g.n == 0:
        raise UndefinedMetricError("clustering coefficient of an empty graph")
    if g.edge_count == 0:
        return 0.0
    a = g.adjacency_csr().astype(np.int64)
    closed = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel()  # 2 * triangles at i
    deg = g.degrees().astype(np.int64)
    denom = deg * (deg - 1)
    contrib = np.divide(closed, denom, out=np.zeros(g.n, dtype=float),
                        where=denom > 0)
    return float(contrib.mean())


# -- report utilities -----------------------------------------------------------------


def degree_cdf(dist: DegreeDistribution, log_scale=False):
    """Complementary cumulative counts: vertices with degree >= each value.

    Entries cover the degrees present in the distribution, ascending; the
    first count always equals n.  With ``log_scale`` counts come back as
    log10 (zero counts would be omitted, though listed degrees always have
    at least one vertex at or above them).
    """
    counts = dist.counts()
    degrees = sorted(counts)
    remaining = dist.n
    out = []
    for k in degrees:
        if log_scale:
            if remaining > 0:
                out.append((k, float(np.log10(remaining))))
        else:
            out.append((k, remaining))
        remaining -= counts[k]
    return out


def linf_discrepancy(a, b) -> float:
    """Largest absolute gap between two sequences, skipping missing entries.

    Entries may be None on either side; those positions are skipped
    pairwise.  Raises on length mismatch, or when nothing overlaps.
    """
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    gaps = [abs(x - y) for x, y in zip(a, b) if x is not None and y is not None]
    if not gaps:
        raise UndefinedMetricError("no overlapping entries to compare")
    return max(gaps)


# -- CSV rendering ------------------------------------------------------------------


def csv_float(x) -> str:
    """Render a value for CSV: 6 significant digits, ints plain, None empty."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".6g")


def component_report_csv(report: ComponentReport) -> str:
    lines = ["component_index,people,movies"]
    for index, (p, m) in enumerate(report.component_sizes, 1):
        lines.append(f"{index},{p},{m}")
    return "\n".join(lines) + "\n"


def degree_cdf_csv(entries, log_scale=False) -> str:
    header = "degree,log10_count" if log_scale else "degree,count"
    lines = [header]
    lines.extend(f"{k},{csv_float(c)}" for k, c in entries)
    return "\n".join(lines) + "\n"


def path_stats_csv(stats: PathLengthStats) -> str:
    header = "l_pp,l_r,l_pm,c_pp,c_pm,sampled_sources"
    row = ",".join([
        csv_float(stats.l_pp), csv_float(stats.l_r), csv_float(stats.l_pm),
        str(stats.pairs_pp), str(stats.pairs_pm),
        str(stats.sources) if stats.sampled else "all",
    ])
    return header + "\n" + row + "\n"
