"""Rating datasets as bipartite person-movie graphs.

Two on-disk formats are supported: the tab-separated layout used by the
MovieLens distributions (person, movie, rating, timestamp; no header) and a
generic CSV with a ``person,movie[,rating]`` header.  Parsed ratings become an
immutable bipartite graph, and everything downstream (jumps, metrics, the
synthetic generator) works from that graph.

People and movies keep their external integer ids.  The two id spaces are
independent: person 7 and movie 7 are different vertices.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .errors import (
    EmptyDatasetError,
    FitError,
    ParseError,
    UndefinedMetricError,
    UnknownNodeError,
)

MOVIELENS_TAB = "movielens_tab"
GENERIC_CSV = "generic_csv"

FORMATS = (MOVIELENS_TAB, GENERIC_CSV)


@dataclass(frozen=True)
class RatingTriple:
    """One parsed rating row."""

    person: int
    movie: int
    rating: float | None = None
    timestamp: int | None = None


class BipartiteRatings:
    """Immutable bipartite graph of people and the movies they rated.

    Duplicate (person, movie) pairs collapse to a single edge, keeping the
    first occurrence; the number of collapsed rows is kept in
    ``duplicate_count``.  ``people``/``movies`` may be passed explicitly to
    retain ids that never appear on an edge.
    """

    def __init__(self, pairs, people=None, movies=None):
        kept = []
        seen = set()
        dups = 0
        for person, movie in pairs:
            key = (int(person), int(movie))
            if key in seen:
                dups += 1
                continue
            seen.add(key)
            kept.append(key)
        pset = {p for p, _ in kept}
        mset = {m for _, m in kept}
        if people is not None:
            people = {int(p) for p in people}
            stray = pset - people
            if stray:
                raise UnknownNodeError(f"edge endpoints outside the person set: {sorted(stray)[:5]}")
            pset = people
        if movies is not None:
            movies = {int(m) for m in movies}
            stray = mset - movies
            if stray:
                raise UnknownNodeError(f"edge endpoints outside the movie set: {sorted(stray)[:5]}")
            mset = movies
        if any(p < 0 for p in pset) or any(m < 0 for m in mset):
            raise ValueError("person and movie ids must be non-negative")
        self.people = np.array(sorted(pset), dtype=np.int64)
        self.movies = np.array(sorted(mset), dtype=np.int64)
        self.duplicate_count = dups
        self._pindex = {int(p): i for i, p in enumerate(self.people)}
        self._mindex = {int(m): i for i, m in enumerate(self.movies)}
        n = len(kept)
        pi = np.fromiter((self._pindex[p] for p, _ in kept), dtype=np.int64, count=n)
        mi = np.fromiter((self._mindex[m] for _, m in kept), dtype=np.int64, count=n)
        order = np.lexsort((mi, pi))
        self.edge_person_idx = pi[order]
        self.edge_movie_idx = mi[order]
        self._adj_p = None
        self._adj_m = None
        self._matrix = None

    # -- basic shape ----------------------------------------------------

    @property
    def n_people(self) -> int:
        return len(self.people)

    @property
    def n_movies(self) -> int:
        return len(self.movies)

    @property
    def edge_count(self) -> int:
        return len(self.edge_person_idx)

    def __repr__(self):
        return (f"BipartiteRatings(n_people={self.n_people}, n_movies={self.n_movies}, "
                f"edges={self.edge_count})")

    # -- lookups ---------------------------------------------------------

    def has_person(self, person) -> bool:
        return int(person) in self._pindex

    def has_movie(self, movie) -> bool:
        return int(movie) in self._mindex

    def _adjacency_people(self):
        if self._adj_p is None:
            adj = {int(p): set() for p in self.people}
            for pi, mi in zip(self.edge_person_idx, self.edge_movie_idx):
                adj[int(self.people[pi])].add(int(self.movies[mi]))
            self._adj_p = {p: frozenset(s) for p, s in adj.items()}
        return self._adj_p

    def _adjacency_movies(self):
        if self._adj_m is None:
            adj = {int(m): set() for m in self.movies}
            for pi, mi in zip(self.edge_person_idx, self.edge_movie_idx):
                adj[int(self.movies[mi])].add(int(self.people[pi]))
            self._adj_m = {m: frozenset(s) for m, s in adj.items()}
        return self._adj_m

    def movies_of(self, person) -> frozenset:
        try:
            return self._adjacency_people()[int(person)]
        except KeyError:
            raise UnknownNodeError(f"unknown person id: {person}") from None

    def people_of(self, movie) -> frozenset:
        try:
            return self._adjacency_movies()[int(movie)]
        except KeyError:
            raise UnknownNodeError(f"unknown movie id: {movie}") from None

    def person_degrees(self) -> np.ndarray:
        """Rating counts aligned with ``self.people``."""
        return np.bincount(self.edge_person_idx, minlength=self.n_people)

    def movie_degrees(self) -> np.ndarray:
        """Rating counts aligned with ``self.movies``."""
        return np.bincount(self.edge_movie_idx, minlength=self.n_movies)

    def incidence(self):
        """People x movies sparse 0/1 matrix (cached)."""
        if self._matrix is None:
            data = np.ones(self.edge_count, dtype=np.int32)
            self._matrix = sparse.csr_matrix(
                (data, (self.edge_person_idx, self.edge_movie_idx)),
                shape=(self.n_people, self.n_movies),
            )
        return self._matrix

    def edge_ids(self):
        """Iterate (person_id, movie_id) pairs in ascending order."""
        for pi, mi in zip(self.edge_person_idx, self.edge_movie_idx):
            yield int(self.people[pi]), int(self.movies[mi])

    # -- export ----------------------------------------------------------

    def export_movielens_tab(self, path):
        """Write the edges in the tab-separated format (rating 1, timestamp 0)."""
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for p, m in self.edge_ids():
                fh.write(f"{p}\t{m}\t1\t0\n")


# -- parsing -------------------------------------------------------------


def _parse_int(field, path, lineno, what):
    try:
        value = int(field)
    except ValueError:
        raise ParseError(path, lineno, f"{what} is not an integer: {field!r}") from None
    if value < 0:
        raise ParseError(path, lineno, f"{what} must be non-negative: {value}")
    return value


def _iter_movielens_tab(path):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise ParseError(path, lineno, f"expected 4 tab-separated fields, got {len(fields)}")
            person = _parse_int(fields[0], path, lineno, "person id")
            movie = _parse_int(fields[1], path, lineno, "movie id")
            try:
                rating = float(fields[2])
            except ValueError:
                raise ParseError(path, lineno, f"rating is not numeric: {fields[2]!r}") from None
            timestamp = _parse_int(fields[3], path, lineno, "timestamp")
            yield RatingTriple(person, movie, rating, timestamp)


def _iter_generic_csv(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDatasetError(f"{path}: empty file") from None
        header = [h.strip().lower() for h in header]
        if header[:2] != ["person", "movie"] or len(header) > 3 or (
                len(header) == 3 and header[2] != "rating"):
            raise ParseError(path, 1, "header must be person,movie[,rating]")
        has_rating = len(header) == 3
        for lineno, row in enumerate(reader, 2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise ParseError(path, lineno, f"expected {len(header)} fields, got {len(row)}")
            person = _parse_int(row[0].strip(), path, lineno, "person id")
            movie = _parse_int(row[1].strip(), path, lineno, "movie id")
            rating = None
            if has_rating and row[2].strip():
                try:
                    rating = float(row[2])
                except ValueError:
                    raise ParseError(path, lineno, f"rating is not numeric: {row[2]!r}") from None
            yield RatingTriple(person, movie, rating)


def load_ratings(path, fmt=MOVIELENS_TAB) -> BipartiteRatings:
    """Parse a ratings file into a BipartiteRatings graph.

    Malformed rows raise ParseError with the 1-based line number.  Duplicate
    (person, movie) rows keep the first occurrence and are counted on the
    returned graph.  A file with no rating rows raises EmptyDatasetError.
    """
    if fmt == MOVIELENS_TAB:
        triples = _iter_movielens_tab(path)
    elif fmt == GENERIC_CSV:
        triples = _iter_generic_csv(path)
    else:
        raise ValueError(f"unknown format: {fmt!r} (expected one of {FORMATS})")
    graph = BipartiteRatings((t.person, t.movie) for t in triples)
    if graph.edge_count == 0:
        raise EmptyDatasetError(f"{path}: no ratings found")
    return graph


# -- whole-dataset measures ----------------------------------------------


def sparsity(g: BipartiteRatings) -> float:
    """Fraction of the person x movie board left empty."""
    cells = g.n_people * g.n_movies
    if cells == 0:
        raise UndefinedMetricError("sparsity needs at least one person and one movie")
    return (cells - g.edge_count) / cells


def _bipartite_csgraph(g: BipartiteRatings):
    """People and movies in one index space: people first, then movies."""
    n = g.n_people + g.n_movies
    rows = g.edge_person_idx
    cols = g.edge_movie_idx + g.n_people
    data = np.ones(len(rows), dtype=np.int8)
    return sparse.csr_matrix((data, (rows, cols)), shape=(n, n))


def is_connected_bipartite(g: BipartiteRatings) -> bool:
    """True when one component spans every person and every movie."""
    n = g.n_people + g.n_movies
    if n <= 1:
        return True
    if g.edge_count == 0:
        return False
    n_comp, _ = csgraph.connected_components(_bipartite_csgraph(g), directed=False)
    return n_comp == 1


def bfs_reach_count(g: BipartiteRatings, start, depth, mode="person") -> int:
    """Vertices within ``depth`` hops of a start vertex, the start included.

    The graph is bipartite, so hop parity alternates sides: from a person,
    depth 1 adds their movies, depth 2 adds co-raters, and so on.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if mode == "person":
        if not g.has_person(start):
            raise UnknownNodeError(f"unknown person id: {start}")
        frontier = np.zeros(g.n_people, dtype=bool)
        frontier[g._pindex[int(start)]] = True
        person_side = True
    elif mode == "movie":
        if not g.has_movie(start):
            raise UnknownNodeError(f"unknown movie id: {start}")
        frontier = np.zeros(g.n_movies, dtype=bool)
        frontier[g._mindex[int(start)]] = True
        person_side = False
    else:
        raise ValueError(f"mode must be 'person' or 'movie', got {mode!r}")

    inc = g.incidence()
    seen_p = np.zeros(g.n_people, dtype=bool)
    seen_m = np.zeros(g.n_movies, dtype=bool)
    if person_side:
        seen_p |= frontier
    else:
        seen_m |= frontier
    for _ in range(depth):
        if not frontier.any():
            break
        if person_side:
            reached = (inc.T @ frontier.astype(np.int32)) > 0
            frontier = reached & ~seen_m
            seen_m |= frontier
        else:
            reached = (inc @ frontier.astype(np.int32)) > 0
            frontier = reached & ~seen_p
            seen_p |= frontier
        person_side = not person_side
    return int(seen_p.sum() + seen_m.sum())


# -- hits and buffs -------------------------------------------------------


@dataclass(frozen=True)
class HitsBuffsOrdering:
    """People and movies ranked by rating count, most active first.

    ``buff_rank[0]`` is the person with buff index 1 (the heaviest rater);
    ties break toward the smaller raw id.  ``hit_rank`` does the same for
    movies.
    """

    buff_rank: tuple
    hit_rank: tuple


def reorder_hits_buffs(g: BipartiteRatings) -> HitsBuffsOrdering:
    """Rank people and movies by descending degree (ties by ascending id)."""
    pdeg = g.person_degrees()
    mdeg = g.movie_degrees()
    buffs = sorted(range(g.n_people), key=lambda i: (-int(pdeg[i]), int(g.people[i])))
    hits = sorted(range(g.n_movies), key=lambda i: (-int(mdeg[i]), int(g.movies[i])))
    return HitsBuffsOrdering(
        buff_rank=tuple(int(g.people[i]) for i in buffs),
        hit_rank=tuple(int(g.movies[i]) for i in hits),
    )


# -- power-law fit ---------------------------------------------------------


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares fit of counts to C * rank**-alpha * exp(-rank / tau).

    ``tau`` is None when the fit was run without the exponential cutoff term.
    With the term active, tau comes back as the negative reciprocal of the
    rank coefficient; it is positive when the data actually decays.
    """

    alpha: float
    tau: float | None
    intercept: float
    residual: float


def fit_power_law(counts, with_cutoff=True) -> PowerLawFit:
    """Fit a rank-ordered count sequence to a power law with optional cutoff.

    Works in log space: log y = intercept - alpha * log b - b / tau over
    ranks b = 1..len(counts).  Zero or negative counts make the log
    undefined and raise FitError, as do sequences shorter than 3.
    """
    y = np.asarray(counts, dtype=float)
    if y.ndim != 1 or len(y) < 3:
        raise FitError("need at least 3 counts for a fit")
    if np.any(y <= 0):
        raise FitError("counts must be positive (log undefined at zero)")
    b = np.arange(1, len(y) + 1, dtype=float)
    cols = [np.ones_like(b), np.log(b)]
    if with_cutoff:
        cols.append(b)
    x = np.column_stack(cols)
    target = np.log(y)
    coef, _, _, _ = np.linalg.lstsq(x, target, rcond=None)
    residual = float(np.sum((x @ coef - target) ** 2))
    alpha = -float(coef[1])
    tau = None
    if with_cutoff:
        slope = float(coef[2])
        tau = math.inf if slope == 0.0 else -1.0 / slope
    return PowerLawFit(alpha=alpha, tau=tau, intercept=float(coef[0]), residual=residual)
