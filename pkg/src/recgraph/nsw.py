"""Generating-function predictions for random graphs with fixed degree shape.

Given only a degree distribution (undirected case) or a joint in/out-degree
distribution (directed case), estimate the first and second neighborhood
sizes z1 and z2 of a typical vertex, grow them geometrically, and solve for
the path length at which the neighborhood would cover the graph:

    l = (log[(N - 1)(z2 - z1) + z1^2] - log[z1^2]) / log[z2 / z1]

Real clustered graphs systematically exceed these estimates, which is what
makes the gap informative.  The model degenerates when z2 <= z1 (no growing
neighborhood), which surfaces as DegenerateModelError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateModelError, InvalidDistributionError
from .metrics import DegreeDistribution, JointDegreeDistribution

BALANCE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ModelMoments:
    """Expected first and second neighborhood sizes of a typical vertex."""

    z1: float
    z2: float


@dataclass(frozen=True)
class UndirectedModelInput:
    """Degree distribution plus the person count to predict against."""

    distribution: DegreeDistribution
    n_people: int

    def __post_init__(self):
        if self.n_people < 2:
            raise InvalidDistributionError("need at least 2 people to predict a length")


@dataclass(frozen=True)
class DirectedModelInput:
    """Joint degree distribution plus the person and movie counts."""

    distribution: JointDegreeDistribution
    n_people: int
    n_movies: int

    def __post_init__(self):
        if self.n_people < 1 or self.n_movies < 0:
            raise InvalidDistributionError("need people (and a movie count) to predict against")
        if self.n_people + self.n_movies < 2:
            raise InvalidDistributionError("need at least 2 vertices to predict a length")


def moments_undirected(dist: DegreeDistribution) -> ModelMoments:
    """z1 = sum k p_k, z2 = sum k (k - 1) p_k."""
    z1 = sum(k * p for k, p in dist.probabilities.items())
    z2 = sum(k * (k - 1) * p for k, p in dist.probabilities.items())
    return ModelMoments(z1=z1, z2=z2)


def moments_directed(joint: JointDegreeDistribution) -> ModelMoments:
    """z1 = sum k p_jk, z2 = sum j k p_jk, after checking arc balance.

    Every arc leaves one vertex and enters another, so the in- and
    out-degree means must match; an imbalance over 1e-9 is rejected.
    """
    imbalance = sum((j - k) * p for (j, k), p in joint.probabilities.items())
    if abs(imbalance) > BALANCE_TOLERANCE:
        raise InvalidDistributionError(
            f"in/out degree means differ by {imbalance}; arcs must balance")
    z1 = sum(k * p for (_, k), p in joint.probabilities.items())
    z2 = sum(j * k * p for (j, k), p in joint.probabilities.items())
    return ModelMoments(z1=z1, z2=z2)


def neighbors_at_distance(moments: ModelMoments, m: int) -> float:
    """Expected vertices exactly m steps out: z_m = (z2 / z1)**(m - 1) * z1."""
    if m < 1:
        raise ValueError("distance must be a positive integer")
    if moments.z1 <= 0:
        raise DegenerateModelError("no edges: z1 = 0")
    return (moments.z2 / moments.z1) ** (m - 1) * moments.z1


def _predict_length(n: int, moments: ModelMoments) -> float:
    if moments.z1 <= 0:
        raise DegenerateModelError("no edges: z1 = 0")
    if moments.z2 <= moments.z1:
        raise DegenerateModelError(
            f"neighborhoods do not grow: z2 = {moments.z2} <= z1 = {moments.z1}")
    z1, z2 = moments.z1, moments.z2
    # log of the ratio, not a difference of logs: keeps the algebraic
    # collapse to 1.0 exact when the neighborhood already covers the graph
    return math.log(((n - 1) * (z2 - z1) + z1 * z1) / (z1 * z1)) / math.log(z2 / z1)


def predict_l_pp(inp: UndirectedModelInput) -> float:
    """Model mean person-person path length for a graph with N_P people."""
    return _predict_length(inp.n_people, moments_undirected(inp.distribution))


def predict_l_r(inp: DirectedModelInput) -> float:
    """Model mean path length over the whole recommender graph (people + movies)."""
    return _predict_length(inp.n_people + inp.n_movies,
                           moments_directed(inp.distribution))


def predict_l_pm(l_r: float, l_pp: float, n_people: int, n_movies: int) -> float:
    """Back out the person-movie mean from the person-person and overall means.

    The overall mean mixes person-person and person-movie ordered pairs, so
    l_pm = (l_r * (C_pp + C_pm) - l_pp * C_pp) / C_pm with C_pp = N_P(N_P - 1)
    and C_pm = N_P * N_M.
    """
    if n_movies < 1:
        raise DegenerateModelError("no movies: person-movie mean undefined")
    if n_people < 2:
        raise InvalidDistributionError("need at least 2 people for the person-person term")
    c_pp = n_people * (n_people - 1)
    c_pm = n_people * n_movies
    return (l_r * (c_pp + c_pm) - l_pp * c_pp) / c_pm
