"""Graph magnitude under the geodesic-counting measure.

The modified similarity matrix has entries |Omega_{x,y}| * exp(-t*d_G(x,y)),
where |Omega_{x,y}| is the number of distinct shortest paths.  For graphs
where all geodesics are unique this collapses to the classical magnitude of
the shortest-path metric.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GeodesicOverflowError, MetricValidationError
from .finite_mag import _solve_ones
from .spaces import (FiniteMetricSpace, GeodesicGraph, MagnitudeSeries,
                     SeriesTerm, graph_metric)

#: relative tolerance for recognizing equal-length paths on weighted graphs
TIE_TOL = 1e-9

#: path counts beyond this are not exactly representable in float64
COUNT_LIMIT = float(2**53)


@dataclass(frozen=True)
class GeodesicCountMatrix:
    """counts[x, y] = number of shortest x-y paths; diagonal zero."""

    counts: np.ndarray

    def __post_init__(self):
        self.counts.setflags(write=False)


def count_geodesics(g: GeodesicGraph) -> GeodesicCountMatrix:
    """Count shortest paths between every vertex pair.

    Runs one Dijkstra pass per source, then accumulates counts over the
    shortest-path DAG in order of increasing distance.  Edges (u, v) with
    dist[u] + w(u,v) == dist[v] (within TIE_TOL relative) are DAG edges.
    """
    metric = graph_metric(g)  # also rejects disconnected graphs
    n = g.vertex_count
    dist = metric.dist
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for u, v, w in g.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))

    counts = np.zeros((n, n))
    for s in range(n):
        d = dist[s]
        c = np.zeros(n)
        c[s] = 1.0
        for v in np.argsort(d, kind="stable"):
            v = int(v)
            if v == s:
                continue
            acc = 0.0
            for u, w in adj[v]:
                if abs(d[u] + w - d[v]) <= TIE_TOL * max(1.0, d[v]):
                    acc += c[u]
            c[v] = acc
        if c.max() > COUNT_LIMIT:
            raise GeodesicOverflowError(
                f"shortest-path count {c.max():.3e} exceeds exact float64 range"
            )
        counts[s] = c
    counts[np.diag_indices(n)] = 0.0
    return GeodesicCountMatrix(counts)


def tilde_similarity(g: GeodesicGraph, t: float) -> np.ndarray:
    """Entries |Omega| * exp(-t*d_G) off-diagonal, 1 on the diagonal."""
    if t <= 0:
        raise ValueError("scale t must be positive")
    metric = graph_metric(g)
    counts = count_geodesics(g).counts
    z = counts * np.exp(-t * metric.dist)
    np.fill_diagonal(z, 1.0)
    return z


def tilde_magnitude(g: GeodesicGraph, t: float) -> float:
    """Sum of the entries of the inverse modified similarity matrix."""
    return float(_solve_ones(tilde_similarity(g, t)).sum())


def tilde_neumann_partial(g: GeodesicGraph, t: float, N: int) -> MagnitudeSeries:
    """Alternating series for tilde_magnitude via powers of Z-tilde - I."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    n = g.vertex_count
    y = tilde_similarity(g, t) - np.eye(n)
    ones = np.ones(n)
    w = ones.copy()
    terms = []
    for k in range(1, N + 1):
        w = y @ w
        terms.append(SeriesTerm(order=k, value=float(ones @ w), std_error=0.0, method="exact"))
    return MagnitudeSeries(t=t, total_mass=float(n), terms=tuple(terms))


def tilde_convergence_threshold(g: GeodesicGraph) -> tuple[float, float]:
    """(bisection threshold, crude bound) for the counting-measure series.

    Crude sufficient bound: with S = max_y sum_{x != y} |Omega_{x,y}| and
    eps the minimum distance, every column sum of Y-tilde is at most
    S * exp(-t*eps), so t > log(S)/eps suffices.  For the 4-cycle S = 4;
    with the length-2 diagonal S = 5.
    """
    n = g.vertex_count
    if n < 2:
        raise MetricValidationError("convergence threshold undefined for a singleton")
    metric = graph_metric(g)
    counts = count_geodesics(g).counts
    eps = metric.min_positive_distance()
    # sufficient: max_y sum counts * e^{-t*eps} <= colsum_max * e^{-t*eps} < 1
    colsum_max = float(counts.sum(axis=0).max())
    crude = math.log(colsum_max) / eps

    def col_max(t: float) -> float:
        y = counts * np.exp(-t * metric.dist)
        return float(y.sum(axis=0).max())

    lo, hi = 0.0, max(crude, 1.0)
    while col_max(hi) >= 1.0:
        hi *= 2.0
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if col_max(mid) < 1.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi), crude
