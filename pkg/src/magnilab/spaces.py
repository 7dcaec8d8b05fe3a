"""Core domain types: finite metric spaces, geodesic graphs, analytic spaces.

Everything here is immutable after construction and safe to share across
threads; all operations are pure functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import DisconnectedGraphError, MetricValidationError

#: absolute tolerance for metric-invariant checks on float64 distances
METRIC_TOL = 1e-12


# ---------------------------------------------------------------------------
# finite metric spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteMetricSpace:
    """A finite metric space given by point labels and a distance matrix."""

    points: tuple[str, ...]
    dist: np.ndarray  # (n, n) float64, read-only

    def __post_init__(self):
        d = np.array(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise MetricValidationError(f"distance matrix must be square, got shape {d.shape}")
        if len(self.points) != d.shape[0]:
            raise MetricValidationError(
                f"{len(self.points)} labels for a {d.shape[0]}x{d.shape[0]} matrix"
            )
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "points", tuple(str(p) for p in self.points))

    @classmethod
    def from_matrix(cls, dist, points: Sequence[str] | None = None) -> "FiniteMetricSpace":
        d = np.asarray(dist, dtype=float)
        if points is None:
            points = [str(i) for i in range(d.shape[0])]
        return cls(tuple(points), d)

    @property
    def size(self) -> int:
        return self.dist.shape[0]

    def min_positive_distance(self) -> float:
        n = self.size
        if n < 2:
            raise MetricValidationError("no positive distances in a singleton space")
        off = self.dist[~np.eye(n, dtype=bool)]
        return float(off.min())


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_metric: a list of (invariant, offending indices)."""

    violations: tuple[tuple[str, tuple[int, ...]], ...]

    @property
    def valid(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.valid:
            return "valid metric"
        return "; ".join(f"{name} at {idx}" for name, idx in self.violations)


def validate_metric(m: FiniteMetricSpace, tol: float = METRIC_TOL) -> ValidationReport:
    """Check symmetry, zero diagonal, positivity, and the triangle inequality.

    Returns a report listing every violated invariant with offending indices;
    the report is empty iff the space is a valid metric space.
    """
    d = m.dist
    n = d.shape[0]
    bad: list[tuple[str, tuple[int, ...]]] = []

    asym = np.argwhere(np.abs(d - d.T) > tol)
    for i, j in asym[asym[:, 0] < asym[:, 1]]:
        bad.append(("asymmetric", (int(i), int(j))))
    for i in range(n):
        if abs(d[i, i]) > tol:
            bad.append(("nonzero diagonal", (i,)))
    offdiag = np.argwhere((d <= 0.0) & ~np.eye(n, dtype=bool))
    for i, j in offdiag[offdiag[:, 0] < offdiag[:, 1]]:
        bad.append(("nonpositive off-diagonal", (int(i), int(j))))
    # d(i,k) <= d(i,j) + d(j,k) for all ordered triples
    viol = d[:, None, :] > d[:, :, None] + d[None, :, :] + tol
    for i, j, k in np.argwhere(viol):
        if i != j and j != k and i != k:
            bad.append(("triangle inequality", (int(i), int(j), int(k))))
    return ValidationReport(tuple(bad))


# ---------------------------------------------------------------------------
# geodesic graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeodesicGraph:
    """Undirected graph with positive edge lengths (default 1) and no loops."""

    vertex_count: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise MetricValidationError("graph needs at least one vertex")
        seen = set()
        norm = []
        for e in self.edges:
            if len(e) == 2:
                u, v, w = int(e[0]), int(e[1]), 1.0
            else:
                u, v, w = int(e[0]), int(e[1]), float(e[2])
            if u == v:
                raise MetricValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise MetricValidationError(f"edge ({u},{v}) out of range")
            if w <= 0:
                raise MetricValidationError(f"edge ({u},{v}) has nonpositive length {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise MetricValidationError(f"duplicate edge {key}")
            seen.add(key)
            norm.append((u, v, w))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def is_unit(self) -> bool:
        return all(w == 1.0 for _, _, w in self.edges)

    def adjacency(self) -> csr_matrix:
        n = self.vertex_count
        if not self.edges:
            return csr_matrix((n, n))
        u, v, w = zip(*self.edges)
        rows = np.array(u + v)
        cols = np.array(v + u)
        data = np.array(w + w, dtype=float)
        return csr_matrix((data, (rows, cols)), shape=(n, n))


def graph_metric(g: GeodesicGraph) -> FiniteMetricSpace:
    """All-pairs shortest-path metric of a connected graph.

    Raises DisconnectedGraphError naming an unreachable pair.
    """
    n = g.vertex_count
    if n == 1:
        return FiniteMetricSpace.from_matrix(np.zeros((1, 1)))
    dist = dijkstra(g.adjacency(), directed=False)
    unreachable = np.argwhere(np.isinf(dist))
    if len(unreachable):
        i, j = unreachable[0]
        raise DisconnectedGraphError(int(i), int(j))
    if g.is_unit:
        dist = np.round(dist)  # BFS distances are exact integers
    return FiniteMetricSpace.from_matrix(dist)


# ---------------------------------------------------------------------------
# analytic spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Circle:
    """Round circle of radius r with the arc-length metric and dvol measure."""

    r: float = 1.0

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("circle radius must be positive")

    @property
    def total_mass(self) -> float:
        return 2.0 * math.pi * self.r

    @property
    def diameter(self) -> float:
        return math.pi * self.r


@dataclass(frozen=True)
class Sphere2:
    """Round 2-sphere of radius r with the great-circle metric and dvol."""

    r: float = 1.0

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("sphere radius must be positive")

    @property
    def total_mass(self) -> float:
        return 4.0 * math.pi * self.r**2

    @property
    def diameter(self) -> float:
        return math.pi * self.r


@dataclass(frozen=True)
class FlatTorusUnit:
    """Unit-square flat torus; diameter 1/sqrt(2), injectivity radius 1/2."""

    @property
    def total_mass(self) -> float:
        return 1.0

    @property
    def diameter(self) -> float:
        return 1.0 / math.sqrt(2.0)

    @property
    def injectivity_radius(self) -> float:
        return 0.5


@dataclass(frozen=True)
class Interval:
    """Closed interval [a, b] with Lebesgue or boundary-weight measure.

    The weight measure is (delta_a + delta_b + Lebesgue) / 2, total 1 + L/2.
    """

    a: float = 0.0
    b: float = 1.0
    measure: str = "lebesgue"  # "lebesgue" | "weight"

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError("interval needs b > a")
        if self.measure not in ("lebesgue", "weight"):
            raise ValueError(f"unknown interval measure {self.measure!r}")

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def atoms(self) -> tuple[tuple[float, float], ...]:
        if self.measure == "weight":
            return ((self.a, 0.5), (self.b, 0.5))
        return ()

    @property
    def continuous_density(self) -> float:
        """Constant density of the continuous part on (a, b)."""
        return 0.5 if self.measure == "weight" else 1.0

    @property
    def total_mass(self) -> float:
        return self.continuous_density * self.length + sum(m for _, m in self.atoms)


@dataclass(frozen=True)
class LineGaussian:
    """Real line with weight measure exp(-x^2); total mass sqrt(pi)."""

    @property
    def total_mass(self) -> float:
        return math.sqrt(math.pi)


@dataclass(frozen=True)
class LineLaplace:
    """Real line with weight measure exp(-|x|); total mass 2."""

    @property
    def total_mass(self) -> float:
        return 2.0


AnalyticSpace = Circle | Sphere2 | FlatTorusUnit | Interval | LineGaussian | LineLaplace


# ---------------------------------------------------------------------------
# magnitude series container
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesTerm:
    order: int
    value: float
    std_error: float
    method: str  # "exact" | "quadrature" | "montecarlo"


@dataclass(frozen=True)
class MagnitudeSeries:
    """Per-order chain-integral terms a_n and the alternating partial sums.

    partial_sums[N] = total_mass + sum_{n=1}^{N} (-1)^n a_n.
    """

    t: float
    total_mass: float
    terms: tuple[SeriesTerm, ...]
    tail_bound: float | None = None
    partial_sums: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        sums = [self.total_mass]
        for term in self.terms:
            sums.append(sums[-1] + (-1) ** term.order * term.value)
        object.__setattr__(self, "partial_sums", tuple(sums))

    @property
    def order(self) -> int:
        return len(self.terms)

    def partial_sum_errors(self) -> tuple[float, ...]:
        """Std error of each partial sum, combining terms in quadrature."""
        out = [0.0]
        acc = 0.0
        for term in self.terms:
            acc += term.std_error**2
            out.append(math.sqrt(acc))
        return tuple(out)


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def load_distance_csv(path) -> FiniteMetricSpace:
    """Read an n x n distance matrix from CSV, optional first header row."""
    with open(path) as fh:
        rows = [line.strip() for line in fh if line.strip()]
    if not rows:
        raise MetricValidationError(f"empty distance file {path}")
    labels = None
    first = rows[0].split(",")
    try:
        [float(x) for x in first]
    except ValueError:
        labels = [x.strip() for x in first]
        rows = rows[1:]
    data = [[float(x) for x in row.split(",")] for row in rows]
    d = np.array(data, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise MetricValidationError(f"distance file {path} is not square: shape {d.shape}")
    if labels is not None and len(labels) != d.shape[0]:
        raise MetricValidationError(f"{len(labels)} labels for {d.shape[0]} rows in {path}")
    return FiniteMetricSpace.from_matrix(d, labels)


def load_edge_list(path) -> GeodesicGraph:
    """Read an edge list: 'u v' or 'u v length' per line, '#' comments."""
    edges = []
    maxv = 0
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise MetricValidationError(f"bad edge line {line!r} in {path}")
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
            edges.append((u, v, w))
            maxv = max(maxv, u, v)
    if not edges:
        raise MetricValidationError(f"no edges in {path}")
    return GeodesicGraph(maxv + 1, tuple(edges))
