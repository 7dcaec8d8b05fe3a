"""Magnitude of finite metric spaces with the counting measure.

The similarity matrix Z has entries exp(-t*d(x,y)); the magnitude is the sum
of the entries of Z^{-1}, obtained by solving Z v = 1 rather than inverting.
The Neumann route expands the same quantity as an alternating series over
proper chains, computed by matrix-vector powers of Y = Z - I.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import MetricValidationError, SingularMatrixError
from .spaces import FiniteMetricSpace, MagnitudeSeries, SeriesTerm

#: refuse linear solves beyond this 1-norm condition estimate
COND_LIMIT = 1e13


@dataclass(frozen=True)
class SimilarityMatrix:
    """entries[x, y] = exp(-t * d(x, y)); symmetric with unit diagonal."""

    entries: np.ndarray
    t: float

    @classmethod
    def from_space(cls, m: FiniteMetricSpace, t: float) -> "SimilarityMatrix":
        if t <= 0:
            raise ValueError("scale t must be positive")
        z = np.exp(-t * m.dist)
        z.setflags(write=False)
        return cls(z, t)

    def neumann_generator(self) -> np.ndarray:
        """Y = Z - I; zero diagonal, positive off-diagonal."""
        return self.entries - np.eye(self.entries.shape[0])


def _solve_ones(z: np.ndarray) -> np.ndarray:
    """Solve Z v = 1 by pivoted LU, guarding against near-singularity."""
    lu, piv = scipy.linalg.lu_factor(z)
    # reciprocal condition from the factorization's diagonal growth
    norm_z = np.linalg.norm(z, 1)
    diag = np.abs(np.diag(lu))
    if diag.min() == 0.0:
        raise SingularMatrixError(math.inf)
    cond = norm_z * (1.0 / diag.min())
    if cond > COND_LIMIT:
        raise SingularMatrixError(cond)
    return scipy.linalg.lu_solve((lu, piv), np.ones(z.shape[0]))


def weighting_vector(m: FiniteMetricSpace, t: float) -> np.ndarray:
    """The weighting v with Z v = 1; its sum is the magnitude."""
    return _solve_ones(SimilarityMatrix.from_space(m, t).entries)


def classical_magnitude(m: FiniteMetricSpace, t: float) -> float:
    """Sum of the entries of Z^{-1} at scale t."""
    return float(weighting_vector(m, t).sum())


def neumann_partial(m: FiniteMetricSpace, t: float, N: int) -> MagnitudeSeries:
    """Alternating partial sums |X| + sum_{n=1}^{N} (-1)^n 1^T Y^n 1.

    Each a_n is the sum over proper chains (x_0 != x_1 != ... != x_n) of
    exp(-t * sum of leg lengths).
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    y = SimilarityMatrix.from_space(m, t).neumann_generator()
    ones = np.ones(m.size)
    w = ones.copy()
    terms = []
    for n in range(1, N + 1):
        w = y @ w
        terms.append(SeriesTerm(order=n, value=float(ones @ w), std_error=0.0, method="exact"))
    return MagnitudeSeries(t=t, total_mass=float(m.size), terms=tuple(terms))


def convergence_threshold(m: FiniteMetricSpace) -> tuple[float, float]:
    """(exact threshold, crude bound) for Neumann-series convergence.

    Exact: minimal t* such that max_y sum_{x != y} exp(-t d(x,y)) < 1 for all
    t > t*, found by bisection to 1e-10.  Crude: log|X| / (min distance).
    """
    n = m.size
    if n < 2:
        raise MetricValidationError("convergence threshold undefined for a singleton")
    eps = m.min_positive_distance()
    crude = math.log(n) / eps

    def col_max(t: float) -> float:
        y = np.exp(-t * m.dist) - np.eye(n)
        return float(y.sum(axis=0).max())

    lo, hi = 0.0, crude
    while col_max(hi) >= 1.0:  # crude bound guarantees < 1 strictly above it
        hi *= 2.0
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if col_max(mid) < 1.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi), crude


def column_sum_ratio(m: FiniteMetricSpace, t: float) -> float:
    """max column sum of Y = Z - I; series tail is geometric in this ratio."""
    y = SimilarityMatrix.from_space(m, t).neumann_generator()
    return float(np.abs(y).sum(axis=0).max())


def shift_metric(m: FiniteMetricSpace, c: float) -> FiniteMetricSpace:
    """Increase every off-diagonal distance by c >= 0 (still a metric)."""
    if c < 0:
        raise ValueError("shift must be nonnegative")
    d = m.dist + c * (1.0 - np.eye(m.size))
    return FiniteMetricSpace(m.points, d)


def restrict(m: FiniteMetricSpace, indices) -> FiniteMetricSpace:
    """Subspace on the given point indices (order preserved)."""
    idx = list(indices)
    pts = tuple(m.points[i] for i in idx)
    return FiniteMetricSpace(pts, m.dist[np.ix_(idx, idx)])
