"""Partial magnitude under finitely-supported measures, and a minimal-energy
surrogate for equidistributed sphere configurations.

The empirical measure (1/m) sum of deltas over a configuration converges
weakly to the uniform probability measure when the points equidistribute;
its partial magnitude is an exact finite sum, so convergence of partial
magnitudes can be watched directly.  True energy-extremal (Fekete)
configurations are replaced by logarithmic-energy minimizers, which exhibit
the same weak convergence at the scales studied here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import closed_forms
from .spaces import (AnalyticSpace, FiniteMetricSpace, MagnitudeSeries,
                     SeriesTerm, Sphere2)


@dataclass(frozen=True)
class PointConfiguration:
    """Finite support with per-point masses (default: empirical, 1/m each)."""

    space: AnalyticSpace
    points: np.ndarray  # (m, 3) unit vectors for Sphere2
    weights: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if len(w) != len(pts):
            raise ValueError("one weight per point")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @classmethod
    def empirical(cls, space: AnalyticSpace, points) -> "PointConfiguration":
        pts = np.asarray(points, dtype=float)
        return cls(space, pts, np.full(len(pts), 1.0 / len(pts)))

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def distance_matrix(self) -> np.ndarray:
        if isinstance(self.space, Sphere2):
            dots = np.clip(self.points @ self.points.T, -1.0, 1.0)
            d = self.space.r * np.arccos(dots)
            np.fill_diagonal(d, 0.0)
            return d
        raise TypeError(f"no configuration metric for {type(self.space).__name__}")

    def metric_space(self) -> FiniteMetricSpace:
        return FiniteMetricSpace.from_matrix(self.distance_matrix())


def weighted_partial_magnitude(
    dist: np.ndarray, weights: np.ndarray, t: float, N: int
) -> MagnitudeSeries:
    """Exact chain sums for an arbitrary finitely-supported measure.

    a_n = sum over proper chains of w_{i_0} ... w_{i_n} e^{-t sum d};
    computed as w^T (Y W)^{n-1} Y w with Y = exp(-t d) - I and W = diag(w).
    """
    if t <= 0:
        raise ValueError("scale t must be positive")
    w = np.asarray(weights, dtype=float)
    y = np.exp(-t * dist) - np.eye(len(w))
    terms = []
    v = y @ w
    for n in range(1, N + 1):
        terms.append(SeriesTerm(order=n, value=float(w @ v), std_error=0.0, method="exact"))
        v = y @ (w * v)
    return MagnitudeSeries(t=t, total_mass=float(w.sum()), terms=tuple(terms))


def empirical_partial_magnitude(cfg: PointConfiguration, t: float, N: int) -> MagnitudeSeries:
    return weighted_partial_magnitude(cfg.distance_matrix(), cfg.weights, t, N)


# ---------------------------------------------------------------------------
# minimal-energy configurations on the 2-sphere
# ---------------------------------------------------------------------------

def _log_energy_and_grad(x: np.ndarray, m: int):
    """E = -sum_{i<j} log ||u_i - u_j|| for u_i = x_i/|x_i|, with gradient."""
    x = x.reshape(m, 3)
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    u = x / norms
    diff = u[:, None, :] - u[None, :, :]
    dist2 = (diff**2).sum(axis=2)
    np.fill_diagonal(dist2, 1.0)
    energy = -0.5 * np.log(dist2).sum() / 2.0  # each pair counted twice
    # dE/du_i = -sum_j (u_i - u_j)/||u_i - u_j||^2
    grad_u = -(diff / dist2[:, :, None]).sum(axis=1)
    # project through the normalization u = x/|x|
    grad_x = (grad_u - (grad_u * u).sum(axis=1, keepdims=True) * u) / norms
    return energy, grad_x.ravel()


def minimal_energy_configuration(
    m: int, seed: int, r: float = 1.0, maxiter: int = 2000
) -> PointConfiguration:
    """m points on Sphere2(r) minimizing pairwise logarithmic energy.

    Deterministic given the seed; uses an unconstrained parametrization in
    R^{3m} with the unit projection folded into the objective.
    """
    if m < 2:
        raise ValueError("need at least 2 points")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    x0 = rng.normal(size=(m, 3))
    x0 /= np.linalg.norm(x0, axis=1, keepdims=True)
    res = minimize(
        lambda x: _log_energy_and_grad(x, m),
        x0.ravel(),
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": maxiter, "ftol": 1e-14, "gtol": 1e-10},
    )
    u = res.x.reshape(m, 3)
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    return PointConfiguration.empirical(Sphere2(r), u)


def logarithmic_energy(points: np.ndarray) -> float:
    diff = points[:, None, :] - points[None, :, :]
    dist2 = (diff**2).sum(axis=2)
    iu = np.triu_indices(len(points), k=1)
    return float(-0.5 * np.log(dist2[iu]).sum())


# ---------------------------------------------------------------------------
# convergence experiment toward the uniform probability measure
# ---------------------------------------------------------------------------

def uniform_sphere_partial(r: float, t: float, N: int) -> float:
    """Target Mag(Sphere2(r), t d, uniform probability measure; N).

    Per-order terms are (J(t)/Vol)^n by homogeneity.
    """
    ratio = closed_forms.sphere_leg_integral(r, t) / (4.0 * math.pi * r**2)
    return sum((-ratio) ** n for n in range(N + 1))


@dataclass(frozen=True)
class FeketeRow:
    m: int
    N: int
    empirical: float
    target: float
    abs_dev: float


def fekete_constant(r: float) -> float:
    """The limit constant 2(1 + r^2)/(1 + e^{-pi r}) (weight mass over the
    uniform probability measure at unit scale)."""
    return 2.0 * (1.0 + r**2) / (1.0 + math.exp(-math.pi * r))


def fekete_convergence_experiment(
    r: float, m_list, N: int, seed: int, t: float = 1.0
) -> list[FeketeRow]:
    target = uniform_sphere_partial(r, t, N)
    rows = []
    for m in m_list:
        cfg = minimal_energy_configuration(m, seed=seed + m, r=r)
        val = empirical_partial_magnitude(cfg, t, N).partial_sums[N]
        rows.append(FeketeRow(m, N, val, target, abs(val - target)))
    return rows


def rescaling_identity_residual(cfg: PointConfiguration, N: int) -> float:
    """Max per-N gap between the empirical value and (1/m) times the
    counting-measure value under the metric shifted by log m (unit scale)."""
    m = cfg.size
    d = cfg.distance_matrix()
    c = math.log(m)
    shifted = d + c * (1.0 - np.eye(m))
    emp = weighted_partial_magnitude(d, np.full(m, 1.0 / m), 1.0, N)
    cnt = weighted_partial_magnitude(shifted, np.ones(m), 1.0, N)
    gaps = [abs(e - s / m) for e, s in zip(emp.partial_sums, cnt.partial_sums)]
    return max(gaps)
