"""Monte-Carlo estimation of chain integrals over analytic spaces.

The order-n term is a_n(t) = integral over X^{n+1} of exp(-t * total chain
length) times the proper-chain indicator.  We sample from the normalized
measure and multiply by mu(X)^{n+1}.  The indicator only matters for measures
with atoms (interval weight measure); atom identity is tracked by integer
tags, never by float comparison.

Determinism contract: a fixed batch size, one random stream per (order,
batch index) derived from the master seed, and reduction in batch order.
Estimates are bit-identical for a given seed regardless of worker count.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from . import closed_forms
from .spaces import (AnalyticSpace, Circle, FlatTorusUnit, Interval,
                     LineGaussian, LineLaplace, MagnitudeSeries, SeriesTerm,
                     Sphere2)

BATCH_SIZE = 1 << 18


def worker_count() -> int:
    """Worker cap from MAGNILAB_THREADS (0 or unset = auto)."""
    raw = os.environ.get("MAGNILAB_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class SamplerSpec:
    """What to sample: space, master seed, sample count, measure scaling.

    mass_scale rescales the measure by a constant (the sampled distribution
    is unchanged; every factor of mu(X) in the estimator picks it up).
    """

    space: AnalyticSpace
    seed: int = 0
    samples: int = 1_000_000
    mass_scale: float = 1.0

    @property
    def total_mass(self) -> float:
        return self.mass_scale * self.space.total_mass


@dataclass(frozen=True)
class TermEstimate:
    n: int
    value: float
    std_error: float
    proper_fraction: float


@dataclass(frozen=True)
class Batch:
    """A batch of sampled points: coordinates plus atom tags (0 = diffuse)."""

    coords: np.ndarray
    tags: np.ndarray | None = None


def _stream(spec: SamplerSpec, order: int, batch: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=spec.seed, spawn_key=(order, batch))
    return np.random.Generator(np.random.PCG64(ss))


def sample_batch(spec: SamplerSpec, rng: np.random.Generator, m: int) -> Batch:
    """Draw m points from the normalized measure of the space."""
    sp = spec.space
    if isinstance(sp, Circle):
        return Batch(rng.uniform(0.0, 2.0 * math.pi, size=m))
    if isinstance(sp, Sphere2):
        z = rng.uniform(-1.0, 1.0, size=m)
        phi = rng.uniform(0.0, 2.0 * math.pi, size=m)
        s = np.sqrt(1.0 - z * z)
        return Batch(np.column_stack([s * np.cos(phi), s * np.sin(phi), z]))
    if isinstance(sp, FlatTorusUnit):
        return Batch(rng.uniform(0.0, 1.0, size=(m, 2)))
    if isinstance(sp, Interval):
        if sp.measure == "lebesgue":
            return Batch(rng.uniform(sp.a, sp.b, size=m))
        # atoms a, b each carry probability (1/2)/(1 + L/2)
        p_atom = 0.5 / sp.total_mass
        u = rng.uniform(0.0, 1.0, size=m)
        x = rng.uniform(sp.a, sp.b, size=m)
        tags = np.zeros(m, dtype=np.int8)
        tags[u < p_atom] = 1
        tags[(u >= p_atom) & (u < 2 * p_atom)] = 2
        x[tags == 1] = sp.a
        x[tags == 2] = sp.b
        return Batch(x, tags)
    if isinstance(sp, LineGaussian):
        # density proportional to exp(-x^2) -> normal with sigma = 1/sqrt(2)
        return Batch(rng.normal(0.0, 1.0 / math.sqrt(2.0), size=m))
    if isinstance(sp, LineLaplace):
        return Batch(rng.laplace(0.0, 1.0, size=m))
    raise TypeError(f"no sampler for {type(sp).__name__}")


def geodesic_distance(space: AnalyticSpace, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Vectorized intrinsic distance between sampled point arrays."""
    if isinstance(space, Circle):
        delta = np.abs(p - q)
        return space.r * np.minimum(delta, 2.0 * math.pi - delta)
    if isinstance(space, Sphere2):
        cosang = np.clip(np.einsum("ij,ij->i", p, q), -1.0, 1.0)
        return space.r * np.arccos(cosang)
    if isinstance(space, FlatTorusUnit):
        delta = np.abs(p - q)
        delta = np.minimum(delta, 1.0 - delta)
        return np.sqrt((delta**2).sum(axis=1))
    if isinstance(space, (Interval, LineGaussian, LineLaplace)):
        return np.abs(p - q)
    raise TypeError(f"no metric for {type(space).__name__}")


def _chain_batch(spec: SamplerSpec, rng: np.random.Generator, n: int, m: int):
    """(total lengths, proper indicator) for m chains of order n."""
    chain = [sample_batch(spec, rng, m) for _ in range(n + 1)]
    total = np.zeros(m)
    proper = np.ones(m, dtype=bool)
    for a, b in zip(chain, chain[1:]):
        total += geodesic_distance(spec.space, a.coords, b.coords)
        if a.tags is not None:
            both = (a.tags > 0) & (a.tags == b.tags)
            proper &= ~both
    return total, proper


@dataclass(frozen=True)
class _BatchStat:
    count: int
    total: float
    total_sq: float
    proper: int


def _term_batches(spec: SamplerSpec, n: int, t: float):
    sizes = []
    left = spec.samples
    while left > 0:
        sizes.append(min(BATCH_SIZE, left))
        left -= sizes[-1]

    def work(item) -> _BatchStat:
        idx, m = item
        rng = _stream(spec, n, idx)
        total, proper = _chain_batch(spec, rng, n, m)
        vals = np.exp(-t * total) * proper
        return _BatchStat(m, float(vals.sum()), float((vals * vals).sum()), int(proper.sum()))

    items = list(enumerate(sizes))
    if len(items) > 1 and worker_count() > 1:
        with ThreadPoolExecutor(max_workers=worker_count()) as ex:
            stats = list(ex.map(work, items))  # map preserves batch order
    else:
        stats = [work(it) for it in items]
    return stats


def estimate_term(spec: SamplerSpec, n: int, t: float) -> TermEstimate:
    """Monte-Carlo estimate of a_n(t) with a standard error."""
    if n < 1:
        raise ValueError("n must be >= 1")
    stats = _term_batches(spec, n, t)
    count = sum(s.count for s in stats)
    mean = math.fsum(s.total for s in stats) / count
    sq = math.fsum(s.total_sq for s in stats) / count
    var = max(sq - mean * mean, 0.0)
    scale = spec.total_mass ** (n + 1)
    return TermEstimate(
        n=n,
        value=scale * mean,
        std_error=scale * math.sqrt(var / count),
        proper_fraction=sum(s.proper for s in stats) / count,
    )


def estimate_term_grid(spec: SamplerSpec, n: int, t_grid) -> list[TermEstimate]:
    """Estimates over a t grid with common random numbers (same chains).

    With shared chains the estimates are strictly decreasing in t whenever at
    least one sampled chain is proper.
    """
    sizes = []
    left = spec.samples
    while left > 0:
        sizes.append(min(BATCH_SIZE, left))
        left -= sizes[-1]
    t_grid = [float(t) for t in t_grid]
    sums = np.zeros(len(t_grid))
    sqs = np.zeros(len(t_grid))
    propers = 0
    count = 0
    for idx, m in enumerate(sizes):
        rng = _stream(spec, n, idx)
        total, proper = _chain_batch(spec, rng, n, m)
        for j, t in enumerate(t_grid):
            vals = np.exp(-t * total) * proper
            sums[j] += vals.sum()
            sqs[j] += (vals * vals).sum()
        propers += int(proper.sum())
        count += m
    scale = spec.total_mass ** (n + 1)
    out = []
    for j, t in enumerate(t_grid):
        mean = sums[j] / count
        var = max(sqs[j] / count - mean * mean, 0.0)
        out.append(TermEstimate(n, scale * mean, scale * math.sqrt(var / count), propers / count))
    return out


def leg_integral_bound(spec: SamplerSpec, t: float) -> float:
    """c(t) = sup_y int exp(-t*d(x,y)) dmu(x), including the mass scale.

    Closed forms for homogeneous spaces; for the rest, maximize over a
    basepoint grid with 1-D quadrature.
    """
    sp = spec.space
    s = spec.mass_scale
    if isinstance(sp, Circle):
        return s * closed_forms.circle_leg_integral(sp.r, t)
    if isinstance(sp, Sphere2):
        return s * closed_forms.sphere_leg_integral(sp.r, t)
    if isinstance(sp, FlatTorusUnit):
        return s * closed_forms.torus_first_term(t)
    if isinstance(sp, Interval):
        L = sp.length
        ys = np.linspace(0.0, L, 33)
        best = 0.0
        for y in ys:
            leb = (2.0 - math.exp(-t * y) - math.exp(-t * (L - y))) / t
            val = sp.continuous_density * leb
            for loc, mass in sp.atoms:
                val += mass * math.exp(-t * abs(loc - sp.a - y))
            best = max(best, val)
        return s * best
    if isinstance(sp, (LineGaussian, LineLaplace)):
        dens = (lambda x: math.exp(-x * x)) if isinstance(sp, LineGaussian) else (
            lambda x: math.exp(-abs(x)))
        best = 0.0
        for y in np.linspace(-3.0, 3.0, 25):
            val, _ = integrate.quad(
                lambda x: math.exp(-t * abs(x - y)) * dens(x), -40, 40,
                points=[y], limit=200,
            )
            best = max(best, val)
        return s * best
    raise TypeError(f"no leg-integral bound for {type(sp).__name__}")


def tail_bound(spec: SamplerSpec, t: float, N: int) -> float | None:
    """mu(X) * c^{N+1} / (1 - c) if c(t) < 1, else None ("no bound")."""
    c = leg_integral_bound(spec, t)
    if c >= 1.0:
        return None
    return spec.total_mass * c ** (N + 1) / (1.0 - c)


def estimate_partial_magnitude(spec: SamplerSpec, t: float, N: int) -> MagnitudeSeries:
    """mu(X) + sum (-1)^n a_n with independent streams per order."""
    terms = []
    for n in range(1, N + 1):
        est = estimate_term(spec, n, t)
        terms.append(SeriesTerm(order=n, value=est.value, std_error=est.std_error,
                                method="montecarlo"))
    return MagnitudeSeries(
        t=t,
        total_mass=spec.total_mass,
        terms=tuple(terms),
        tail_bound=tail_bound(spec, t, N),
    )


def estimate_length_density(spec: SamplerSpec, n: int, bins: int, l_max: float):
    """Histogram estimate of the order-n length-spectrum density.

    Returns (bin edges, density values) scaled so that summing density *
    bin width approximates mu(X)^{n+1} restricted to [0, l_max].
    """
    if bins < 2:
        raise ValueError("need at least 2 bins")
    edges = np.linspace(0.0, l_max, bins + 1)
    counts = np.zeros(bins)
    sizes = []
    left = spec.samples
    while left > 0:
        sizes.append(min(BATCH_SIZE, left))
        left -= sizes[-1]
    count = 0
    for idx, m in enumerate(sizes):
        rng = _stream(spec, n, idx)
        total, proper = _chain_batch(spec, rng, n, m)
        h, _ = np.histogram(total[proper], bins=edges)
        counts += h
        count += m
    width = edges[1] - edges[0]
    density = counts * spec.total_mass ** (n + 1) / (count * width)
    return edges, density


def with_seed(spec: SamplerSpec, seed: int) -> SamplerSpec:
    return replace(spec, seed=seed)
