"""Quadrature ground truth for one-dimensional densities.

The continuous averaging operator
``A f(x) = int k(x, y) f(y) p(y) dy / int k(x, y) p(y) dy`` is discretized on
a uniform grid with weights ``w_j = p(x_j) dx`` (renormalized to one). The
discretized operator is exactly the random walk on the kernel graph with
weights ``w_i k(x_i, x_j) w_j``, so the Markov and eigen machinery used for
samples applies unchanged and the eigenfunctions carry the same weighted
normalization and sign convention.
"""
from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import ndtr

from .diffusion import scaled_eigenvalues
from .eigen import SpectralDecomposition, decompose
from .errors import ParameterError
from .kernelgraph import KernelGraph, build_kernel, heat_kernel
from .markov import MarkovModel, build_markov
from .nystrom import extend
from .pointcloud import GeneratorSpec, PointCloud, generate

__all__ = [
    "GaussianMixtureDensity",
    "UniformSegmentsDensity",
    "TWO_GAUSSIANS",
    "THREE_GAUSSIANS",
    "QuadratureModel",
    "quadrature_operator",
    "reference_eigenfunctions",
    "cached_reference",
    "interpolate",
    "evolve_density",
    "total_variation",
    "ReferenceSemigroup",
    "EmpiricalSemigroup",
    "default_dictionary",
    "LossEstimate",
    "estimate_loss",
    "weighted_error",
    "eigenvector_error_curve",
    "EPS_REF",
    "G_REF",
]

EPS_REF = 1e-3
G_REF = 4096


@dataclass(frozen=True)
class GaussianMixtureDensity:
    means: tuple
    sds: tuple
    weights: tuple

    def __post_init__(self):
        for name in ("means", "sds", "weights"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        if not len(self.means) == len(self.sds) == len(self.weights):
            raise ParameterError("means, sds and weights must have equal length")
        if any(s <= 0 for s in self.sds):
            raise ParameterError("standard deviations must be positive")
        if abs(sum(self.weights) - 1) > 1e-9 or any(w < 0 for w in self.weights):
            raise ParameterError("weights must be nonnegative and sum to 1")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for mu, sd, w in zip(self.means, self.sds, self.weights):
            out += w * np.exp(-0.5 * ((x - mu) / sd) ** 2) / (sd * math.sqrt(2 * math.pi))
        return out

    def cdf(self, x):
        return sum(w * ndtr((x - mu) / sd)
                   for mu, sd, w in zip(self.means, self.sds, self.weights))

    def span(self, epsilon):
        lo = min(mu - 6 * sd for mu, sd in zip(self.means, self.sds))
        hi = max(mu + 6 * sd for mu, sd in zip(self.means, self.sds))
        return lo, hi

    def generator(self, seed=0) -> GeneratorSpec:
        return GeneratorSpec("gaussian_mixture", {"means": list(self.means),
                                                  "sds": list(self.sds),
                                                  "weights": list(self.weights)}, seed)


@dataclass(frozen=True)
class UniformSegmentsDensity:
    """Mixture of uniform densities on disjoint intervals ``(a, b)``."""

    segments: tuple
    weights: tuple | None = None

    def __post_init__(self):
        segs = tuple((float(a), float(b)) for a, b in self.segments)
        if any(b <= a for a, b in segs):
            raise ParameterError("segments need a < b")
        w = self.weights
        if w is None:
            lengths = [b - a for a, b in segs]
            w = tuple(l / sum(lengths) for l in lengths)
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "weights", tuple(float(v) for v in w))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for (a, b), w in zip(self.segments, self.weights):
            out += np.where((x >= a) & (x <= b), w / (b - a), 0.0)
        return out

    def cdf(self, x):
        return sum(w * np.clip((x - a) / (b - a), 0, 1)
                   for (a, b), w in zip(self.segments, self.weights))

    def span(self, epsilon):
        return min(a for a, _ in self.segments), max(b for _, b in self.segments)


TWO_GAUSSIANS = GaussianMixtureDensity((-2.0, 2.0), (1.0, 1.0), (0.5, 0.5))
# two nearby clusters and a farther one: started at 0 the walk is bimodal by
# t = 1, trimodal by t = 10 and within TV 1e-3 of p^2 / int p^2 by t = 1000
THREE_GAUSSIANS = GaussianMixtureDensity((0.0, 2.0, 5.0), (0.5, 0.5, 0.7), (0.3, 0.3, 0.4))


@dataclass(frozen=True, eq=False)
class QuadratureModel:
    grid: np.ndarray
    weights: np.ndarray
    density: object
    epsilon: float
    chain: MarkovModel
    outside_mass: float = 0.0

    @property
    def operator(self) -> np.ndarray:
        return self.chain.transition

    @property
    def spacing(self) -> float:
        return float(self.grid[1] - self.grid[0])


def _grid(density, epsilon, G):
    if isinstance(density, UniformSegmentsDensity):
        # cell midpoints restricted to the support; zero-weight nodes would have
        # zero stationary mass
        lo, hi = density.span(epsilon)
        x = lo + (np.arange(G) + 0.5) * (hi - lo) / G
        keep = density.pdf(x) > 0
        return x[keep]
    lo, hi = density.span(epsilon)
    return np.linspace(lo, hi, G)


def quadrature_operator(density, epsilon: float, G: int = 1024) -> QuadratureModel:
    """Discretize the averaging operator of ``density`` on ``G`` grid points."""
    if G < 100:
        raise ParameterError("grid size G must be >= 100")
    if not epsilon > 0:
        raise ParameterError("epsilon must be positive")
    x = _grid(density, epsilon, G)
    lo, hi = density.span(epsilon)
    outside = float(density.cdf(lo) + 1.0 - density.cdf(hi))
    if outside > 1e-6:
        warnings.warn(f"quadrature grid leaves mass {outside:.3g} outside",
                      RuntimeWarning, stacklevel=2)
    w = density.pdf(x)
    w = w / w.sum()
    k = heat_kernel(x[:, None], x[:, None], epsilon, normalized=False)
    weighted = w[:, None] * k * w[None, :]
    weighted = 0.5 * (weighted + weighted.T)
    weighted.setflags(write=False)
    graph = KernelGraph(weighted, weighted.sum(axis=1), float(epsilon), 1, False, "quadrature")
    return QuadratureModel(x, w, density, float(epsilon), build_markov(graph), outside)


def reference_eigenfunctions(model: QuadratureModel, q: int) -> SpectralDecomposition:
    """Top ``q + 1`` eigenpairs of the quadrature operator on its grid."""
    if q + 1 > model.grid.size:
        raise ParameterError("q + 1 exceeds the grid size")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return decompose(model.chain, q)


@functools.lru_cache(maxsize=8)
def cached_reference(density, epsilon: float = EPS_REF, G: int = G_REF, q: int = 20):
    """Memoized ``(model, decomposition)`` pair for a density."""
    model = quadrature_operator(density, epsilon, G)
    return model, reference_eigenfunctions(model, q)


def interpolate(model: QuadratureModel, values, x):
    """Linear interpolation of grid function(s) ``values`` at points ``x``."""
    x = np.asarray(x, dtype=float).ravel()
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        return np.interp(x, model.grid, values)
    return np.column_stack([np.interp(x, model.grid, v) for v in values.T])


@functools.lru_cache(maxsize=4)
def _full_decomposition(model):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return decompose(model.chain, model.grid.size - 1)


def evolve_density(model: QuadratureModel, t: float, x0: int, max_direct: int = 2000):
    """Transition density after time ``t`` (``round(t/eps)`` steps) from node ``x0``.

    Returns values per unit length on the grid; multiply by the spacing for
    probabilities. Up to ``max_direct`` steps are taken explicitly, larger
    step counts use the full eigendecomposition.
    """
    if t < 0:
        raise ParameterError("time t must be >= 0")
    m = int(round(t / model.epsilon))
    g = model.grid.size
    if m <= max_direct:
        row = np.zeros(g)
        row[x0] = 1.0
        a = model.operator
        for _ in range(m):
            row = row @ a
    else:
        dec = _full_decomposition(model)
        lam = scaled_eigenvalues(dec.eigenvalues, m)
        row = (lam * dec.psi[x0]) @ dec.phi.T
    return row / model.spacing


def total_variation(p, q) -> float:
    """Half the L1 distance between two probability vectors."""
    return 0.5 * float(np.sum(np.abs(np.asarray(p) - np.asarray(q))))


class ReferenceSemigroup:
    """``f -> sum_l lambda_l^(t/eps) <psi_l, f> psi_l`` on the quadrature grid."""

    def __init__(self, model: QuadratureModel, dec: SpectralDecomposition,
                 q: int | None = None):
        self.model, self.dec = model, dec
        self.q = dec.q if q is None else int(q)

    def apply(self, f, t):
        psi = self.dec.psi[:, :self.q + 1]
        coef = psi.T @ (self.dec.stationary * f)
        lam = scaled_eigenvalues(self.dec.eigenvalues[:self.q + 1], t / self.dec.epsilon)
        return psi @ (lam * coef)


class EmpiricalSemigroup:
    """Sample-based truncated semigroup, evaluated on a quadrature grid.

    Inner products use the sample's stationary weights with ``f`` read off
    the grid at the sample points; eigenvectors reach the grid by Nystrom.
    """

    def __init__(self, model: QuadratureModel, cloud: PointCloud,
                 dec: SpectralDecomposition, q: int):
        self.model, self.cloud, self.dec, self.q = model, cloud, dec, int(q)
        ells = np.arange(self.q + 1)
        self._grid_psi = extend(cloud, dec, ells, model.grid[:, None])

    def apply(self, f, t):
        f_samples = interpolate(self.model, f, self.cloud.points[:, 0])
        psi = self.dec.psi[:, :self.q + 1]
        coef = psi.T @ (self.dec.stationary * f_samples)
        lam = scaled_eigenvalues(self.dec.eigenvalues[:self.q + 1], t / self.dec.epsilon)
        return self._grid_psi @ (lam * coef)


def default_dictionary(model: QuadratureModel, dec: SpectralDecomposition,
                       n_eigen: int = 20) -> np.ndarray:
    """First ``n_eigen`` reference eigenfunctions plus polynomials of degree <= 3.

    Returns a (G, n_funcs) array; the polynomials use the grid rescaled to [-1, 1].
    """
    x = model.grid
    u = 2 * (x - x[0]) / (x[-1] - x[0]) - 1
    polys = np.column_stack([u**p for p in range(4)])
    return np.column_stack([dec.psi[:, :min(n_eigen, dec.q + 1)], polys])


class LossEstimate(NamedTuple):
    value: float
    argmax: int
    lower_bound: bool


def estimate_loss(reference, estimate, t: float, dictionary, weights) -> LossEstimate:
    """Max over a test-function dictionary of ``|(ref - est) f| / |f|``.

    Norms are weighted by ``weights`` on the grid. The result is a lower
    bound on the operator-norm distance, not the norm itself.
    """
    dictionary = np.asarray(dictionary, dtype=float)
    if dictionary.ndim != 2 or dictionary.shape[1] == 0:
        raise ParameterError("dictionary must hold at least one test function")
    w = np.asarray(weights, dtype=float)
    ratios = []
    for col in dictionary.T:
        norm = math.sqrt(float(w @ col**2))
        if norm == 0:
            ratios.append(0.0)
            continue
        diff = reference.apply(col, t) - estimate.apply(col, t)
        ratios.append(math.sqrt(float(w @ diff**2)) / norm)
    best = int(np.argmax(ratios))
    return LossEstimate(float(ratios[best]), best, True)


def weighted_error(estimate, truth, weights) -> float:
    """``min_sign sqrt(sum_i w_i (sign * estimate_i - truth_i)^2)``."""
    w = np.asarray(weights, dtype=float)
    e = np.asarray(estimate, dtype=float)
    t = np.asarray(truth, dtype=float)
    return math.sqrt(min(float(w @ (e - t) ** 2), float(w @ (e + t) ** 2)))


def eigenvector_error_curve(density, epsilons, n: int, seeds, ell: int = 1,
                            eps_ref: float = EPS_REF, G: int = G_REF) -> np.ndarray:
    """Error of the sample eigenvector ``psi_ell`` against the quadrature reference.

    For each seed and bandwidth: sample ``n`` points, fit, and measure the
    stationary-weighted distance to the reference eigenfunction read off at
    the samples, after the better global sign. Returns (len(seeds), len(eps)).
    """
    model, ref = cached_reference(density, eps_ref, G, max(ell, 4))
    out = np.empty((len(seeds), len(epsilons)))
    for a, seed in enumerate(seeds):
        cloud = generate(density.generator(seed), n)
        truth = interpolate(model, ref.psi[:, ell], cloud.points[:, 0])
        for b, eps in enumerate(epsilons):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                dec = decompose(build_markov(build_kernel(cloud, eps)), ell)
            out[a, b] = weighted_error(dec.psi[:, ell], truth, dec.stationary)
    return out
