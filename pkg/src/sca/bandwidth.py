"""Bandwidth selection: bootstrap SNR, neighborhood size, MST longest edge."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.sparse.csgraph import minimum_spanning_tree
from scipy.spatial.distance import pdist, squareform

from .eigen import decompose
from .errors import ParameterError
from .kernelgraph import build_kernel, neighbor_counts
from .markov import build_markov
from .nystrom import extend
from .pointcloud import PointCloud

__all__ = [
    "SnrCurve",
    "snr_from_replicates",
    "bootstrap_replicates",
    "bootstrap_snr",
    "bootstrap_snr_nodal",
    "theoretical_threshold",
    "neighborhood_rule",
    "MstResult",
    "mst_rule",
]


@dataclass(frozen=True)
class SnrCurve:
    """Estimated SNR over a bandwidth grid and the resulting selection.

    ``snr`` may contain ``inf`` for zero-variance replicates; ``selected`` is
    the smallest grid value whose SNR reaches ``threshold`` (or ``None``).
    """

    epsilons: np.ndarray
    snr: np.ndarray
    B: int
    ell: int
    threshold: float
    selected: float | None
    kind: str = "eigenvector"
    seed: int = 0
    flags: tuple = field(default_factory=tuple)

    def summary(self) -> dict:
        return {
            "epsilon": self.selected,
            "rule": "snr" if self.kind == "eigenvector" else "snr-nodal",
            "threshold": self.threshold,
            "B": self.B,
            "seed": self.seed,
            "ell": self.ell,
        }


def theoretical_threshold(n: int, d: int, C: float) -> float:
    """Threshold ``C n^(2/(d+8))`` matching the optimal bandwidth rate."""
    return C * n ** (2.0 / (d + 8))


def snr_from_replicates(replicates, weights) -> float:
    """Bias-corrected SNR of a stack of replicate functions.

    Parameters
    ----------
    replicates : (B, n) array
    weights : (n,) array
        Quadrature weights defining the squared norm ``sum_i w_i f_i^2``.

    Returns ``sqrt((|mean|^2 - xi^2)_+ / xi^2)`` where ``xi^2`` is the mean
    squared deviation of the replicates from their mean; ``inf`` when the
    replicates coincide and the mean is nonzero.
    """
    reps = np.asarray(replicates, dtype=float)
    w = np.asarray(weights, dtype=float)
    if reps.ndim != 2 or reps.shape[0] < 2:
        raise ParameterError("need at least two replicates")
    mean = reps.mean(axis=0)
    signal = float(w @ mean**2)
    xi2 = float(np.mean((reps - mean) ** 2 @ w))
    if xi2 == 0.0:
        return math.inf if signal > 0 else 0.0
    return math.sqrt(max(signal - xi2, 0.0) / xi2)


def _align(reps, weights):
    ref = reps[0]
    signs = np.where((reps * ref) @ weights < 0, -1.0, 1.0)
    return reps * signs[:, None]


def bootstrap_replicates(cloud: PointCloud, ell: int, epsilon: float, B: int,
                         seed, weights=None) -> tuple[np.ndarray, list]:
    """``B`` bootstrap estimates of ``psi_ell`` evaluated at the original points.

    Each replicate refits on a size-n resample drawn with replacement and is
    extended back to ``cloud`` by Nystrom, then sign-aligned to the first
    replicate under ``weights`` (default: the stationary distribution of the
    full sample). ``seed`` may be an int or a sequence for ``SeedSequence``.
    Returns the (B, n) replicate array and a list of warning messages.
    """
    if B < 2:
        raise ParameterError("B must be >= 2")
    if weights is None:
        weights = build_markov(build_kernel(cloud, epsilon)).stationary
    base = list(np.atleast_1d(seed))
    reps = np.empty((B, cloud.n))
    notes = []
    for b in range(B):
        rng = np.random.default_rng(base + [b])
        idx = rng.integers(0, cloud.n, size=cloud.n)
        boot = cloud.subset(idx)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            dec = decompose(build_markov(build_kernel(boot, epsilon)), ell)
        if dec.degenerate[ell]:
            notes.append(f"eps={epsilon:g} replicate {b}: degenerate eigenvalue at {ell}")
        notes.extend(str(w.message) for w in caught
                     if "near-degenerate" not in str(w.message))
        reps[b] = extend(boot, dec, [ell], cloud.points)[:, 0]
    return _align(reps, weights), notes


def _snr_curve(cloud, ell, grid, B, threshold, seed, nodal):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ParameterError("grid must be a nonempty list of bandwidths")
    if np.any(np.diff(grid) <= 0):
        raise ParameterError("grid must be strictly increasing")
    if ell < 0:
        raise ParameterError("ell must be >= 0")
    if ell + 1 > cloud.n:
        raise ParameterError("ell exceeds the number of points")
    snr = np.empty(grid.size)
    flags = []
    for e, eps in enumerate(grid):
        weights = build_markov(build_kernel(cloud, eps)).stationary
        reps, notes = bootstrap_replicates(cloud, ell, eps, B, [seed, e], weights)
        if nodal:
            reps = np.sign(reps)
        snr[e] = snr_from_replicates(reps, weights)
        if notes:
            flags.append((float(eps), len(notes), notes[0]))
    hit = np.flatnonzero(snr >= threshold)
    selected = float(grid[hit[0]]) if hit.size else None
    snr.setflags(write=False)
    return SnrCurve(grid, snr, B, ell, float(threshold), selected,
                    "nodal" if nodal else "eigenvector", seed, tuple(flags))


def bootstrap_snr(cloud: PointCloud, ell: int, grid, B: int = 50,
                  threshold: float = 5.0, seed: int = 0) -> SnrCurve:
    """Bootstrap SNR of eigenvector ``ell`` across ``grid``.

    Replicate RNG streams derive from ``(seed, grid index, replicate)``.
    """
    return _snr_curve(cloud, ell, grid, B, threshold, seed, nodal=False)


def bootstrap_snr_nodal(cloud: PointCloud, ell: int, grid, B: int = 50,
                        threshold: float = 5.0, seed: int = 0) -> SnrCurve:
    """As :func:`bootstrap_snr` but on the sign pattern of the eigenvector."""
    return _snr_curve(cloud, ell, grid, B, threshold, seed, nodal=True)


def neighborhood_rule(cloud: PointCloud, grid, k: float) -> float | None:
    """Smallest grid bandwidth whose median neighbor count reaches ``k``."""
    if k < 1:
        raise ParameterError("target median k must be >= 1")
    for eps in sorted(float(g) for g in grid):
        if neighbor_counts(cloud, eps)[1] >= k:
            return eps
    return None


class MstResult(NamedTuple):
    longest_edge: float
    epsilon: float


def mst_rule(cloud: PointCloud) -> MstResult:
    """Longest Euclidean MST edge ``L`` and the bandwidth ``L**2 / 2``."""
    if cloud.n < 2:
        raise ParameterError("MST rule needs at least two points")
    dist = squareform(pdist(cloud.points))
    off = ~np.eye(cloud.n, dtype=bool)
    # dense csgraph input treats 0 as "no edge"; keep coincident points joined
    dist[off & (dist == 0)] = np.finfo(float).tiny
    tree = minimum_spanning_tree(dist)
    longest = float(tree.data.max()) if tree.nnz else 0.0
    if longest <= np.finfo(float).tiny:
        longest = 0.0
    return MstResult(longest, longest**2 / 2.0)
