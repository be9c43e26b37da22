"""k-means quantization in diffusion space and coarse-grained chains."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.spatial.distance import cdist

from .diffusion import DiffusionEmbedding
from .errors import ParameterError
from .markov import MarkovModel, m_step

__all__ = [
    "Quantization",
    "CoarseChain",
    "kmeans_diffusion",
    "coarse_chain",
    "spectral_fidelity",
    "WORDS_PRESET",
]

# Settings of the document-word example: SNR cut-off 2 gave eps = 150,
# then m = 3 steps, q = 12 coordinates and k = 100 meta-words.
WORDS_PRESET = {"snr_threshold": 2.0, "epsilon": 150.0, "m": 3, "q": 12, "k": 100}


@dataclass(frozen=True)
class Quantization:
    centers: np.ndarray
    assignment: np.ndarray
    k: int
    representatives: np.ndarray
    distortion: float
    history: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class CoarseChain:
    transition: np.ndarray
    masses: np.ndarray
    m: int


def _plusplus(x, k, rng):
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    d2 = np.sum((x - centers[0]) ** 2, axis=1)
    for c in range(1, k):
        total = d2.sum()
        idx = rng.choice(n, p=d2 / total) if total > 0 else rng.integers(n)
        centers[c] = x[idx]
        d2 = np.minimum(d2, np.sum((x - centers[c]) ** 2, axis=1))
    return centers


def _lloyd(x, centers, max_iter, tol):
    history = []
    k = centers.shape[0]
    for _ in range(max_iter):
        d2 = cdist(x, centers, "sqeuclidean")
        labels = d2.argmin(axis=1)
        own = d2[np.arange(x.shape[0]), labels]
        # empty cluster: move its center onto the point farthest from its own center
        for c in range(k):
            if not np.any(labels == c):
                far = int(own.argmax())
                centers[c] = x[far]
                labels[far] = c
                own[far] = 0.0
        history.append(float(own.mean()))
        new = np.array([x[labels == c].mean(axis=0) for c in range(k)])
        shift = np.max(np.abs(new - centers))
        centers = new
        if shift <= tol:
            break
    d2 = cdist(x, centers, "sqeuclidean")
    labels = d2.argmin(axis=1)
    history.append(float(d2[np.arange(x.shape[0]), labels].mean()))
    return centers, labels, history


def kmeans_diffusion(embedding, k: int, seed: int = 0, restarts: int = 10,
                     max_iter: int = 300, tol: float = 0.0) -> Quantization:
    """Best-of-``restarts`` k-means (k-means++ seeding) on diffusion coordinates.

    ``embedding`` is a :class:`DiffusionEmbedding` or an (n, q) array. The
    reported distortion is the mean squared distance to the assigned center.
    """
    x = np.asarray(embedding.coords if isinstance(embedding, DiffusionEmbedding)
                   else embedding, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[0]
    if not 1 <= k <= n:
        raise ParameterError(f"need 1 <= k <= n = {n}, got k={k}")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(max(1, restarts)):
        centers, labels, history = _lloyd(x, _plusplus(x, k, rng), max_iter, tol)
        if len(np.unique(labels)) < k:
            continue
        if best is None or history[-1] < best[2][-1]:
            best = (centers, labels, history)
    if best is None:
        raise ParameterError(f"could not form {k} nonempty clusters (duplicate points?)")
    centers, labels, history = best
    reps = np.empty(k, dtype=int)
    for c in range(k):
        members = np.flatnonzero(labels == c)
        reps[c] = members[np.argmin(np.sum((x[members] - centers[c]) ** 2, axis=1))]
    return Quantization(centers, labels, k, reps, history[-1], tuple(history))


def coarse_chain(model: MarkovModel, quant: Quantization, m: int = 1) -> CoarseChain:
    """Aggregate the ``m``-step chain over the clusters of ``quant``.

    ``T[c, c'] = sum_{i in c, j in c'} s_i A^m[i, j] / sum_{i in c} s_i``.
    """
    labels = np.asarray(quant.assignment)
    if labels.shape[0] != model.n:
        raise ParameterError("quantization does not match the model")
    member = np.zeros((model.n, quant.k))
    member[np.arange(model.n), labels] = 1.0
    s = model.stationary
    masses = member.T @ s
    flow = member.T @ (s[:, None] * m_step(model, m)) @ member
    return CoarseChain(flow / masses[:, None], masses, int(m))


def _reversible_eigenvalues(transition, weights, count):
    root = np.sqrt(weights)
    sym = root[:, None] * transition / root[None, :]
    sym = 0.5 * (sym + sym.T)
    n = sym.shape[0]
    vals = scipy.linalg.eigh(sym, eigvals_only=True, subset_by_index=[n - count, n - 1])
    return vals[::-1]


def spectral_fidelity(model: MarkovModel, coarse: CoarseChain, j: int) -> np.ndarray:
    """Relative gaps ``|mu_l - lambda_l^m| / lambda_l^m`` for l = 1..j.

    ``mu_l`` are the coarse-chain eigenvalues, ``lambda_l`` the fine ones.
    """
    k = coarse.transition.shape[0]
    if not 1 <= j <= k - 1:
        raise ParameterError(f"need 1 <= j <= k - 1 = {k - 1}")
    fine = _reversible_eigenvalues(model.transition, model.stationary, j + 1)[1:]
    fine = fine ** coarse.m
    mu = _reversible_eigenvalues(coarse.transition, coarse.masses, j + 1)[1:]
    return np.abs(mu - fine) / np.abs(fine)
