"""Diffusion maps, diffusion distances and semigroup actions."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .eigen import SpectralDecomposition
from .errors import ParameterError
from .markov import MarkovModel, m_step

__all__ = [
    "DiffusionEmbedding",
    "embed",
    "scaled_eigenvalues",
    "diffusion_distance_spectral",
    "diffusion_distance_direct",
    "diffusion_distance_polarization",
    "pairwise_diffusion_distances",
    "apply_generator",
    "apply_A_t",
    "RhoDiagnostic",
    "rho_diagnostic",
]


@dataclass(frozen=True)
class DiffusionEmbedding:
    """Diffusion coordinates ``coords[:, l-1] = lambda_l**m * psi_l`` for l=1..q."""

    coords: np.ndarray
    m: float
    q: int
    epsilon: float
    eigenvalues: np.ndarray

    @property
    def n(self) -> int:
        return self.coords.shape[0]


def scaled_eigenvalues(eigenvalues, power):
    """``eigenvalues ** power`` with negative eigenvalues clamped to 0 when
    ``power`` is not an integer (they only arise from roundoff for a
    positive semi-definite kernel)."""
    lam = np.asarray(eigenvalues, dtype=float)
    power = float(power)
    if power != round(power) and np.any(lam < 0):
        warnings.warn("clamping negative eigenvalues for a fractional power",
                      RuntimeWarning, stacklevel=3)
        lam = np.maximum(lam, 0.0)
    return lam ** power


def _check_order(dec, q):
    if q is None:
        return dec.q
    q = int(q)
    if q < 0 or q > dec.q:
        raise ParameterError(f"order q={q} exceeds decomposition order {dec.q}")
    return q


def embed(dec: SpectralDecomposition, m: float, q: int) -> DiffusionEmbedding:
    """Diffusion map of the sample points at step ``m``, dimension ``q``."""
    if q < 1:
        raise ParameterError("embedding dimension q must be >= 1")
    q = _check_order(dec, q)
    if m < 0:
        raise ParameterError("step count m must be >= 0")
    lam = dec.eigenvalues[1:q + 1]
    coords = dec.psi[:, 1:q + 1] * scaled_eigenvalues(lam, m)[None, :]
    coords.setflags(write=False)
    return DiffusionEmbedding(coords, m, q, dec.epsilon, lam.copy())


def diffusion_distance_spectral(dec: SpectralDecomposition, m: float, i: int, j: int,
                                q: int | None = None) -> float:
    """``sqrt(sum_{l<=q} lambda_l^(2m) (psi_l(i) - psi_l(j))^2)``."""
    q = _check_order(dec, q)
    lam = scaled_eigenvalues(dec.eigenvalues[:q + 1], 2 * m)
    diff = dec.psi[i, :q + 1] - dec.psi[j, :q + 1]
    return float(np.sqrt(np.sum(lam * diff**2)))


def pairwise_diffusion_distances(dec: SpectralDecomposition, m: float,
                                 q: int | None = None) -> np.ndarray:
    """All-pairs spectral diffusion distances as an (n, n) array."""
    q = _check_order(dec, q)
    coords = dec.psi[:, 1:q + 1] * scaled_eigenvalues(dec.eigenvalues[1:q + 1], m)
    sq = np.sum(coords**2, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2 * coords @ coords.T
    np.fill_diagonal(d2, 0.0)
    return np.sqrt(np.maximum(d2, 0.0))


def _transition_rows(model, m, rows):
    m = int(m)
    if m < 0:
        raise ParameterError("step count m must be >= 0")
    if m > 64:
        return m_step(model, m)[rows]
    out = np.zeros((len(rows), model.n))
    out[np.arange(len(rows)), rows] = 1.0
    for _ in range(m):
        out = out @ model.transition
    return out


def diffusion_distance_direct(model: MarkovModel, m: int, i: int, j: int) -> float:
    """Weighted distance between rows ``i`` and ``j`` of the ``m``-step chain.

    ``D^2 = sum_k (A^m[i, k] - A^m[j, k])^2 / s_k``.
    """
    m = int(m)
    if m < 0:
        raise ParameterError("step count m must be >= 0")
    if m > 64:
        rows = m_step(model, m)[[i, j]]
        diff = rows[0] - rows[1]
    else:
        # propagate e_i - e_j itself; differencing two nearly equal rows at
        # the end loses digits when i and j are close
        diff = np.zeros(model.n)
        diff[i] += 1.0
        diff[j] -= 1.0
        for _ in range(m):
            diff = diff @ model.transition
    d2 = np.sum(diff**2 / model.stationary)
    return float(np.sqrt(max(d2, 0.0)))


def diffusion_distance_polarization(model: MarkovModel, m: int, i: int, j: int) -> float:
    """Squared diffusion distance from the ``2m``-step return probabilities."""
    a2 = _transition_rows(model, 2 * m, [i, j])
    s = model.stationary
    return float(a2[0, i] / s[i] + a2[1, j] / s[j] - a2[0, j] / s[j] - a2[1, i] / s[i])


def apply_generator(model: MarkovModel, f, epsilon: float | None = None) -> np.ndarray:
    """``(A f - f) / eps`` on the sample points."""
    eps = model.epsilon if epsilon is None else float(epsilon)
    f = np.asarray(f, dtype=float)
    if f.shape[0] != model.n or not np.all(np.isfinite(f)):
        raise ParameterError("f must be finite with one value per point")
    # difference form: exactly zero on constants, equal to A f - f for stochastic A
    a = model.transition
    return np.einsum("ij,ij->i", a, f[None, :] - f[:, None]) / eps


def apply_A_t(dec: SpectralDecomposition, t: float, f, q: int | None = None) -> np.ndarray:
    """Truncated semigroup ``sum_{l<=q} lambda_l^(t/eps) <psi_l, f>_s psi_l``."""
    if t < 0:
        raise ParameterError("time t must be >= 0")
    q = _check_order(dec, q)
    f = np.asarray(f, dtype=float)
    if f.shape[0] != dec.n:
        raise ParameterError("f must have one value per point")
    psi = dec.psi[:, :q + 1]
    coef = psi.T @ (dec.stationary[:, None] * f if f.ndim > 1 else dec.stationary * f)
    lam = scaled_eigenvalues(dec.eigenvalues[:q + 1], t / dec.epsilon)
    if f.ndim > 1:
        return psi @ (lam[:, None] * coef)
    return psi @ (lam * coef)


class RhoDiagnostic(NamedTuple):
    value: float
    truncated: bool


def rho_diagnostic(dec: SpectralDecomposition, t: float) -> RhoDiagnostic:
    """``sum_{l>=1} exp(-nu_l^2 t)`` over the available eigenpairs.

    ``truncated`` is set when the last retained term still exceeds 1e-3.
    """
    if not t > 0:
        raise ParameterError("time t must be positive")
    terms = np.exp(-np.asarray(dec.nu_sq[1:]) * t)
    truncated = bool(terms.size and terms[-1] > 1e-3)
    return RhoDiagnostic(float(terms.sum()), truncated)
