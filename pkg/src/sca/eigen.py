"""Weighted eigendecomposition of a Markov model.

The top eigenpairs are computed on the symmetric conjugate ``S`` of the
transition matrix and mapped back: with ``v`` an orthonormal eigenvector of
``S`` and ``s`` the stationary distribution, ``psi = v / sqrt(s)`` is a right
eigenvector of the transition matrix and ``phi = v * sqrt(s) = s * psi`` a
left one. Normalization is ``sum_i s_i psi_l(i)**2 == 1``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import eigsh

from .errors import NumericalError, ParameterError
from .markov import MarkovModel

__all__ = [
    "SpectralDecomposition",
    "decompose",
    "biorthogonality_check",
    "fix_signs",
    "DEGENERACY_GAP",
]

DEGENERACY_GAP = 1e-10
DENSE_LIMIT = 2000
RESIDUAL_FAIL = 1e-6


@dataclass(frozen=True)
class SpectralDecomposition:
    """Top ``q + 1`` eigenpairs, eigenvalues in descending order.

    ``psi[:, l]`` and ``phi[:, l]`` are the right and left eigenvectors for
    ``eigenvalues[l]``; ``nu_sq = (1 - eigenvalues) / epsilon``.
    ``degenerate[l]`` marks eigenvalues within ``DEGENERACY_GAP`` of a
    neighbour, whose individual eigenvectors are not identifiable.
    """

    eigenvalues: np.ndarray
    psi: np.ndarray
    phi: np.ndarray
    nu_sq: np.ndarray
    epsilon: float
    q: int
    stationary: np.ndarray
    degenerate: np.ndarray
    residuals: np.ndarray

    @property
    def n(self) -> int:
        return self.psi.shape[0]

    def inner(self, f, g=None):
        """Stationary-weighted inner product ``sum_i s_i f_i g_i``."""
        f = np.asarray(f, dtype=float)
        g = f if g is None else np.asarray(g, dtype=float)
        return np.tensordot(self.stationary, f * g, axes=(0, 0))


def fix_signs(vectors: np.ndarray, rtol: float = 1e-9) -> np.ndarray:
    """Flip columns so the entry of largest magnitude is positive.

    Entries within ``rtol`` of the column maximum count as ties; the lowest
    index among them decides.
    """
    out = np.array(vectors, dtype=float, copy=True)
    for col in range(out.shape[1]):
        mag = np.abs(out[:, col])
        top = mag.max()
        if top == 0:
            continue
        idx = int(np.flatnonzero(mag >= top * (1 - rtol))[0])
        if out[idx, col] < 0:
            out[:, col] = -out[:, col]
    return out


def _top_eigenpairs(sym, k, solver):
    n = sym.shape[0]
    if solver == "auto":
        solver = "dense" if n <= DENSE_LIMIT else "iterative"
    if solver == "dense" or k >= n - 1:
        vals, vecs = scipy.linalg.eigh(sym, subset_by_index=[n - k, n - 1])
    elif solver == "iterative":
        vals, vecs = eigsh(sym, k=k, which="LA", tol=0.0)
    else:
        raise ParameterError(f"unknown solver {solver!r}")
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]


def _pin_stationary(vals, vecs, root_s, sym):
    """Make column 0 the exact top eigenvector ``sqrt(s)``.

    Near eigenvalue 1 the solver may return any rotation of a (near-)degenerate
    eigenspace, so the remaining columns are Gram-Schmidt orthonormalized
    against ``sqrt(s)`` and their eigenvalues refreshed as Rayleigh quotients.
    """
    basis = np.column_stack([root_s, vecs[:, 1:]])
    qmat, r = np.linalg.qr(basis)
    qmat = qmat * np.where(np.diag(r) < 0, -1.0, 1.0)[None, :]
    qmat[:, 0] = root_s
    vals = np.einsum("il,ij,jl->l", qmat, sym, qmat)
    return vals, qmat


def decompose(model: MarkovModel, q: int, solver: str = "auto") -> SpectralDecomposition:
    """Top ``q + 1`` eigenpairs of the chain's transition matrix.

    Parameters
    ----------
    model : MarkovModel
    q : int
        Truncation order; eigenpairs ``0..q`` are returned.
    solver : {"auto", "dense", "iterative"}
        ``auto`` uses a dense symmetric solver up to 2000 points.

    Raises
    ------
    ParameterError
        If ``q + 1`` exceeds the number of points.
    NumericalError
        If an eigen residual exceeds 1e-6 (non-convergence).
    """
    n = model.n
    q = int(q)
    if q < 0 or q + 1 > n:
        raise ParameterError(f"need 0 <= q <= n - 1 = {n - 1}, got q={q}")
    s = model.stationary
    root_s = np.sqrt(s)
    vals, vecs = _top_eigenpairs(model.symmetric, q + 1, solver)
    vals, vecs = _pin_stationary(vals, vecs, root_s, model.symmetric)

    psi = vecs / root_s[:, None]
    psi /= np.sqrt(s @ psi**2)[None, :]
    psi = fix_signs(psi)
    phi = s[:, None] * psi

    resid = model.transition @ psi - psi * vals[None, :]
    residuals = np.linalg.norm(resid, axis=0) / np.linalg.norm(psi, axis=0)
    if residuals.max() > RESIDUAL_FAIL:
        raise NumericalError(
            f"eigensolver residual {residuals.max():.3g} exceeds {RESIDUAL_FAIL}",
            residual=float(residuals.max()))

    gaps = np.abs(np.diff(vals))
    degenerate = np.zeros(q + 1, dtype=bool)
    degenerate[:-1] |= gaps < DEGENERACY_GAP
    degenerate[1:] |= gaps < DEGENERACY_GAP
    # the numerically-zero tail is always degenerate and not worth a warning
    loud = degenerate & (np.abs(vals) > 1e-8)
    loud[0] = False
    if loud.any():
        idx = np.flatnonzero(loud).tolist()
        shown = idx if len(idx) <= 10 else idx[:10] + ["..."]
        warnings.warn(f"near-degenerate eigenvalues at indices {shown}",
                      RuntimeWarning, stacklevel=2)

    nu_sq = (1.0 - vals) / model.epsilon
    for arr in (vals, psi, phi, nu_sq, degenerate, residuals):
        arr.setflags(write=False)
    return SpectralDecomposition(vals, psi, phi, nu_sq, model.epsilon, q, s,
                                 degenerate, residuals)


def biorthogonality_check(dec: SpectralDecomposition):
    """Return ``(max off-diagonal |<phi_k, psi_l>|, max |<phi_l, psi_l> - 1|)``."""
    gram = dec.phi.T @ dec.psi
    diag = np.diag(gram)
    off = gram - np.diag(diag)
    off_max = float(np.max(np.abs(off))) if gram.shape[0] > 1 else 0.0
    return off_max, float(np.max(np.abs(diag - 1.0)))
