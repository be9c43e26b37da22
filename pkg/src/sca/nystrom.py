"""Out-of-sample (Nystrom) extension of eigenvectors and diffusion maps."""
from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .diffusion import scaled_eigenvalues
from .eigen import SpectralDecomposition
from .errors import IllConditionedExtensionError, ParameterError
from .pointcloud import PointCloud

__all__ = ["MIN_EIGENVALUE", "extend", "extend_eigenvector", "extend_embedding"]

MIN_EIGENVALUE = 1e-8


def _query_array(cloud, query):
    q = np.asarray(query.points if isinstance(query, PointCloud) else query, dtype=float)
    if q.ndim == 1:
        q = q[:, None] if cloud.d == 1 else q[None, :]
    if q.size == 0:
        return np.empty((0, cloud.d))
    if q.shape[1] != cloud.d:
        raise ParameterError(f"query dimension {q.shape[1]} != training dimension {cloud.d}")
    if not np.all(np.isfinite(q)):
        raise ParameterError("query contains non-finite coordinates")
    return q


def extend(cloud: PointCloud, dec: SpectralDecomposition, ells, query) -> np.ndarray:
    """Evaluate eigenvectors ``ells`` at arbitrary query points.

    ``psi_l(x) = sum_i k(x, X_i) psi_l(X_i) / (lambda_l sum_i k(x, X_i))``.
    Returns an array of shape (len(query), len(ells)).
    """
    ells = np.atleast_1d(np.asarray(ells, dtype=int))
    if np.any(ells < 0) or np.any(ells > dec.q):
        raise ParameterError(f"eigenvector index outside 0..{dec.q}")
    if cloud.n != dec.n:
        raise ParameterError("cloud does not match the decomposition")
    lam = dec.eigenvalues[ells]
    small = np.abs(lam) < MIN_EIGENVALUE
    if np.any(small):
        raise IllConditionedExtensionError(
            f"eigenvalue {lam[small][0]:.3g} below {MIN_EIGENVALUE} for index {ells[small][0]}")
    x = _query_array(cloud, query)
    if x.shape[0] == 0:
        return np.empty((0, len(ells)))
    d2 = cdist(x, cloud.points, "sqeuclidean")
    # shift by the row minimum so far-away queries do not underflow to 0/0
    k = np.exp(-(d2 - d2.min(axis=1, keepdims=True)) / (4.0 * dec.epsilon))
    k /= k.sum(axis=1, keepdims=True)
    return (k @ dec.psi[:, ells]) / lam[None, :]


def extend_eigenvector(cloud: PointCloud, dec: SpectralDecomposition, ell: int,
                       query) -> np.ndarray:
    return extend(cloud, dec, [ell], query)[:, 0]


def extend_embedding(cloud: PointCloud, dec: SpectralDecomposition, m: float, q: int,
                     query) -> np.ndarray:
    """Diffusion coordinates ``lambda_l^m psi_l(x)``, l=1..q, at query points."""
    if q < 1 or q > dec.q:
        raise ParameterError(f"embedding dimension must lie in 1..{dec.q}")
    ells = np.arange(1, q + 1)
    values = extend(cloud, dec, ells, query)
    return values * scaled_eigenvalues(dec.eigenvalues[ells], m)[None, :]
