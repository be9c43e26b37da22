"""Row-stochastic normalization of a kernel graph."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IsolatedVertexError, ParameterError
from .kernelgraph import KernelGraph

__all__ = ["MarkovModel", "build_markov", "m_step", "invariant_report"]


@dataclass(frozen=True)
class MarkovModel:
    """Random walk on a kernel graph.

    Attributes
    ----------
    transition : (n, n) ndarray
        ``K[i, j] / rho[i]``; rows sum to one.
    symmetric : (n, n) ndarray
        ``K[i, j] / sqrt(rho[i] rho[j])``, similar to ``transition``.
    stationary : (n,) ndarray
        ``rho / rho.sum()``, the invariant distribution.
    laplacian : (n, n) ndarray
        ``diag(rho) - K``.
    degrees : (n,) ndarray
    epsilon : float
    """

    transition: np.ndarray
    symmetric: np.ndarray
    stationary: np.ndarray
    laplacian: np.ndarray
    degrees: np.ndarray
    epsilon: float

    @property
    def n(self) -> int:
        return self.transition.shape[0]


def _frozen(a):
    a.setflags(write=False)
    return a


def build_markov(graph: KernelGraph) -> MarkovModel:
    k = graph.weights
    rho = np.asarray(graph.degrees, dtype=float)
    bad = np.flatnonzero(~(rho > 0))
    if bad.size:
        raise IsolatedVertexError(int(bad[0]))
    transition = k / rho[:, None]
    root = np.sqrt(rho)
    symmetric = k / root[:, None] / root[None, :]
    symmetric = 0.5 * (symmetric + symmetric.T)
    stationary = rho / rho.sum()
    laplacian = np.diag(rho) - k
    return MarkovModel(_frozen(transition), _frozen(symmetric), _frozen(stationary),
                       _frozen(laplacian), rho, graph.epsilon)


def m_step(model: MarkovModel, m: int) -> np.ndarray:
    """``m``-th power of the transition matrix; ``m = 0`` gives the identity.

    Powers above 8 use repeated squaring.
    """
    m = int(m)
    if m < 0:
        raise ParameterError("step count m must be >= 0")
    a = model.transition
    if m == 0:
        return np.eye(model.n)
    if m <= 8:
        out = a.copy()
        for _ in range(m - 1):
            out = out @ a
        return out
    result = None
    base = a
    while m:
        if m & 1:
            result = base.copy() if result is None else result @ base
        m >>= 1
        if m:
            base = base @ base
    return result


def invariant_report(model: MarkovModel) -> dict:
    """Max deviations of the chain identities, for manifests and tests."""
    a, s = model.transition, model.stationary
    flux = s[:, None] * a
    return {
        "row_sum_dev": float(np.max(np.abs(a.sum(axis=1) - 1.0))),
        "stationarity_dev": float(np.max(np.abs(s @ a - s))),
        "detailed_balance_dev": float(np.max(np.abs(flux - flux.T))),
        "laplacian_row_sum_dev": float(np.max(np.abs(model.laplacian.sum(axis=1)))),
    }
