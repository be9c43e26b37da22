"""Gaussian kernel graphs, kernel density estimates and neighborhood graphs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .errors import ParameterError
from .pointcloud import PointCloud

__all__ = [
    "KernelGraph",
    "EpsilonGraph",
    "heat_kernel",
    "build_kernel",
    "adjacency_kernel",
    "kde",
    "epsilon_graph",
    "neighbor_counts",
]


@dataclass(frozen=True)
class KernelGraph:
    """Dense symmetric weight matrix with its degree vector.

    ``degrees`` include the self-weight ``weights[i, i]``.
    """

    weights: np.ndarray
    degrees: np.ndarray
    epsilon: float
    dim: int
    normalized: bool = True
    kind: str = "gaussian"

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class EpsilonGraph:
    """Undirected graph joining points closer than ``threshold``.

    ``edges`` is an (E, 2) array of index pairs with ``i < j``, sorted
    lexicographically; ``edge_weights`` holds their Euclidean lengths.
    """

    vertices: int
    edges: np.ndarray
    edge_weights: np.ndarray
    threshold: float

    def degree(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.vertices)

    def to_csr(self) -> csr_matrix:
        """Symmetric sparse adjacency carrying edge lengths.

        Zero-length edges (coincident points) are stored as the smallest
        positive float so sparse graph routines keep them.
        """
        w = np.maximum(self.edge_weights, np.finfo(float).tiny)
        i, j = self.edges[:, 0], self.edges[:, 1]
        return csr_matrix(
            (np.concatenate([w, w]), (np.concatenate([i, j]), np.concatenate([j, i]))),
            shape=(self.vertices, self.vertices),
        )


def _check_epsilon(epsilon):
    epsilon = float(epsilon)
    if not epsilon > 0:
        raise ParameterError(f"bandwidth epsilon must be positive, got {epsilon}")
    return epsilon


def heat_kernel(x, y, epsilon, normalized=True):
    """Pairwise Gaussian kernel ``(4 pi eps)^(-d/2) exp(-|x-y|^2 / (4 eps))``.

    ``x`` is (m, d), ``y`` is (n, d); returns an (m, n) array.
    """
    epsilon = _check_epsilon(epsilon)
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    k = np.exp(-cdist(x, y, "sqeuclidean") / (4.0 * epsilon))
    if normalized:
        k *= (4.0 * np.pi * epsilon) ** (-x.shape[1] / 2.0)
    return k


def build_kernel(cloud: PointCloud, epsilon: float, normalized: bool = True,
                 cutoff: float | None = None) -> KernelGraph:
    """Gaussian kernel graph over ``cloud`` at bandwidth ``epsilon``.

    ``cutoff`` optionally zeroes pairs farther apart than ``cutoff * sqrt(eps)``;
    it is off by default.
    """
    epsilon = _check_epsilon(epsilon)
    k = heat_kernel(cloud.points, cloud.points, epsilon, normalized)
    if cutoff is not None:
        if cutoff <= 0:
            raise ParameterError("cutoff must be positive")
        far = cdist(cloud.points, cloud.points) > cutoff * np.sqrt(epsilon)
        k[far] = 0.0
    k = 0.5 * (k + k.T)
    k.setflags(write=False)
    deg = k.sum(axis=1)
    deg.setflags(write=False)
    return KernelGraph(k, deg, epsilon, cloud.d, normalized)


def adjacency_kernel(cloud: PointCloud, tau: float, self_loops: bool = True) -> KernelGraph:
    """Binary kernel: 1 where ``|X_i - X_j| <= tau``, else 0.

    The stored ``epsilon`` is ``tau**2 / 2`` (the Gaussian bandwidth whose
    scale ``sqrt(2 eps)`` equals ``tau``).
    """
    if not tau > 0:
        raise ParameterError("threshold tau must be positive")
    k = (cdist(cloud.points, cloud.points) <= tau).astype(float)
    if not self_loops:
        np.fill_diagonal(k, 0.0)
    k.setflags(write=False)
    deg = k.sum(axis=1)
    deg.setflags(write=False)
    return KernelGraph(k, deg, tau * tau / 2.0, cloud.d, False, "adjacency")


def kde(graph: KernelGraph) -> np.ndarray:
    """Kernel density estimate at each sample point (row means of the kernel)."""
    return graph.weights.mean(axis=1)


def epsilon_graph(cloud: PointCloud, tau: float) -> EpsilonGraph:
    """All pairs at Euclidean distance ``<= tau``, without self-loops."""
    if not tau > 0:
        raise ParameterError("threshold tau must be positive")
    tree = cKDTree(cloud.points)
    pairs = tree.query_pairs(tau, output_type="ndarray")
    if len(pairs):
        pairs = np.sort(pairs, axis=1)
        pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
        lengths = np.linalg.norm(
            cloud.points[pairs[:, 0]] - cloud.points[pairs[:, 1]], axis=1)
    else:
        pairs = np.empty((0, 2), dtype=int)
        lengths = np.empty(0)
    return EpsilonGraph(cloud.n, pairs.astype(int), lengths, float(tau))


def neighbor_counts(cloud: PointCloud, epsilon: float):
    """Number of sample points within ``sqrt(2 eps)`` of each point.

    Each point counts itself. Returns ``(counts, median)``.
    """
    epsilon = _check_epsilon(epsilon)
    tree = cKDTree(cloud.points)
    counts = np.asarray(
        tree.query_ball_point(cloud.points, np.sqrt(2.0 * epsilon), return_length=True))
    return counts, float(np.median(counts))
