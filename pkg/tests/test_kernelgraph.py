import math

import numpy as np
import pytest

from sca.errors import ParameterError
from sca.kernelgraph import (adjacency_kernel, build_kernel, epsilon_graph, heat_kernel, kde,
                             neighbor_counts)
from sca.pointcloud import PointCloud

from conftest import line_cloud, two_gaussians


def test_heat_kernel_unit_distance():
    k = heat_kernel([[0.0]], [[1.0]], 0.25)
    assert k[0, 0] == pytest.approx(math.exp(-1) / math.sqrt(math.pi), rel=1e-14)
    assert k[0, 0] == pytest.approx(0.20755, abs=1e-5)


def test_heat_kernel_prefactor_cancels():
    assert heat_kernel([[3.0]], [[3.0]], 1 / (4 * math.pi))[0, 0] == pytest.approx(1.0)


def test_collinear_kernel_table():
    eps = 0.5
    graph = build_kernel(line_cloud(0, 1, 2), eps)
    pre = (4 * math.pi * eps) ** -0.5
    for i in range(3):
        for j in range(3):
            assert graph.weights[i, j] == pytest.approx(
                pre * math.exp(-(i - j) ** 2 / (4 * eps)), abs=1e-12)
    np.testing.assert_allclose(graph.degrees, graph.weights.sum(1))


def test_nonpositive_epsilon_rejected():
    for eps in (0.0, -1.0):
        with pytest.raises(ParameterError):
            build_kernel(line_cloud(0, 1), eps)


def test_identical_points():
    eps = 0.3
    graph = build_kernel(PointCloud(np.zeros((5, 2))), eps)
    np.testing.assert_allclose(kde(graph), (4 * math.pi * eps) ** -1.0)


def test_kde_bimodal_shape():
    hits = 0
    for seed in range(20):
        cloud = two_gaussians(seed)
        p = kde(build_kernel(cloud, 0.05))
        x = cloud.points[:, 0]
        at = lambda c: p[np.argmin(np.abs(x - c))]
        hits += at(-2) > at(0) and at(2) > at(0)
    assert hits >= 19


def test_cutoff_zeroes_far_pairs():
    graph = build_kernel(line_cloud(0, 10), 0.5, cutoff=3)
    assert graph.weights[0, 1] == 0.0


def test_epsilon_graph_cases():
    cloud = line_cloud(0, 1, 2)
    g = epsilon_graph(cloud, 1.5)
    np.testing.assert_array_equal(g.edges, [[0, 1], [1, 2]])
    assert len(epsilon_graph(cloud, 10).edges) == 3
    assert len(epsilon_graph(cloud, 0.5).edges) == 0


def test_adjacency_kernel():
    graph = adjacency_kernel(line_cloud(0, 1, 3), 1.5)
    np.testing.assert_array_equal(graph.weights, [[1, 1, 0], [1, 1, 0], [0, 0, 1]])
    assert graph.epsilon == pytest.approx(1.5 ** 2 / 2)


def test_neighbor_counts():
    counts, median = neighbor_counts(line_cloud(0), 0.1)
    assert counts.tolist() == [1] and median == 1
    meds = [neighbor_counts(two_gaussians(s), 0.05)[1] for s in range(5)]
    assert all(75 <= m <= 125 for m in meds)
