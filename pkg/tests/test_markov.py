import math

import numpy as np
import pytest

from sca.errors import IsolatedVertexError, ParameterError
from sca.eigen import decompose
from sca.kernelgraph import adjacency_kernel, build_kernel
from sca.markov import build_markov, invariant_report, m_step

from conftest import line_cloud, random_cloud, two_masses


def test_row_sums_and_invariants(rng):
    model = build_markov(build_kernel(random_cloud(rng, 60, 3), 0.4))
    rep = invariant_report(model)
    assert rep["row_sum_dev"] <= 1e-12
    assert rep["stationarity_dev"] <= 1e-10
    assert rep["detailed_balance_dev"] <= 1e-12


def test_collinear_transition_table():
    eps = 0.5
    k = np.array([[math.exp(-(i - j) ** 2 / (4 * eps)) for j in range(3)] for i in range(3)])
    k /= math.sqrt(4 * math.pi * eps)
    model = build_markov(build_kernel(line_cloud(0, 1, 2), eps))
    np.testing.assert_allclose(model.transition, k / k.sum(1, keepdims=True), atol=1e-12)


def test_block_diagonal_for_far_clusters():
    cloud = two_masses()
    model = build_markov(build_kernel(cloud, 1e-3))
    a = cloud.labels
    off = model.transition[a[:, None] != a[None, :]]
    assert off.size and model.transition[0][a != a[0]].sum() < 1e-6
    assert max(row[a != a[i]].sum() for i, row in enumerate(model.transition)) < 1e-6


def test_isolated_vertex_named():
    graph = adjacency_kernel(line_cloud(0, 1, 5), 1.5, self_loops=False)
    with pytest.raises(IsolatedVertexError) as info:
        build_markov(graph)
    assert info.value.vertex == 2


def test_m_step_small_cases(rng):
    model = build_markov(build_kernel(random_cloud(rng, 20, 2), 0.5))
    np.testing.assert_array_equal(m_step(model, 0), np.eye(20))
    np.testing.assert_array_equal(m_step(model, 1), model.transition)
    np.testing.assert_allclose(m_step(model, 13),
                               np.linalg.matrix_power(model.transition, 13), atol=1e-13)
    with pytest.raises(ParameterError):
        m_step(model, -1)


def test_m_step_converges_to_stationary(rng):
    model = build_markov(build_kernel(random_cloud(rng, 40, 2), 0.5))
    lam1 = decompose(model, 1).eigenvalues[1]
    m = int(math.ceil(math.log(1e-8) / math.log(lam1)))
    assert np.max(np.abs(m_step(model, m) - model.stationary[None, :])) <= 1e-6
