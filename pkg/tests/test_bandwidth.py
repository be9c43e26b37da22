import math

import numpy as np
import pytest

from sca.bandwidth import (bootstrap_snr, bootstrap_snr_nodal, mst_rule, neighborhood_rule,
                           snr_from_replicates, theoretical_threshold)
from sca.errors import ParameterError
from sca.pointcloud import GeneratorSpec, PointCloud, generate

from conftest import line_cloud, two_gaussians


def test_identical_replicates_give_infinite_snr():
    reps = np.tile([1.0, -1.0, 2.0], (5, 1))
    assert snr_from_replicates(reps, np.ones(3) / 3) == math.inf
    assert snr_from_replicates(np.zeros((4, 3)), np.ones(3)) == 0.0


def test_noise_dominated_replicates_truncate_to_zero():
    reps = np.array([[1.0, 0.0], [-1.0, 0.0]])
    assert snr_from_replicates(reps, [0.5, 0.5]) == 0.0


def test_hand_snr():
    reps = np.array([[1.0], [3.0]])
    # mean 2, signal 4, xi^2 = 1
    assert snr_from_replicates(reps, [1.0]) == pytest.approx(math.sqrt(3.0))


def test_coin_flip_signs_have_no_signal():
    rng = np.random.default_rng(7)
    n = 2000
    reps = rng.choice([-1.0, 1.0], size=(200, n))
    assert snr_from_replicates(reps, np.full(n, 1 / n)) <= 0.2


def test_separated_clusters_high_snr_at_small_eps():
    cloud = generate(GeneratorSpec("two_point_masses", {"jitter": 0.05}, 0), 120)
    for fn in (bootstrap_snr, bootstrap_snr_nodal):
        curve = fn(cloud, 1, [0.01], B=10, threshold=5, seed=1)
        assert curve.snr[0] > 5 and curve.selected == 0.01


def test_snr_is_reproducible_and_validated():
    cloud = two_gaussians(seed=2, n=150)
    a = bootstrap_snr(cloud, 1, [0.05, 0.2], B=4, seed=3)
    b = bootstrap_snr(cloud, 1, [0.05, 0.2], B=4, seed=3)
    np.testing.assert_array_equal(a.snr, b.snr)
    with pytest.raises(ParameterError):
        bootstrap_snr(cloud, 1, [0.2, 0.05], B=4)
    with pytest.raises(ParameterError):
        bootstrap_snr(cloud, 1, [0.05], B=1)


def test_theoretical_threshold():
    assert theoretical_threshold(1000, 2, 1.0) == pytest.approx(1000 ** 0.2)


def test_neighborhood_rule_edges():
    cloud = two_gaussians(seed=4)
    grid = [0.01, 0.02, 0.05, 0.1]
    assert neighborhood_rule(cloud, grid, 1) == 0.01
    assert neighborhood_rule(cloud, grid, 2000) is None
    eps = neighborhood_rule(cloud, [0.02, 0.03, 0.04, 0.05, 0.075, 0.1], 100)
    assert 0.025 <= eps <= 0.1


def test_mst_rule_cases():
    res = mst_rule(line_cloud(0, 1, 3))
    assert res.longest_edge == pytest.approx(2.0) and res.epsilon == pytest.approx(2.0)
    assert mst_rule(PointCloud(np.array([[0.0, 0.0], [3.0, 4.0]]))).longest_edge == pytest.approx(5)
    cloud = generate(GeneratorSpec("two_point_masses",
                                   {"locations": [0.0, 10.0], "jitter": 0.01}, 0), 100)
    assert mst_rule(cloud).longest_edge == pytest.approx(10.0, abs=0.1)
    assert mst_rule(PointCloud(np.zeros((3, 1)))).longest_edge == 0.0
    with pytest.raises(ParameterError):
        mst_rule(line_cloud(1))
