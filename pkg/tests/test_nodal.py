import warnings

import numpy as np
import pytest

from sca.eigen import decompose
from sca.errors import ParameterError
from sca.kernelgraph import build_kernel
from sca.markov import build_markov
from sca.nodal import (NodalMap, fit_noise_exponent, nodal_error, nodal_map,
                       noise_exponent_curve)
from sca.oracle import TWO_GAUSSIANS, quadrature_operator, reference_eigenfunctions

from conftest import two_masses


@pytest.fixture(scope="module")
def cluster_dec():
    cloud = two_masses(jitter=0.02)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return cloud, decompose(build_markov(build_kernel(cloud, 0.005)), 2)


def test_trivial_map_positive(cluster_dec):
    _, dec = cluster_dec
    assert np.all(nodal_map(dec, 0).signs == 1)


def test_clusters_have_opposite_signs(cluster_dec):
    cloud, dec = cluster_dec
    signs = nodal_map(dec, 1).signs
    a, b = signs[cloud.labels == 0], signs[cloud.labels == 1]
    assert len(set(a)) == 1 and len(set(b)) == 1 and a[0] == -b[0]


def test_zero_entries_and_validation():
    m = NodalMap(np.sign(np.array([0.0, -2.0, 3.0])), 1)
    assert m.signs.tolist() == [0, -1, 1]
    with pytest.raises(ParameterError):
        NodalMap(np.array([2, 0]), 1)


def test_error_symmetry_and_flips():
    rng = np.random.default_rng(0)
    a = rng.choice([-1, 1], 50)
    b = a.copy()
    b[:7] *= -1
    assert nodal_error(a, a) == 0 and nodal_error(a, -a) == 0
    assert nodal_error(a, b) == pytest.approx(7 / 50)
    assert nodal_error(a, b) == nodal_error(b, a) == nodal_error(-a, b)
    assert nodal_error([0, 1], [1, 1]) == 0.5
    with pytest.raises(ParameterError):
        nodal_error(a, a[:10])


def test_noise_exponent_curve_limits():
    psi = np.array([0.0, 0.1, -0.2, 0.5, -1.0])
    w = np.full(5, 0.2)
    curve = noise_exponent_curve(psi, w, [1e-9, 0.15, 1.0, 5.0])
    np.testing.assert_allclose(curve, [0.0, 0.2, 0.8, 0.8])


def test_separated_mixture_puts_little_mass_near_zero():
    model = quadrature_operator(TWO_GAUSSIANS, 0.01, 1024)
    dec = reference_eigenfunctions(model, 1)
    psi = dec.psi[:, 1]
    mass = model.weights / model.weights.sum()
    deltas = np.array([0.05, 0.1, 0.2, 0.4])
    curve = noise_exponent_curve(psi, mass, deltas)
    assert curve[-1] < 0.1
    slope = fit_noise_exponent(deltas, curve, (0.05, 0.4))
    assert slope > 0.5
