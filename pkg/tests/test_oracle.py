import warnings

import numpy as np
import pytest

from sca.eigen import decompose
from sca.errors import ParameterError
from sca.kernelgraph import build_kernel
from sca.markov import build_markov
from sca.oracle import (TWO_GAUSSIANS, EmpiricalSemigroup, GaussianMixtureDensity,
                        ReferenceSemigroup, UniformSegmentsDensity, default_dictionary,
                        estimate_loss, evolve_density, interpolate, quadrature_operator,
                        reference_eigenfunctions, total_variation, weighted_error)

from conftest import two_gaussians


@pytest.fixture(scope="module")
def two_gauss_ref():
    model = quadrature_operator(TWO_GAUSSIANS, 0.01, 1024)
    return model, reference_eigenfunctions(model, 20)


def test_uniform_density_gives_cosines():
    model = quadrature_operator(UniformSegmentsDensity(((0.0, 1.0),)), 1e-4, 1024)
    dec = reference_eigenfunctions(model, 2)
    for ell in (1, 2):
        cos = np.cos(ell * np.pi * model.grid)
        assert abs(np.corrcoef(cos, dec.psi[:, ell])[0, 1]) >= 0.99


def test_two_gaussian_first_eigenfunction(two_gauss_ref):
    model, dec = two_gauss_ref
    psi = dec.psi[:, 1]
    assert np.ptp(np.sign(psi[model.grid < -1])) == 0
    assert np.sign(psi[model.grid < -1][0]) != np.sign(psi[model.grid > 1][0])
    assert abs(interpolate(model, psi, [0.0])[0]) < 0.5 * np.abs(psi).max()


def test_trivial_pair(two_gauss_ref):
    _, dec = two_gauss_ref
    assert dec.eigenvalues[0] == pytest.approx(1.0, abs=1e-10)
    np.testing.assert_allclose(dec.psi[:, 0], 1.0, atol=1e-10)


def test_spectrum_shape(two_gauss_ref):
    # one near-1 cluster eigenvalue, then a clear gap
    _, dec = two_gauss_ref
    lam = dec.eigenvalues
    assert 1 - lam[1] < 0.1 * (1 - lam[2])
    assert np.all(np.diff(lam) < 0)


def test_grid_refinement_gate():
    a = reference_eigenfunctions(quadrature_operator(TWO_GAUSSIANS, 0.01, 1024), 4)
    b = reference_eigenfunctions(quadrature_operator(TWO_GAUSSIANS, 0.01, 2048), 4)
    assert np.max(np.abs(a.eigenvalues - b.eigenvalues)) <= 1e-4


def test_epsilon_stability():
    ref = quadrature_operator(TWO_GAUSSIANS, 0.002, 2048)
    psi_ref = reference_eigenfunctions(ref, 1).psi[:, 1]
    errs = []
    for eps in (0.05, 0.01):
        model = quadrature_operator(TWO_GAUSSIANS, eps, 2048)
        psi = reference_eigenfunctions(model, 1).psi[:, 1]
        errs.append(weighted_error(psi, psi_ref, ref.weights))
    assert errs[1] < errs[0]


def test_truncation_warning():
    narrow = GaussianMixtureDensity((0.0,), (1.0,), (1.0,))
    object.__setattr__(narrow, "span", lambda eps: (-1.0, 1.0))
    with pytest.warns(RuntimeWarning, match="outside"):
        quadrature_operator(narrow, 0.01, 256)


def test_evolve_start_and_limit(two_gauss_ref):
    model, _ = two_gauss_ref
    start = evolve_density(model, 0.0, 100) * model.spacing
    assert start[100] == 1.0 and start.sum() == 1.0
    p2 = TWO_GAUSSIANS.pdf(model.grid) ** 2
    late = evolve_density(model, 1e4, 100) * model.spacing
    assert total_variation(late, p2 / p2.sum()) < 0.02


def test_loss_zero_for_reference(two_gauss_ref):
    model, dec = two_gauss_ref
    ref = ReferenceSemigroup(model, dec)
    loss = estimate_loss(ref, ref, 1.0, default_dictionary(model, dec), dec.stationary)
    assert loss.value == 0 and loss.lower_bound
    with pytest.raises(ParameterError):
        estimate_loss(ref, ref, 1.0, np.empty((model.grid.size, 0)), dec.stationary)


def test_loss_nonincreasing_in_q(two_gauss_ref):
    model, dec = two_gauss_ref
    dictionary = default_dictionary(model, dec)
    full = ReferenceSemigroup(model, dec)
    losses = [estimate_loss(full, ReferenceSemigroup(model, dec, q), 0.05, dictionary,
                            dec.stationary).value for q in (2, 5, 10, 20)]
    assert all(b <= a + 1e-10 for a, b in zip(losses, losses[1:]))


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_empirical_loss_finite(two_gauss_ref):
    model, dec = two_gauss_ref
    cloud = two_gaussians(seed=0, n=300)
    emp_dec = decompose(build_markov(build_kernel(cloud, 0.1)), 10)
    emp = EmpiricalSemigroup(model, cloud, emp_dec, 10)
    loss = estimate_loss(ReferenceSemigroup(model, dec), emp, 1.0,
                         default_dictionary(model, dec), dec.stationary)
    assert 0 < loss.value < np.inf


def test_weighted_error_sign_invariant():
    a = np.array([1.0, -2.0, 3.0])
    w = np.ones(3) / 3
    assert weighted_error(a, -a, w) == 0
    assert weighted_error(a + 1, a, w) == pytest.approx(1.0)
