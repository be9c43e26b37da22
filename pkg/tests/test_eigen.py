import warnings

import numpy as np
import pytest

from sca.eigen import biorthogonality_check, decompose, fix_signs
from sca.errors import ParameterError
from sca.kernelgraph import build_kernel
from sca.markov import build_markov

from conftest import line_cloud, random_cloud, two_gaussians, two_masses


def _model(cloud, eps):
    return build_markov(build_kernel(cloud, eps))


def test_top_pair_is_trivial(rng):
    dec = decompose(_model(random_cloud(rng, 50, 2), 0.3), 5)
    assert dec.eigenvalues[0] == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(dec.psi[:, 0], 1.0, atol=1e-10)
    assert np.all(np.diff(dec.eigenvalues) <= 0)


def test_three_point_chain_matches_brute_force():
    model = _model(line_cloud(0, 1, 2), 0.5)
    brute = np.sort(np.linalg.eigvals(model.transition).real)[::-1]
    np.testing.assert_allclose(decompose(model, 2).eigenvalues, brute, atol=1e-10)


def test_two_masses_step_function():
    cloud = two_masses()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        dec = decompose(_model(cloud, 1e-3), 1)
    assert dec.eigenvalues[1] >= 1 - 1e-6
    psi = dec.psi[:, 1]
    a, b = psi[cloud.labels == 0], psi[cloud.labels == 1]
    gap = abs(a.mean() - b.mean())
    assert max(a.std(), b.std()) <= 1e-3 * gap


def test_biorthogonality():
    dec = decompose(_model(two_gaussians(n=200), 0.1), 10)
    off, diag = biorthogonality_check(dec)
    assert off <= 1e-8 and diag <= 1e-8
    dec0 = decompose(_model(two_gaussians(n=50), 0.1), 0)
    assert biorthogonality_check(dec0) == (0.0, pytest.approx(0.0, abs=1e-10))


def test_order_too_large():
    with pytest.raises(ParameterError):
        decompose(_model(line_cloud(0, 1, 2), 0.5), 3)


def test_iterative_matches_dense(rng):
    model = _model(random_cloud(rng, 120, 2), 0.2)
    dense = decompose(model, 6, solver="dense")
    iterative = decompose(model, 6, solver="iterative")
    np.testing.assert_allclose(dense.eigenvalues, iterative.eigenvalues, atol=1e-10)
    np.testing.assert_allclose(dense.psi, iterative.psi, atol=1e-7)


def test_sign_rule_ties_go_to_lowest_index():
    v = np.array([[-1.0, 0.5], [1.0, -2.0]])
    out = fix_signs(v)
    np.testing.assert_array_equal(out[:, 0], [1.0, -1.0])
    np.testing.assert_array_equal(out[:, 1], [-0.5, 2.0])


def test_degenerate_spectrum_flagged():
    cloud = line_cloud(0, 0, 100, 100, 200, 200)
    with pytest.warns(RuntimeWarning, match="degenerate"):
        dec = decompose(_model(cloud, 0.5), 2)
    assert dec.degenerate[:3].all()
