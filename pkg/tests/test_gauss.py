import math

import numpy as np
import pytest

from qgeom import gauss
from qgeom.errors import NumericalError


def vacuum(modes=1):
    return gauss.CovarianceMatrix(modes, 0.5 * np.eye(2 * modes))


def two_mode_squeezed(r):
    # standard two-mode squeezed vacuum in (q1, q2, p1, p2) ordering
    c, s = math.cosh(2 * r), math.sinh(2 * r)
    qq = 0.5 * np.array([[c, s], [s, c]])
    pp = 0.5 * np.array([[c, -s], [-s, c]])
    z = np.zeros((2, 2))
    return gauss.CovarianceMatrix(2, np.block([[qq, z], [z, pp]]))


def test_symplectic_form():
    om = gauss.symplectic_form(2)
    np.testing.assert_allclose(om, -om.T, atol=1e-15)
    np.testing.assert_allclose(om[:2, 2:], np.eye(2), atol=1e-15)


def test_covariance_validation():
    with pytest.raises(NumericalError):
        gauss.CovarianceMatrix(1, np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(NumericalError):
        gauss.CovarianceMatrix(1, 0.1 * np.eye(2))  # violates uncertainty
    with pytest.raises(ValueError):
        gauss.CovarianceMatrix(2, np.eye(2))


def test_vacuum_measures():
    cov = vacuum()
    np.testing.assert_allclose(gauss.symplectic_eigenvalues(cov), [0.5], atol=1e-14)
    assert gauss.purity(cov) == pytest.approx(1.0, abs=1e-12)
    assert gauss.von_neumann_entropy(cov) == 0.0


def test_thermal_scaling():
    for s in (1.5, 3.0):
        cov = gauss.CovarianceMatrix(1, 0.5 * s * np.eye(2))
        np.testing.assert_allclose(gauss.symplectic_eigenvalues(cov), [s / 2],
                                   atol=1e-12)
        assert gauss.purity(cov) == pytest.approx(1.0 / s, abs=1e-12)


def test_entropy_clamps_at_pure_edge():
    cov = gauss.CovarianceMatrix(1, (0.5 + 1e-12) * np.eye(2))
    assert gauss.von_neumann_entropy(cov) == 0.0


def test_reduce_errors():
    cov = vacuum(2)
    with pytest.raises(ValueError):
        gauss.reduce(cov, [])
    with pytest.raises(ValueError):
        gauss.reduce(cov, [2])
    with pytest.raises(ValueError):
        gauss.reduce(cov, [0, 0])


def test_reduce_identity_and_ordering():
    cov = two_mode_squeezed(0.7)
    full = gauss.reduce(cov, [0, 1])
    np.testing.assert_allclose(full.entries, cov.entries, atol=1e-14)
    red = gauss.reduce(cov, [1])
    np.testing.assert_allclose(
        red.entries, np.diag([cov.entries[1, 1], cov.entries[3, 3]]), atol=1e-14)


def test_two_mode_squeezed_entropy():
    # reduced state is thermal with nu = cosh(2r)/2
    r = 0.6
    cov = two_mode_squeezed(r)
    red = gauss.reduce(cov, [0])
    nu = math.cosh(2 * r) / 2
    np.testing.assert_allclose(gauss.symplectic_eigenvalues(red), [nu], atol=1e-12)
    expected = (nu + 0.5) * math.log(nu + 0.5) - (nu - 0.5) * math.log(nu - 0.5)
    assert gauss.von_neumann_entropy(red) == pytest.approx(expected, abs=1e-12)
    # the full state is pure
    assert gauss.purity(cov) == pytest.approx(1.0, abs=1e-10)


def test_purity_entropy_consistency():
    # mu = 1 iff S = 0 across a family of states
    for nu in (0.5, 0.5 + 1e-11, 0.8, 2.0):
        cov = gauss.CovarianceMatrix(1, nu * np.eye(2))
        mu = gauss.purity(cov)
        s = gauss.von_neumann_entropy(cov)
        assert (abs(mu - 1.0) <= 1e-10) == (s <= 1e-10)


def test_entropy_monotone_in_nu():
    nus = np.linspace(0.5, 4.0, 30)
    values = [gauss.von_neumann_entropy(gauss.CovarianceMatrix(1, nu * np.eye(2)))
              for nu in nus]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_random_rotated_states(seed=5):
    # symplectic rotations preserve the spectrum and purity
    rng = np.random.default_rng(seed)
    for _ in range(10):
        nu1, nu2 = rng.uniform(0.5, 2.0, size=2)
        base = np.diag([nu1, nu2, nu1, nu2])
        theta = rng.uniform(0, 2 * math.pi)
        c, s = math.cos(theta), math.sin(theta)
        rot = np.array([[c, -s], [s, c]])
        sp = np.block([[rot, np.zeros((2, 2))], [np.zeros((2, 2)), rot]])
        cov = gauss.CovarianceMatrix(2, sp @ base @ sp.T)
        np.testing.assert_allclose(gauss.symplectic_eigenvalues(cov),
                                   sorted([nu1, nu2]), atol=1e-10)
        np.testing.assert_allclose(gauss.purity(cov), 1 / (4 * nu1 * nu2),
                                   atol=1e-10)


def test_symplectic_eigenvalue_below_half_rejected():
    good = gauss.CovarianceMatrix(2, np.diag([0.6, 0.4, 0.6, 0.7]))
    assert gauss.symplectic_eigenvalues(good).min() >= 0.5 - 1e-8
    # a strongly squeezed, slightly sub-vacuum state: the (relative)
    # uncertainty check at construction passes, the (absolute) nu guard fires
    nu = 0.5 - 1e-7
    a = 2.5e5
    cov = gauss.CovarianceMatrix(1, np.diag([a, nu * nu / a]))
    with pytest.raises(NumericalError, match="invalid state"):
        gauss.symplectic_eigenvalues(cov)


def test_sym_decoupled_purity_is_one():
    from qgeom.models import get_model
    model = get_model("sym-coupled")
    point = model.point(1.0, 0.0)
    assert model.closed_form("purity", point, (0, 0)) == pytest.approx(1.0)
    assert model.closed_form("entropy", point, (0, 0)) == 0.0
