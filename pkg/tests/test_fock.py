import numpy as np
import pytest

from qgeom import fock
from qgeom.errors import ConvergenceError


def test_basis_validation():
    with pytest.raises(ValueError):
        fock.basis(1, 1)
    with pytest.raises(ValueError):
        fock.basis(1, 10, -1.0)
    fb = fock.basis(2, 5, (1.0, 2.0))
    assert fb.dim == 25
    assert fb.with_cutoff(7).dim == 49


def test_ladder_entries():
    fb = fock.basis(1, 3)
    a, adag = fock.ladder(fb)
    expected = np.zeros((3, 3))
    expected[0, 1] = 1.0
    expected[1, 2] = np.sqrt(2.0)
    np.testing.assert_allclose(a.entries, expected, atol=1e-15)
    np.testing.assert_allclose(adag.entries, a.entries.conj().T, atol=1e-14)


def test_truncated_commutator():
    # [a, a^dag] = I except the last diagonal entry, which is -(n_max - 1)
    fb = fock.basis(1, 4)
    a, adag = fock.ladder(fb)
    comm = fock.commutator(a, adag)
    np.testing.assert_allclose(comm, np.diag([1.0, 1.0, 1.0, -3.0]), atol=1e-14)


def test_ladder_mode_out_of_range():
    fb = fock.basis(2, 3)
    with pytest.raises(ValueError):
        fock.ladder(fb, 2)


def test_position_two_level():
    fb = fock.basis(1, 2, 1.0)
    q, p = fock.position_momentum(fb)
    np.testing.assert_allclose(q.entries, np.array([[0, 1], [1, 0]]) / np.sqrt(2),
                               atol=1e-15)
    assert q.hermitian and p.hermitian


def test_vacuum_variance():
    for wb in (1.0, 2.5):
        fb = fock.basis(1, 20, wb)
        q, _ = fock.position_momentum(fb)
        vac = np.zeros(fb.dim)
        vac[0] = 1.0
        q2 = fock.expectation(q @ q, vac)
        np.testing.assert_allclose(q2, 1.0 / (2 * wb), atol=1e-13)


def test_excited_position_variance():
    # <n|q^2|n> = (2n + 1)/(2 w); frozen at n = 1, w = 1 -> 1.5
    fb = fock.basis(1, 30, 1.0)
    q, _ = fock.position_momentum(fb)
    state = np.zeros(fb.dim)
    state[1] = 1.0
    np.testing.assert_allclose(fock.expectation(q @ q, state), 1.5, atol=1e-13)
    np.testing.assert_allclose(fock.expectation(q, state), 0.0, atol=1e-14)


def test_canonical_commutator_bulk():
    fb = fock.basis(1, 30, 1.3)
    q, p = fock.position_momentum(fb)
    comm = fock.commutator(q, p)
    bulk = comm[: fb.cutoff - 1, : fb.cutoff - 1]
    np.testing.assert_allclose(bulk, 1j * np.eye(fb.cutoff - 1), atol=1e-12)


def test_kron_embedding_commutes_across_modes():
    fb = fock.basis(2, 6, (1.0, 2.0))
    q1, p1 = fock.position_momentum(fb, 0)
    q2, p2 = fock.position_momentum(fb, 1)
    for a, b in [(q1, q2), (q1, p2), (p1, q2), (p1, p2)]:
        assert np.abs(fock.commutator(a, b)).max() <= 1e-12


def test_adjoint_consistency():
    fb = fock.basis(2, 5, (0.7, 1.9))
    for mode in range(2):
        a, adag = fock.ladder(fb, mode)
        np.testing.assert_allclose(adag.entries, a.entries.conj().T, atol=1e-14)


def test_weyl_product():
    fb = fock.basis(1, 12)
    q, p = fock.position_momentum(fb)
    qp = fock.weyl_product(q, p)
    direct = 0.5 * (q.entries @ p.entries + p.entries @ q.entries)
    np.testing.assert_allclose(qp.entries, direct, atol=1e-14)
    assert qp.hermitian
    # single operand and commuting operands
    assert fock.weyl_product(q) is q
    np.testing.assert_allclose(fock.weyl_product(q, q).entries,
                               q.entries @ q.entries, atol=1e-13)


def test_weyl_dimension_mismatch():
    q1, _ = fock.position_momentum(fock.basis(1, 4))
    q2, _ = fock.position_momentum(fock.basis(1, 5))
    with pytest.raises(ValueError):
        fock.weyl_product(q1, q2)


def test_quadratics_match_products():
    fb = fock.basis(2, 5, (0.8, 1.7))
    quads = fock.quadratics(fb)
    qs, ps = quads.qs, quads.ps
    for (a, b), mat in quads.qq.items():
        np.testing.assert_allclose(mat.entries, (qs[a] @ qs[b]).entries, atol=1e-13)
    for (a, b), mat in quads.pp.items():
        sym = 0.5 * ((ps[a] @ ps[b]).entries + (ps[b] @ ps[a]).entries)
        np.testing.assert_allclose(mat.entries, sym, atol=1e-13)
    for a, mat in enumerate(quads.qp):
        np.testing.assert_allclose(
            mat.entries, fock.weyl_product(qs[a], ps[a]).entries, atol=1e-13)


def test_operator_matrix_hermitian_flag():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        fock.OperatorMatrix(bad, hermitian=True)
    ok = fock.OperatorMatrix(bad)  # fine without the flag
    assert not ok.hermitian


def test_eigh_identity():
    op = fock.OperatorMatrix(np.eye(5), hermitian=True)
    spec = fock.eigh(op)
    np.testing.assert_allclose(spec.energies, np.ones(5), atol=1e-14)
    np.testing.assert_allclose(np.abs(spec.states), np.eye(5), atol=1e-14)


def test_eigh_rejects_nonhermitian():
    op = fock.OperatorMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        fock.eigh(op)


def test_eigh_unit_oscillator():
    fb = fock.basis(1, 40, 1.0)
    q, p = fock.position_momentum(fb)
    H = 0.5 * (p @ p) + 0.5 * (q @ q)
    spec = fock.eigh(H.assert_hermitian())
    np.testing.assert_allclose(spec.energies[:5], np.arange(5) + 0.5, atol=1e-10)
    # eigenvectors unit norm with the gauge pivot real positive
    norms = np.linalg.norm(spec.states, axis=0)
    np.testing.assert_allclose(norms, 1.0, atol=1e-12)
    idx = np.argmax(np.abs(spec.states), axis=0)
    pivots = spec.states[idx, np.arange(spec.dim)]
    assert np.all(np.real(pivots) > 0)
    assert np.abs(np.imag(pivots)).max() <= 1e-14


def test_eigh_residual():
    rng = np.random.default_rng(7)
    m = rng.normal(size=(60, 60)) + 1j * rng.normal(size=(60, 60))
    m = m + m.conj().T
    op = fock.OperatorMatrix(m, hermitian=True)
    spec = fock.eigh(op)
    resid = np.abs(m @ spec.states - spec.states * spec.energies).max()
    assert resid <= 1e-10 * np.abs(spec.energies).max()


def test_eigh_gauge_deterministic():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(40, 40)) + 1j * rng.normal(size=(40, 40))
    m = m + m.conj().T
    op = fock.OperatorMatrix(m, hermitian=True)
    s1 = fock.eigh(op)
    s2 = fock.eigh(op)
    assert np.array_equal(s1.states, s2.states)
    assert np.array_equal(s1.energies, s2.energies)


def test_generalized_oscillator_frequency():
    # H = (Z p^2 + X q^2)/2 + Y(pq + qp)/2 has E_n = w(n + 1/2), w = sqrt(XZ - Y^2)
    X, Y, Z = 2.0, 0.5, 1.0
    w = np.sqrt(X * Z - Y * Y)
    fb = fock.basis(1, 80, w)
    q, p = fock.position_momentum(fb)
    H = 0.5 * Z * (p @ p) + 0.5 * X * (q @ q) + fock.weyl_product(q, p) * Y
    spec = fock.eigh(H.assert_hermitian())
    np.testing.assert_allclose(spec.energies[:6], w * (np.arange(6) + 0.5), atol=1e-8)


def test_degeneracy_guard():
    op = fock.OperatorMatrix(np.diag([0.0, 1.0, 1.0 + 1e-12, 3.0]), hermitian=True)
    spec = fock.eigh(op)
    spec.check_nondegenerate(0)
    with pytest.raises(fock.DegeneracyError):
        spec.check_nondegenerate(1)


def test_truncation_convergence_report():
    fb = fock.basis(1, 12, 1.0)

    def ground_energy(basis):
        q, p = fock.position_momentum(basis)
        H = (0.5 * (p @ p) + 0.5 * 4.0 * (q @ q)).assert_hermitian()
        return fock.eigh(H).energies[0]

    report = fock.truncation_convergence(ground_energy, fb, tol=1e-8)
    # basis frequency 1 vs oscillator frequency 2: slow but converging
    assert report.cutoffs == (12, 24)
    assert report.deviation > 0
    with pytest.raises(ConvergenceError):
        fock.truncation_convergence(ground_energy, fock.basis(1, 8, 1.0),
                                    tol=1e-14, raise_on_failure=True)


def test_flagged_gaps():
    op = fock.OperatorMatrix(np.diag([0.0, 1.0, 1.0 + 1e-12, 3.0]), hermitian=True)
    spec = fock.eigh(op)
    np.testing.assert_array_equal(spec.flagged_gaps(), [False, True, False])
