import numpy as np
import pytest

from qslgeo import (
    DimensionMismatch,
    HermitianOperator,
    NotHermitian,
    NotPositiveDefinite,
    NotTraceless,
    TangentOperator,
    TraceNotOne,
    center,
    commutator_generator,
    condition_number,
    dumps_matrix,
    expectation,
    loads_matrix,
    seminorm,
    spectral_decompose,
    validate_density,
    variance_sld,
)
from conftest import PAULI_X, PAULI_Y, PAULI_Z, diag_density, random_hermitian


class TestValidateDensity:
    def test_maximally_mixed_qubit(self):
        rho = diag_density([0.5, 0.5])
        assert np.allclose(rho.eigenvalues, [0.5, 0.5])

    def test_eigenvalues_sorted_descending(self):
        rho = diag_density([0.3, 0.4, 0.1, 0.2])
        assert np.allclose(rho.eigenvalues, [0.4, 0.3, 0.2, 0.1])

    def test_zero_eigenvalue_rejected(self):
        with pytest.raises(NotPositiveDefinite, match="floor"):
            diag_density([0.7, 0.3, 0.0])

    def test_not_hermitian(self):
        m = np.array([[0.5, 0.1], [0.3, 0.5]], dtype=complex)
        with pytest.raises(NotHermitian):
            validate_density(m)

    def test_trace_not_one(self):
        with pytest.raises(TraceNotOne, match="1.1"):
            validate_density(np.diag([0.7, 0.4]).astype(complex))

    def test_custom_floor(self):
        p = [1e-11, 1.0 - 1e-11]
        with pytest.raises(NotPositiveDefinite):
            diag_density(p)
        rho = diag_density(p, pd_floor=1e-12)
        assert rho.eigenvalues[-1] == pytest.approx(1e-11)

    def test_non_square_rejected(self):
        with pytest.raises(DimensionMismatch):
            validate_density(np.ones((2, 3)))


class TestSpectralDecomposition:
    def test_reconstruction_random_hermitian(self, rng):
        for dim in range(2, 9):
            m = random_hermitian(rng, dim).matrix
            dec = spectral_decompose(m)
            recon = (dec.eigenvectors * dec.eigenvalues) @ dec.eigenvectors.conj().T
            assert np.max(np.abs(recon - m)) <= 1e-10 * max(1.0, np.max(np.abs(m)))
            unit = dec.eigenvectors.conj().T @ dec.eigenvectors
            assert np.max(np.abs(unit - np.eye(dim))) <= 1e-10

    def test_repeated_decomposition_bit_identical(self, rng):
        m = random_hermitian(rng, 5).matrix
        a = spectral_decompose(m)
        b = spectral_decompose(m)
        assert np.array_equal(a.eigenvalues, b.eigenvalues)
        assert np.array_equal(a.eigenvectors, b.eigenvectors)

    def test_phase_convention(self, rng):
        for dim in (2, 3, 5):
            m = random_hermitian(rng, dim).matrix
            dec = spectral_decompose(m)
            for k in range(dim):
                col = dec.eigenvectors[:, k]
                j = int(np.argmax(np.abs(col)))
                assert col[j].imag == 0.0
                assert col[j].real > 0.0


class TestScalarFunctionals:
    def test_expectation_eigenstate(self):
        rho = diag_density([1.0 - 1e-11, 1e-11], pd_floor=1e-12)
        z = HermitianOperator(PAULI_Z)
        assert expectation(rho, z) == pytest.approx(1.0, abs=1e-9)

    def test_expectation_mixed_z(self):
        rho = diag_density([0.7, 0.3])
        assert expectation(rho, HermitianOperator(PAULI_Z)) == pytest.approx(0.4)

    def test_expectation_traceless_maximally_mixed(self):
        rho = diag_density([0.5, 0.5])
        assert expectation(rho, HermitianOperator(PAULI_X)) == pytest.approx(0.0, abs=1e-15)

    def test_expectation_dim_mismatch(self):
        rho = diag_density([0.5, 0.5])
        a = HermitianOperator(np.eye(3))
        with pytest.raises(DimensionMismatch):
            expectation(rho, a)

    def test_variance_eigenstate(self):
        rho = diag_density([1.0 - 1e-11, 1e-11], pd_floor=1e-12)
        assert variance_sld(rho, HermitianOperator(PAULI_Z)) == pytest.approx(0.0, abs=1e-9)

    def test_variance_maximally_mixed_z(self):
        rho = diag_density([0.5, 0.5])
        assert variance_sld(rho, HermitianOperator(PAULI_Z)) == pytest.approx(1.0)

    def test_variance_x_on_diagonal_state(self):
        rho = diag_density([0.7, 0.3])
        assert variance_sld(rho, HermitianOperator(PAULI_X)) == pytest.approx(1.0)

    def test_center_identity(self):
        rho = diag_density([0.7, 0.3])
        a0 = center(rho, HermitianOperator(np.eye(2)))
        assert np.allclose(a0.matrix, 0.0)

    def test_center_z(self):
        rho = diag_density([0.7, 0.3])
        a0 = center(rho, HermitianOperator(PAULI_Z))
        assert np.allclose(a0.matrix, np.diag([0.6, -1.4]))
        assert expectation(rho, a0) == pytest.approx(0.0, abs=1e-12)

    def test_center_offdiagonal_unchanged(self):
        rho = diag_density([0.7, 0.3])
        a0 = center(rho, HermitianOperator(PAULI_X))
        assert np.allclose(a0.matrix, PAULI_X)

    def test_condition_number(self):
        assert condition_number(diag_density([0.25, 0.25, 0.25, 0.25])) == pytest.approx(1.0)
        assert condition_number(diag_density([0.4, 0.3, 0.2, 0.1])) == pytest.approx(4.0)
        assert condition_number(diag_density([0.7, 0.3])) == pytest.approx(7.0 / 3.0)

    def test_seminorm(self):
        assert seminorm(HermitianOperator(PAULI_Z)) == pytest.approx(2.0)
        assert seminorm(HermitianOperator(np.eye(3))) == pytest.approx(0.0, abs=1e-14)
        assert seminorm(HermitianOperator(np.diag([3.0, 1.0, -2.0]))) == pytest.approx(5.0)


class TestCommutatorGenerator:
    def test_commuting_gives_zero(self):
        rho = diag_density([0.7, 0.3])
        rdot = commutator_generator(rho, HermitianOperator(PAULI_Z))
        assert np.allclose(rdot.matrix, 0.0)

    def test_qubit_x_drive_off_diagonal(self):
        p0, p1 = 0.8, 0.2
        rho = diag_density([p0, p1])
        rdot = commutator_generator(rho, HermitianOperator(PAULI_X))
        assert abs(rdot.matrix[0, 1]) == pytest.approx(abs(p0 - p1))

    def test_qutrit_ladder_pair_weight(self):
        # v_01 = 2|rdot_01|^2 = Omega^2 (p1 - p0)^2 / 2 for the Y-type ladder drive
        omega = 2.0 * np.pi * 10.0
        p = [0.5, 0.3, 0.2]
        h = np.zeros((3, 3), dtype=complex)
        h[0, 1] = 1j * omega / 2.0
        h[1, 2] = 1j * omega / 2.0
        rho = diag_density(p)
        rdot = commutator_generator(rho, HermitianOperator(h + h.conj().T))
        v01 = 2.0 * abs(rdot.matrix[0, 1]) ** 2
        assert v01 == pytest.approx(omega**2 * (p[1] - p[0]) ** 2 / 2.0, rel=1e-12)

    def test_traceless_hermitian_random(self, rng):
        for _ in range(20):
            dim = int(rng.integers(2, 7))
            from conftest import random_density

            rho = random_density(rng, dim)
            h = random_hermitian(rng, dim)
            rdot = commutator_generator(rho, h)
            assert np.max(np.abs(rdot.matrix - rdot.matrix.conj().T)) <= 1e-12
            assert abs(np.trace(rdot.matrix)) <= 1e-12


class TestWrapperTypes:
    def test_hermitian_operator_rejects_nonhermitian(self):
        with pytest.raises(NotHermitian):
            HermitianOperator(np.array([[0, 1], [2, 0]], dtype=complex))

    def test_tangent_rejects_traceful(self):
        with pytest.raises(NotTraceless):
            TangentOperator(np.eye(2))

    def test_matrices_are_read_only(self):
        rho = diag_density([0.6, 0.4])
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 9.0


class TestMatrixJson:
    def test_round_trip_exact(self, rng):
        m = random_hermitian(rng, 4).matrix
        again = loads_matrix(dumps_matrix(m))
        assert np.array_equal(again, m)

    def test_seventeen_digit_reals(self):
        m = np.array([[0.1 + 0.2j]])
        text = dumps_matrix(m)
        assert "0.10000000000000001" in text
        assert "0.20000000000000001" in text
        assert '"dim": 1' in text
