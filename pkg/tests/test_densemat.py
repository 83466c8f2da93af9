import numpy as np
import pytest

from leversketch import densemat
from leversketch.densemat import (
    exact_least_squares,
    exact_ridge,
    frobenius_norm,
    matrix,
    column_matrix,
    orthonormal_basis,
    read_matrix_csv,
    spectral_norm,
    svd_factor,
    write_matrix_csv,
)
from leversketch.errors import AllZeroMatrix, DimensionMismatch, NegativeLambda


def random_matrix(rng, n, d):
    return matrix(rng.standard_normal((n, d)))


class TestDenseMatrix:
    def test_row_sparsity(self):
        M = matrix([[1.0, 0.0, 2.0], [0.0, 0.0, 0.0], [3.0, 0.0, 0.0]])
        assert M.row_sparsity == 2
        assert M.rows == 3 and M.cols == 3

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            matrix([[1.0, np.nan]])
        with pytest.raises(ValueError):
            matrix([[np.inf, 1.0]])

    def test_data_read_only(self):
        M = matrix([[1.0, 2.0]])
        with pytest.raises(ValueError):
            M.data[0, 0] = 5.0


class TestOrthonormalBasis:
    def test_identity_already_orthonormal(self):
        fac = orthonormal_basis(matrix(np.eye(3)))
        assert fac.rank == 3
        np.testing.assert_allclose(fac.orthonormal_basis.data, np.eye(3))

    def test_single_column_normalization(self):
        fac = orthonormal_basis(matrix([[2.0], [0.0]]))
        assert fac.rank == 1
        np.testing.assert_allclose(fac.orthonormal_basis.data, [[1.0], [0.0]])

    def test_three_by_two(self):
        # oracle: dense QR, then check gram + reconstruction
        A = matrix([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        fac = orthonormal_basis(A)
        u = fac.orthonormal_basis.data
        assert fac.rank == 2
        assert np.max(np.abs(u.T @ u - np.eye(2))) <= 1e-10
        recon = u @ fac.right_factor
        assert np.linalg.norm(recon - A.data) <= 1e-10 * np.linalg.norm(A.data)

    def test_rank_deficient_reconstruction(self):
        rng = np.random.default_rng(5)
        base = rng.standard_normal((20, 2))
        A = matrix(np.hstack([base, base @ rng.standard_normal((2, 3))]))
        fac = orthonormal_basis(A)
        assert fac.rank == 2
        recon = fac.orthonormal_basis.data @ fac.right_factor
        assert np.linalg.norm(recon - A.data) <= 1e-10 * np.linalg.norm(A.data)

    def test_all_zero_rejected(self):
        with pytest.raises(AllZeroMatrix):
            orthonormal_basis(matrix(np.zeros((3, 2))))

    def test_deterministic(self):
        rng = np.random.default_rng(7)
        a = rng.standard_normal((30, 5))
        u1 = orthonormal_basis(matrix(a)).orthonormal_basis.data
        u2 = orthonormal_basis(matrix(a)).orthonormal_basis.data
        assert np.array_equal(u1, u2)


class TestSvdFactor:
    def test_diagonal(self):
        fac = svd_factor(matrix(np.diag([2.0, 1.0])))
        np.testing.assert_allclose(fac.singular_values, [2.0, 1.0])

    def test_identity(self):
        fac = svd_factor(matrix(np.eye(4)))
        np.testing.assert_allclose(fac.singular_values, np.ones(4))

    def test_rank_one_column(self):
        # sigma_1 equals the norm of the only nonzero column
        fac = svd_factor(matrix([[3.0, 0.0], [4.0, 0.0]]))
        assert fac.rank == 1
        np.testing.assert_allclose(fac.singular_values, [5.0])

    def test_reconstruction(self):
        rng = np.random.default_rng(11)
        A = random_matrix(rng, 40, 7)
        fac = svd_factor(A)
        recon = (
            fac.orthonormal_basis.data
            * fac.singular_values[None, :]
        ) @ fac.right_singular.T
        assert np.linalg.norm(recon - A.data) <= 1e-9 * np.linalg.norm(A.data)

    def test_same_column_space_as_qr(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            A = random_matrix(rng, 50, 6)
            uq = orthonormal_basis(A).orthonormal_basis.data
            us = svd_factor(A).orthonormal_basis.data
            gap = np.linalg.norm(uq @ uq.T - us @ us.T, 2)
            assert gap <= 1e-8


class TestExactLeastSquares:
    def test_identity_design(self):
        rng = np.random.default_rng(3)
        B = random_matrix(rng, 5, 2)
        X = exact_least_squares(matrix(np.eye(5)), B)
        np.testing.assert_allclose(X.data, B.data)

    def test_consistent_system(self):
        rng = np.random.default_rng(4)
        A = random_matrix(rng, 30, 4)
        X = exact_least_squares(A, A)
        np.testing.assert_allclose(X.data, np.eye(4), atol=1e-10)

    def test_one_dimensional_calculus_oracle(self):
        # minimize (x-0)^2 + (x-2)^2: derivative zero at x = 1, objective 2
        A = matrix([[1.0], [1.0]])
        b = column_matrix([0.0, 2.0])
        X = exact_least_squares(A, b)
        assert abs(X.data[0, 0] - 1.0) <= 1e-12
        resid_sq = np.linalg.norm(A.data @ X.data - b.data) ** 2
        assert abs(resid_sq - 2.0) <= 1e-12

    def test_min_norm_for_rank_deficient(self):
        A = matrix([[1.0, 1.0], [1.0, 1.0]])
        b = column_matrix([2.0, 2.0])
        X = exact_least_squares(A, b).data[:, 0]
        # any solution has x0 + x1 = 2; the min-norm one is (1, 1)
        np.testing.assert_allclose(X, [1.0, 1.0], atol=1e-10)

    def test_residual_orthogonality(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            A = random_matrix(rng, 60, 5)
            B = random_matrix(rng, 60, 3)
            X = exact_least_squares(A, B)
            lhs = np.linalg.norm(A.data.T @ (A.data @ X.data - B.data))
            assert lhs <= 1e-8 * frobenius_norm(A) * frobenius_norm(B)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            exact_least_squares(matrix(np.ones((3, 1))), matrix(np.ones((4, 1))))


class TestExactRidge:
    def test_closed_form_scalar(self):
        # x = A^T b / (A^T A + lam) = 2 / (2 + 2)
        x = exact_ridge(matrix([[1.0], [1.0]]), np.array([1.0, 1.0]), 2.0)
        assert abs(x[0] - 0.5) <= 1e-12

    def test_lambda_zero_delegates(self):
        rng = np.random.default_rng(23)
        A = random_matrix(rng, 40, 3)
        b = rng.standard_normal(40)
        x0 = exact_ridge(A, b, 0.0)
        xl = exact_least_squares(A, column_matrix(b)).data[:, 0]
        np.testing.assert_allclose(x0, xl, atol=1e-12)

    def test_huge_lambda_kills_solution(self):
        rng = np.random.default_rng(29)
        A = random_matrix(rng, 50, 4)
        b = rng.standard_normal(50)
        lam = 1e12
        x = exact_ridge(A, b, lam)
        atb = np.linalg.norm(A.data.T @ b)
        assert np.linalg.norm(x) <= 1e-6 * atb / 1e6
        obj = np.linalg.norm(A.data @ x - b) ** 2 + lam * np.linalg.norm(x) ** 2
        assert abs(obj - np.linalg.norm(b) ** 2) <= 1e-6 * np.linalg.norm(b) ** 2

    def test_normal_equations(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            A = random_matrix(rng, 60, 5)
            b = rng.standard_normal(60)
            lam = float(rng.uniform(0.01, 10.0))
            x = exact_ridge(A, b, lam)
            lhs = np.linalg.norm(
                (A.data.T @ A.data + lam * np.eye(5)) @ x - A.data.T @ b
            )
            bound = 1e-8 * (spectral_norm(A) ** 2 + lam) * np.linalg.norm(x) + 1e-12
            assert lhs <= bound

    def test_negative_lambda_rejected(self):
        with pytest.raises(NegativeLambda):
            exact_ridge(matrix([[1.0]]), np.array([1.0]), -1.0)


class TestSpectralNorm:
    def test_zero_matrix(self):
        assert spectral_norm(matrix(np.zeros((4, 3)))) == 0.0

    def test_diagonal(self):
        assert spectral_norm(matrix(np.diag([3.0, 1.0]))) == 3.0

    def test_symmetric_swap(self):
        # eigenvalues of [[0,1],[1,0]] are +-1
        assert abs(spectral_norm(matrix([[0.0, 1.0], [1.0, 0.0]])) - 1.0) <= 1e-12

    def test_power_iteration_path(self):
        rng = np.random.default_rng(37)
        a = rng.standard_normal((600, 520))
        got = spectral_norm(matrix(a))
        want = np.linalg.norm(a, 2)
        assert abs(got - want) <= 1e-8 * want

    def test_norm_ordering_property(self):
        rng = np.random.default_rng(41)
        for _ in range(100):
            n = int(rng.integers(2, 257))
            d = int(rng.integers(1, 33))
            A = random_matrix(rng, n, d)
            sn = spectral_norm(A)
            fn = frobenius_norm(A)
            k = svd_factor(A).rank
            assert sn <= fn * (1 + 1e-12)
            assert fn <= np.sqrt(k) * sn * (1 + 1e-12)


class TestCsvRoundTrip:
    def test_bitwise(self, tmp_path):
        rng = np.random.default_rng(43)
        A = matrix(rng.standard_normal((17, 5)) * 10.0 ** rng.integers(-8, 8, (17, 5)))
        path = tmp_path / "m.csv"
        write_matrix_csv(A, path)
        back = read_matrix_csv(path)
        assert np.array_equal(A.data, back.data)
        write_matrix_csv(back, tmp_path / "m2.csv")
        assert (tmp_path / "m.csv").read_bytes() == (tmp_path / "m2.csv").read_bytes()

    def test_single_column(self, tmp_path):
        v = column_matrix([1.5, -2.25, 1e-300])
        path = tmp_path / "v.csv"
        write_matrix_csv(v, path)
        back = read_matrix_csv(path)
        assert back.shape == (3, 1)
        assert np.array_equal(v.data, back.data)
