import numpy as np
import pytest

from psicorr import exceptions as exc
from psicorr.linalg import (
    check_correlation,
    check_data_matrix,
    correlation_from_cov,
    frobenius_norm_sq,
    hadamard,
    log_det_psd,
    sample_mean_cov,
    sqrt_psd,
    trace,
)


def random_spd(p, rng, scale=1.0):
    A = rng.standard_normal((p, p))
    return A @ A.T + scale * np.eye(p)


def random_correlation(p, rng):
    return correlation_from_cov(random_spd(p, rng))


def det_by_cofactor(M):
    """Independent elementary determinant (Laplace expansion), p <= 5."""
    M = np.asarray(M)
    p = M.shape[0]
    if p == 1:
        return M[0, 0]
    total = 0.0
    for j in range(p):
        minor = np.delete(np.delete(M, 0, axis=0), j, axis=1)
        total += (-1) ** j * M[0, j] * det_by_cofactor(minor)
    return total


class TestSampleMeanCov:
    def test_two_point_example(self):
        mu, cov = sample_mean_cov([[0.0, 0.0], [2.0, 2.0]])
        assert np.allclose(mu, [1.0, 1.0])
        assert np.allclose(cov, [[2.0, 2.0], [2.0, 2.0]])

    def test_constant_column_gives_zero_variance(self):
        _, cov = sample_mean_cov([[1.0, 0.0], [1.0, 1.0], [1.0, 2.0]])
        assert cov[0, 0] == 0.0

    def test_insufficient_sample(self):
        with pytest.raises(exc.InsufficientSampleError):
            sample_mean_cov([[1.0, 2.0]])

    def test_consistency_against_generating_sigma(self):
        rng = np.random.default_rng(7)
        Sigma = np.array([[2.0, 0.6], [0.6, 1.0]])
        L = np.linalg.cholesky(Sigma)
        errs = []
        for n in (100, 10000):
            X = rng.standard_normal((n, 2)) @ L.T
            _, cov = sample_mean_cov(X)
            errs.append(np.abs(cov - Sigma).max())
        assert errs[1] < errs[0]
        assert errs[1] < 0.05


class TestCorrelationFromCov:
    def test_identity(self):
        assert np.allclose(correlation_from_cov(np.eye(4)), np.eye(4))

    def test_perfectly_correlated_pair(self):
        V = correlation_from_cov([[4.0, 2.0], [2.0, 1.0]])
        assert np.allclose(V, np.ones((2, 2)))

    def test_nonpositive_diagonal_names_column(self):
        with pytest.raises(exc.DegenerateVariableError) as err:
            correlation_from_cov([[1.0, 0.0], [0.0, 0.0]])
        assert err.value.column == 1

    def test_random_spd_properties(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            V = correlation_from_cov(random_spd(6, rng))
            assert np.allclose(np.diag(V), 1.0)
            assert np.linalg.eigvalsh(V)[0] >= -1e-10
            assert np.abs(V).max() <= 1.0

    def test_idempotent(self):
        rng = np.random.default_rng(1)
        V = correlation_from_cov(random_spd(5, rng))
        assert np.array_equal(correlation_from_cov(V), V)


class TestLogDetPsd:
    def test_identity(self):
        assert log_det_psd(np.eye(7)) == 0.0

    def test_diag_2_3(self):
        assert log_det_psd(np.diag([2.0, 3.0])) == pytest.approx(np.log(6.0), rel=1e-12)

    def test_matches_eigenvalue_product(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            M = random_spd(6, rng)
            expected = np.sum(np.log(np.linalg.eigvalsh(M)))
            assert log_det_psd(M) == pytest.approx(expected, rel=1e-10)

    def test_singular_sentinel(self):
        M = np.ones((3, 3))
        assert log_det_psd(M) == -np.inf

    def test_agrees_with_cofactor_expansion(self):
        rng = np.random.default_rng(3)
        for p in (2, 3, 4, 5):
            M = random_spd(p, rng)
            assert np.exp(log_det_psd(M)) == pytest.approx(
                det_by_cofactor(M), rel=1e-9
            )


class TestSqrtPsd:
    def test_identity(self):
        assert np.allclose(sqrt_psd(np.eye(3)), np.eye(3))

    def test_diag(self):
        assert np.allclose(sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))

    def test_multiply_back(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            V = random_correlation(8, rng)
            S = sqrt_psd(V)
            err = np.linalg.norm(S @ S - V) / np.linalg.norm(V)
            assert err < 1e-8
            assert np.allclose(S, S.T)

    def test_commutes_with_input(self):
        rng = np.random.default_rng(5)
        M = random_spd(6, rng)
        S = sqrt_psd(M)
        assert np.linalg.norm(S @ M - M @ S) <= 1e-8 * np.linalg.norm(M)

    def test_not_psd_raises(self):
        with pytest.raises(exc.NotPSDError):
            sqrt_psd(np.diag([1.0, -0.5]))


class TestHadamardAndFriends:
    def test_hadamard_identity(self):
        I = np.eye(4)
        assert np.array_equal(hadamard(I, I), I)

    def test_hadamard_dimension_mismatch(self):
        with pytest.raises(exc.DimensionError):
            hadamard(np.eye(2), np.eye(3))

    def test_frobenius_identity(self):
        assert frobenius_norm_sq(np.eye(9)) == 9.0

    def test_compound_symmetry_offdiagonal_norm(self):
        p, alpha = 6, 0.3
        V = np.full((p, p), alpha)
        np.fill_diagonal(V, 1.0)
        assert frobenius_norm_sq(V - np.eye(p)) == pytest.approx(
            p * (p - 1) * alpha**2, rel=1e-12
        )

    def test_trace(self):
        assert trace(np.diag([1.0, 2.0, 3.5])) == 6.5


class TestValidation:
    def test_nonfinite_rejected(self):
        with pytest.raises(exc.DataError):
            check_data_matrix([[1.0, np.nan], [2.0, 3.0]])

    def test_constant_column_rejected(self):
        with pytest.raises(exc.DegenerateVariableError):
            check_data_matrix([[1.0, 2.0], [1.0, 3.0]])

    def test_asymmetric_rejected(self):
        with pytest.raises(exc.NotSymmetricError):
            log_det_psd([[1.0, 0.5], [0.2, 1.0]])

    def test_correlation_checks(self):
        with pytest.raises(exc.DataError):
            check_correlation([[2.0, 0.0], [0.0, 2.0]])
