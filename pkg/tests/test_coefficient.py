import numpy as np
import pytest

from psicorr import exceptions as exc
from psicorr.coefficient import (
    classical_rho,
    psi_from_correlation,
    psi_hat,
    psi_star,
    rho_aggregate,
)
from psicorr.linalg import correlation_from_cov


def block_pair_matrix(alpha, gamma):
    """4x4 with X1-X2 correlated at alpha and X3-X4 at gamma."""
    V = np.eye(4)
    V[0, 1] = V[1, 0] = alpha
    V[2, 3] = V[3, 2] = gamma
    return V


def block_diag_pairs(alpha, p):
    """p x p (p even) block-diagonal correlation of 2x2 blocks."""
    V = np.eye(p)
    for k in range(0, p, 2):
        V[k, k + 1] = V[k + 1, k] = alpha
    return V


def compound_symmetry(alpha, p):
    V = np.full((p, p), alpha)
    np.fill_diagonal(V, 1.0)
    return V


def random_correlation(p, rng):
    A = rng.standard_normal((p, p))
    return correlation_from_cov(A @ A.T + np.eye(p))


class TestPsiFromCorrelation:
    def test_identity_is_zero(self):
        assert psi_from_correlation(np.eye(3)) == 0.0

    def test_p2_equals_abs_pearson(self):
        V = np.array([[1.0, 0.5], [0.5, 1.0]])
        assert psi_from_correlation(V) == pytest.approx(0.5, abs=1e-12)
        V[0, 1] = V[1, 0] = -0.5
        assert psi_from_correlation(V) == pytest.approx(0.5, abs=1e-12)

    def test_block_diagonal_equals_block_correlation(self):
        assert psi_from_correlation(block_diag_pairs(0.6, 4)) == pytest.approx(
            0.6, abs=1e-12
        )

    def test_singular_gives_one(self):
        V = np.ones((3, 3))
        assert psi_from_correlation(V) == 1.0

    def test_permutation_invariance(self):
        rng = np.random.default_rng(0)
        V = random_correlation(7, rng)
        base = psi_from_correlation(V)
        for _ in range(20):
            perm = rng.permutation(7)
            assert psi_from_correlation(V[np.ix_(perm, perm)]) == pytest.approx(
                base, abs=1e-12
            )

    def test_monotone_in_compound_symmetry(self):
        values = [
            psi_from_correlation(compound_symmetry(a, 5))
            for a in np.linspace(0.0, 0.95, 30)
        ]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_range_and_zero_iff_identity(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            v = psi_from_correlation(random_correlation(5, rng))
            assert 0.0 <= v <= 1.0
        assert psi_from_correlation(np.eye(6)) == 0.0
        assert psi_from_correlation(compound_symmetry(0.01, 6)) > 0.0


class TestPsiHat:
    def test_p2_matches_pearson(self):
        rng = np.random.default_rng(2)
        X = rng.standard_normal((200, 2))
        X[:, 1] = 0.4 * X[:, 0] + 0.6 * X[:, 1]
        r = np.corrcoef(X.T)[0, 1]
        assert psi_hat(X) == pytest.approx(abs(r), abs=1e-12)

    def test_duplicated_column_gives_one(self):
        rng = np.random.default_rng(3)
        X = rng.standard_normal((50, 3))
        X[:, 2] = X[:, 0]
        assert psi_hat(X) == 1.0

    def test_affine_invariance(self):
        rng = np.random.default_rng(4)
        X = rng.standard_normal((100, 4))
        base = psi_hat(X)
        Y = X * np.array([2.0, -3.0, 0.5, 10.0]) + np.array([1.0, 0.0, -5.0, 2.0])
        assert psi_hat(Y) == pytest.approx(base, abs=1e-10)

    def test_constant_column_error(self):
        X = np.ones((10, 3))
        X[:, 1] = np.arange(10)
        X[:, 2] = np.arange(10) ** 2
        with pytest.raises(exc.DegenerateVariableError):
            psi_hat(X)

    def test_p_ge_n_warns(self):
        rng = np.random.default_rng(5)
        X = rng.standard_normal((4, 5))
        with pytest.warns(UserWarning, match="p=5 >= n=4"):
            psi_hat(X)

    def test_monte_carlo_consistency(self):
        from psicorr.datagen import SigmaSpec, sample_icm, solve_phi_for_psi

        phi = solve_phi_for_psi("cs", 5, 0.6)
        X = sample_icm(10000, SigmaSpec(case="cs", phi=phi, p=5), "normal", seed=11)
        assert abs(psi_hat(X) - 0.6) < 0.02


class TestClassicalRho:
    def test_identity_zero(self):
        for j in range(3):
            assert classical_rho(np.eye(3), j) == 0.0

    def test_p2_any_dep_index(self):
        V = np.array([[1.0, 0.37], [0.37, 1.0]])
        assert classical_rho(V, 0) == pytest.approx(0.37, abs=1e-10)
        assert classical_rho(V, 1) == pytest.approx(0.37, abs=1e-10)

    def test_block_pair_matrix(self):
        V = block_pair_matrix(0.3, 0.7)
        # X4's only correlated partner is X3 at 0.7
        assert classical_rho(V, 3) == pytest.approx(0.7, abs=1e-10)
        assert classical_rho(V, 0) == pytest.approx(0.3, abs=1e-10)

    def test_both_routes_agree_on_random_matrices(self):
        # quadratic-form and determinant-ratio evaluations agree to 1e-10;
        # classical_rho itself raises if they do not
        rng = np.random.default_rng(6)
        for _ in range(100):
            p = rng.integers(2, 11)
            V = random_correlation(int(p), rng)
            j = int(rng.integers(0, p))
            rho = classical_rho(V, j)
            assert 0.0 <= rho <= 1.0

    def test_singular_block(self):
        V = np.eye(3)
        V[1, 2] = V[2, 1] = 1.0
        with pytest.raises(exc.SingularBlockError):
            classical_rho(V, 0)

    def test_accepts_data_matrix(self):
        rng = np.random.default_rng(7)
        X = rng.standard_normal((300, 3))
        V = correlation_from_cov(np.cov(X.T))
        assert classical_rho(X, 0) == pytest.approx(classical_rho(V, 0), abs=1e-10)


class TestRhoAggregate:
    def test_identity(self):
        assert rho_aggregate(np.eye(4), "average") == 0.0
        assert rho_aggregate(np.eye(4), "max") == 0.0

    def test_max_flat_while_psi_increases(self):
        gamma = 0.7
        maxima, psis = [], []
        for alpha in np.linspace(0.0, gamma, 8):
            V = block_pair_matrix(alpha, gamma)
            maxima.append(rho_aggregate(V, "max"))
            psis.append(psi_from_correlation(V))
        assert all(m == pytest.approx(gamma, abs=1e-10) for m in maxima)
        assert all(b > a for a, b in zip(psis, psis[1:]))

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            rho_aggregate(np.eye(3), "median")


class TestPsiStar:
    def test_identity(self):
        assert psi_star(np.eye(5)) == 0.0

    def test_block_diagonal_closed_form(self):
        for alpha, p in [(0.3, 4), (0.6, 10), (0.2, 40)]:
            expected = np.sqrt(1.0 - (1.0 - alpha**2) ** (p / 2))
            assert psi_star(block_diag_pairs(alpha, p)) == pytest.approx(
                expected, abs=1e-10
            )

    def test_drifts_to_one_while_psi_stays_put(self):
        alpha = 0.3
        small = psi_star(block_diag_pairs(alpha, 40))
        large = psi_star(block_diag_pairs(alpha, 400))
        assert large > small
        assert large > 0.999
        assert psi_from_correlation(block_diag_pairs(alpha, 400)) == pytest.approx(
            alpha, abs=1e-12
        )
