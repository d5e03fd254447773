import math

import numpy as np
import pytest
from scipy import sparse

from spinsampler import linalg
from spinsampler.exceptions import DimensionError, OperatorError, SizeLimitError


class TestHaarUnitary:
    def test_one_by_one_is_unit_modulus(self):
        for seed in (0, 1, 17):
            u = linalg.haar_unitary(1, seed)
            assert abs(abs(u[0, 0]) - 1.0) < 1e-12

    def test_unitarity_defect(self):
        u = linalg.haar_unitary(4, 7)
        assert linalg.unitarity_defect(u) <= 1e-10

    def test_zero_dimension_rejected(self):
        with pytest.raises(DimensionError):
            linalg.haar_unitary(0, 1)

    def test_same_seed_same_matrix(self):
        a = linalg.haar_unitary(5, 123)
        b = linalg.haar_unitary(5, 123)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, linalg.haar_unitary(5, 124))

    def test_first_moment_m2(self):
        # E|U_11|^2 = 1/2; Monte Carlo over 1e5 seeded draws, 3 sigma window.
        trials = 100_000
        acc = 0.0
        for k in range(trials):
            u = linalg.haar_unitary(2, linalg.derive_seed(2024, k))
            acc += abs(u[0, 0]) ** 2
        mean = acc / trials
        var = 2.0 / (2 * 3) - 0.25
        assert abs(mean - 0.5) <= 3.0 * math.sqrt(var / trials)

    @pytest.mark.parametrize("m", [2, 4, 8])
    def test_first_moment_every_entry(self, m):
        trials = 10_000
        acc = np.zeros((m, m))
        for k in range(trials):
            acc += np.abs(linalg.haar_unitary(m, linalg.derive_seed(999, m, k))) ** 2
        mean = acc / trials
        var = 2.0 / (m * (m + 1)) - 1.0 / m**2
        assert np.max(np.abs(mean - 1.0 / m)) <= 4.0 * math.sqrt(var / trials)


class TestDeterminant:
    def test_identity(self):
        assert linalg.determinant(np.eye(3)) == pytest.approx(1.0)

    def test_empty_matrix_convention(self):
        assert linalg.determinant(np.zeros((0, 0))) == 1.0 + 0.0j

    def test_hand_computed(self):
        # cofactor expansion of [[1,2],[3,4]] gives 1*4 - 2*3 = -2
        assert linalg.determinant([[1, 2], [3, 4]]) == pytest.approx(-2.0)

    def test_non_square_rejected(self):
        with pytest.raises(DimensionError):
            linalg.determinant(np.ones((2, 3)))

    def test_multiplicativity(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
            b = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
            lhs = linalg.determinant(a @ b)
            rhs = linalg.determinant(a) * linalg.determinant(b)
            assert abs(lhs - rhs) <= 1e-8 * abs(rhs)


class TestDenseEvolution:
    def test_zero_hamiltonian(self):
        v = np.array([0.6, 0.8j], dtype=complex)
        out = linalg.matrix_exponential_apply(np.zeros((2, 2)), v, 3.7)
        assert np.allclose(out, v, atol=1e-14)

    def test_scalar_phase(self):
        out = linalg.matrix_exponential_apply(np.array([[1.0]]), np.array([1.0]), math.pi)
        assert abs(out[0] - (-1.0)) < 1e-12

    def test_two_level_flip(self):
        # closed form: exp(-i*sx*t) = cos(t) I - i sin(t) sx
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        out = linalg.matrix_exponential_apply(sx, np.array([1.0, 0.0]), math.pi / 2)
        assert np.allclose(out, [0.0, -1.0j], atol=1e-12)

    def test_non_hermitian_rejected(self):
        with pytest.raises(OperatorError):
            linalg.matrix_exponential_apply(np.array([[0, 1], [0, 0]], dtype=complex),
                                            np.array([1.0, 0.0]), 1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            linalg.matrix_exponential_apply(np.eye(3), np.ones(2), 1.0)

    def test_norm_conservation_dim_500(self):
        rng = np.random.default_rng(11)
        z = rng.standard_normal((500, 500)) + 1j * rng.standard_normal((500, 500))
        h = (z + z.conj().T) / 2
        v = rng.standard_normal(500) + 1j * rng.standard_normal(500)
        out = linalg.matrix_exponential_apply(h, v, 0.37)
        assert abs(np.linalg.norm(out) - np.linalg.norm(v)) <= 1e-9 * np.linalg.norm(v)

    def test_size_limit(self, monkeypatch):
        monkeypatch.setattr(linalg, "DENSE_EVOLUTION_LIMIT", 4)
        with pytest.raises(SizeLimitError):
            linalg.matrix_exponential_apply(np.eye(5), np.ones(5), 1.0)


class TestSparseEvolution:
    def _random_sparse_hermitian(self, dim, seed):
        rng = np.random.default_rng(seed)
        z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        z[np.abs(z) < 1.0] = 0.0
        h = (z + z.conj().T) / 2
        return sparse.csr_matrix(h), h

    def test_matches_dense_path(self):
        hs, hd = self._random_sparse_hermitian(60, 3)
        v = np.linalg.qr(np.random.default_rng(4).standard_normal((60, 1)))[0][:, 0].astype(complex)
        a = linalg.matrix_exponential_apply(hd, v, 0.83)
        b = linalg.matrix_exponential_apply_sparse(hs, v, 0.83)
        assert np.max(np.abs(a - b)) < 1e-10

    def test_deterministic(self):
        hs, _ = self._random_sparse_hermitian(40, 9)
        v = np.ones(40, dtype=complex) / math.sqrt(40)
        a = linalg.matrix_exponential_apply_sparse(hs, v, 1.3)
        b = linalg.matrix_exponential_apply_sparse(hs, v, 1.3)
        assert np.array_equal(a, b)

    def test_non_hermitian_rejected(self):
        h = sparse.csr_matrix(np.array([[0, 1], [0, 0]], dtype=complex))
        with pytest.raises(OperatorError):
            linalg.matrix_exponential_apply_sparse(h, np.array([1.0, 0.0]), 1.0)


class TestSeeds:
    def test_child_seed_streams_differ(self):
        a = linalg.rng_from_seed(linalg.child_seed(7, 0)).random(4)
        b = linalg.rng_from_seed(linalg.child_seed(7, 1)).random(4)
        assert not np.array_equal(a, b)

    def test_derive_seed_stable(self):
        assert linalg.derive_seed(7, 0) == linalg.derive_seed(7, 0)
        assert linalg.derive_seed(7, 0) != linalg.derive_seed(7, 1)
