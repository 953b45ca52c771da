import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framelab import numerics
from framelab.errors import NonSquareError, NotHermitianError, ValidationError

from conftest import complex_rng_matrix


class TestHermitianEig:
    def test_identity(self):
        values, vectors = numerics.hermitian_eig(np.eye(3))
        np.testing.assert_allclose(values, [1.0, 1.0, 1.0])
        np.testing.assert_allclose(vectors @ vectors.conj().T, np.eye(3), atol=1e-12)

    def test_diagonal_sorted_ascending(self):
        values, _ = numerics.hermitian_eig(np.diag([1.0, 0.25, 1.0 / 9.0]))
        np.testing.assert_allclose(values, [1.0 / 9.0, 0.25, 1.0])

    def test_mercedes_frame_operator(self):
        # sum the three rank-one projectors of the planar equiangular triple by hand
        vectors = [
            np.array([1.0, 0.0]),
            np.array([-0.5, np.sqrt(3) / 2]),
            np.array([-0.5, -np.sqrt(3) / 2]),
        ]
        s = sum(np.outer(v, v.conj()) for v in vectors)
        values, _ = numerics.hermitian_eig(s)
        np.testing.assert_allclose(values, [1.5, 1.5], atol=1e-14)

    def test_non_square_rejected(self):
        with pytest.raises(NonSquareError):
            numerics.hermitian_eig(np.ones((2, 3)))

    def test_asymmetry_rejected(self):
        a = np.array([[1.0, 1.0], [0.0, 1.0]])
        with pytest.raises(NotHermitianError):
            numerics.hermitian_eig(a)

    def test_nan_rejected(self):
        with pytest.raises(ValidationError):
            numerics.hermitian_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(seed=st.integers(0, 2**32 - 1), dim=st.integers(1, 12))
    def test_reconstruction(self, seed, dim):
        rng = np.random.default_rng(seed)
        m = complex_rng_matrix(rng, dim, dim)
        a = m + m.conj().T
        values, vectors = numerics.hermitian_eig(a)
        rebuilt = vectors @ np.diag(values) @ vectors.conj().T
        scale = max(np.max(np.abs(a)), 1.0)
        assert np.max(np.abs(rebuilt - a)) <= 1e-10 * scale


class TestSvd:
    def test_zero_matrix(self):
        _, s, _ = numerics.svd(np.zeros((3, 2)))
        np.testing.assert_allclose(s, 0.0)

    def test_unitary(self):
        q = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)
        _, s, _ = numerics.svd(q)
        np.testing.assert_allclose(s, [1.0, 1.0], atol=1e-14)

    def test_rank_one_outer_product(self):
        u = 2.0 * np.array([0.6, 0.8, 0.0])
        v = 3.0 * np.array([1.0, 0.0])
        a = np.outer(u, v.conj())
        _, s, _ = numerics.svd(a)
        np.testing.assert_allclose(s[0], 6.0, atol=1e-12)
        np.testing.assert_allclose(s[1:], 0.0, atol=1e-12)

    def test_factorization(self, rng):
        a = complex_rng_matrix(rng, 5, 3)
        u, s, v = numerics.svd(a)
        sigma = np.zeros((5, 3))
        sigma[:3, :3] = np.diag(s)
        np.testing.assert_allclose(u @ sigma @ v.conj().T, a, atol=1e-12)


class TestPinv:
    def test_identity(self):
        np.testing.assert_allclose(numerics.pinv(np.eye(4)), np.eye(4), atol=1e-14)

    def test_singular_diagonal(self):
        np.testing.assert_allclose(
            numerics.pinv(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]), atol=1e-14
        )

    def test_tall_isometry(self, rng):
        m = complex_rng_matrix(rng, 7, 3)
        q, _ = np.linalg.qr(m)
        np.testing.assert_allclose(numerics.pinv(q), q.conj().T, atol=1e-12)

    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_penrose_identities(self, seed):
        rng = np.random.default_rng(seed)
        a = complex_rng_matrix(rng, 6, 4)
        p = numerics.pinv(a)
        scale = max(np.max(np.abs(p)), 1.0)
        assert np.max(np.abs(a @ p @ a - a)) <= 1e-9 * scale
        assert np.max(np.abs(p @ a @ p - p)) <= 1e-9 * scale
        assert np.max(np.abs((a @ p).conj().T - a @ p)) <= 1e-9 * scale
        assert np.max(np.abs((p @ a).conj().T - p @ a)) <= 1e-9 * scale

    def test_involution_on_full_rank(self, rng):
        a = complex_rng_matrix(rng, 5, 5) + 2 * np.eye(5)
        back = numerics.pinv(numerics.pinv(a))
        assert np.max(np.abs(back - a)) <= 1e-8 * np.max(np.abs(a))


class TestRank:
    def test_zero(self):
        assert numerics.rank(np.zeros((4, 4))) == 0

    def test_identity(self):
        assert numerics.rank(np.eye(4)) == 4

    def test_generic_full_rank(self, rng):
        a = complex_rng_matrix(rng, 12, 5)
        # oracle: count singular values via an independent svd call
        s = np.linalg.svd(a, compute_uv=False)
        assert int(np.sum(s > 1e-10 * s[0] * 12)) == 5
        assert numerics.rank(a) == 5

    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(
        seed=st.integers(0, 2**32 - 1),
        rows=st.integers(1, 10),
        cols=st.integers(1, 10),
    )
    def test_rank_plus_nullity(self, seed, rows, cols):
        rng = np.random.default_rng(seed)
        a = complex_rng_matrix(rng, rows, cols)
        assert numerics.rank(a) + numerics.nullity(a) == cols


class TestRankPolicy:
    def test_threshold_positive(self):
        with pytest.raises(ValidationError):
            numerics.RankPolicy(relative_threshold=0.0)

    def test_custom_threshold_changes_rank(self):
        a = np.diag([1.0, 1e-6])
        assert numerics.rank(a) == 2
        assert numerics.rank(a, numerics.RankPolicy(relative_threshold=1e-3)) == 1

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv(numerics.RANK_TOL_ENV, "1e-3")
        assert numerics.RankPolicy.from_environment().relative_threshold == 1e-3
        monkeypatch.setenv(numerics.RANK_TOL_ENV, "junk")
        with pytest.raises(ValidationError):
            numerics.RankPolicy.from_environment()

    def test_environment_default(self, monkeypatch):
        monkeypatch.delenv(numerics.RANK_TOL_ENV, raising=False)
        assert numerics.RankPolicy.from_environment().relative_threshold == numerics.DEFAULT_RANK_RTOL


def test_condition_number_of_singular_matrix_is_infinite():
    assert numerics.condition_number(np.zeros((3, 3))) == float("inf")
    assert numerics.condition_number(np.diag([4.0, 2.0])) == 2.0
