import numpy as np
import pytest

from vqsvd.oracle import classical_svd_oracle, truncated_energy


def test_diagonal():
    _, s, _ = classical_svd_oracle(np.diag([3.0, 1.0]))
    np.testing.assert_allclose(s, [3, 1])
    _, s, _ = classical_svd_oracle(np.diag([1.0, -3.0]))
    np.testing.assert_allclose(s, [3, 1])


@pytest.mark.parametrize("complex_entries", [False, True])
def test_random_reconstruction(complex_entries):
    rng = np.random.default_rng(0)
    A = rng.normal(size=(8, 8)) + (1j * rng.normal(size=(8, 8)) if complex_entries else 0)
    U, s, V = classical_svd_oracle(A)
    assert np.linalg.norm(A - U @ np.diag(s) @ V.conj().T) < 1e-9 * np.linalg.norm(A)
    assert np.all(np.diff(s) <= 0)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(8), atol=1e-12)
    np.testing.assert_allclose(V.conj().T @ V, np.eye(8), atol=1e-12)
    np.testing.assert_allclose(s, np.linalg.svd(A, compute_uv=False), atol=1e-12)


def test_rank_deficient_and_zero():
    A = np.outer([1.0, 2, 3, 4], [1.0, 0, 1, 0])
    U, s, V = classical_svd_oracle(A)
    np.testing.assert_allclose(s[1:], 0, atol=1e-12)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(4), atol=1e-12)
    _, s, _ = classical_svd_oracle(np.zeros((2, 2)))
    np.testing.assert_array_equal(s, [0, 0])


def test_rectangular():
    A = np.random.default_rng(1).normal(size=(3, 5))
    U, s, V = classical_svd_oracle(A)
    np.testing.assert_allclose(U @ np.diag(s) @ V.conj().T, A, atol=1e-12)


def test_truncated_energy():
    assert truncated_energy(np.diag([3.0, 2.0, 1.0, 0.5]), 2) == pytest.approx(13)
