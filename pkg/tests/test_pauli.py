import itertools

import numpy as np
import pytest

from oracles import kron_all
from vqsvd.pauli import PauliCoefficients, basis_matrix, decompose, pauli_string_matrix, reconstruct


def test_basis_matrices():
    np.testing.assert_array_equal(basis_matrix(0), np.eye(2))
    np.testing.assert_array_equal(basis_matrix(1), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(basis_matrix(2), [[0, 1], [-1, 0]])
    np.testing.assert_array_equal(basis_matrix(3), np.diag([1, -1]))
    with pytest.raises(ValueError):
        basis_matrix(4)


def test_orthogonality_exact():
    for i, j in itertools.product(range(4), repeat=2):
        assert np.trace(basis_matrix(i).conj().T @ basis_matrix(j)) == (2 if i == j else 0)


def test_pauli_strings():
    np.testing.assert_array_equal(pauli_string_matrix((0, 0)), np.eye(4))
    np.testing.assert_array_equal(pauli_string_matrix((3,)), np.diag([1, -1]))
    X = np.array([[0, 1], [1, 0]])
    iY = np.array([[0, 1], [-1, 0]])
    np.testing.assert_array_equal(pauli_string_matrix((1, 2)), kron_all([X, iY]))


def test_decompose_basis_elements():
    assert decompose(np.eye(2)).terms == {(0,): 1}
    assert decompose(np.array([[0, 1], [-1, 0]])).terms == {(2,): 1}
    for s in itertools.product(range(4), repeat=2):
        assert decompose(pauli_string_matrix(s)).terms == {s: 1}


def test_decompose_rejects_bad_dimension():
    with pytest.raises(ValueError):
        decompose(np.eye(3))
    with pytest.raises(ValueError):
        decompose(np.ones((2, 4)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_roundtrip_random_complex(n):
    rng = np.random.default_rng(n)
    A = rng.normal(size=(2**n, 2**n)) + 1j * rng.normal(size=(2**n, 2**n))
    c = decompose(A, 0)
    assert len(c) == 4**n
    np.testing.assert_allclose(reconstruct(c), A, atol=1e-12)


def test_coefficients_match_trace_formula():
    rng = np.random.default_rng(9)
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    c = decompose(A, 0)
    for s, coef in c.items():
        assert abs(coef - np.trace(pauli_string_matrix(s).conj().T @ A) / 4) < 1e-12


def test_real_matrix_has_real_coefficients():
    A = np.random.default_rng(3).random((8, 8))
    assert max(abs(c.imag) for _, c in decompose(A).items()) < 1e-12


def test_reconstruct_edge_cases():
    np.testing.assert_array_equal(reconstruct(PauliCoefficients(2, {})), np.zeros((4, 4)))
    np.testing.assert_array_equal(reconstruct(PauliCoefficients(2, {(0, 0): 2.5})), 2.5 * np.eye(4))


def test_roundtrip_from_coefficients():
    rng = np.random.default_rng(4)
    terms = {s: complex(rng.normal(), rng.normal()) for s in itertools.product(range(4), repeat=2)}
    back = decompose(reconstruct(PauliCoefficients(2, terms)), 0)
    for s, c in terms.items():
        assert abs(back.terms[s] - c) < 1e-12


def test_drop_tolerance():
    A = np.eye(2) + 1e-14 * np.array([[0, 1], [1, 0]])
    assert decompose(A).terms.keys() == {(0,)}
    assert len(decompose(A, 0)) == 4
