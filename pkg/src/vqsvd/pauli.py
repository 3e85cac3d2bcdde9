"""Decomposition of ``2**n x 2**n`` matrices over the real Pauli-like basis.

The single-qubit basis is ``P0 = I``, ``P1 = X``, ``P2 = [[0, 1], [-1, 0]]``
(the real matrix ``iY``) and ``P3 = Z``.  All four are real and unitary and
are orthogonal under the Hilbert-Schmidt product with ``Tr(Pi^dag Pj) = 2 delta_ij``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

_BASIS = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, 1], [-1, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

DEFAULT_DROP_TOLERANCE = 1e-12


def basis_matrix(i: int) -> np.ndarray:
    if i not in (0, 1, 2, 3):
        raise ValueError(f"basis index must be in 0..3, got {i}")
    return _BASIS[i].copy()


def pauli_string_matrix(s) -> np.ndarray:
    """Tensor product ``P_{s[0]} (x) P_{s[1]} (x) ...``."""
    out = np.ones((1, 1), dtype=complex)
    for i in s:
        out = np.kron(out, basis_matrix(i))
    return out


def num_qubits_of(A: np.ndarray) -> int:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    dim = A.shape[0]
    n = int(round(math.log2(dim))) if dim else -1
    if n < 0 or 2**n != dim:
        raise ValueError(f"matrix dimension {dim} is not a power of two")
    return n


@dataclass
class PauliCoefficients:
    """Sparse map from index strings ``s`` in ``{0,1,2,3}**n`` to ``c_s``."""

    n: int
    terms: dict[tuple[int, ...], complex] = field(default_factory=dict)

    def __post_init__(self):
        for s in self.terms:
            if len(s) != self.n or any(x not in (0, 1, 2, 3) for x in s):
                raise ValueError(f"invalid index string {s} for n={self.n}")

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()


def _coefficient_tensor(A: np.ndarray, n: int) -> np.ndarray:
    # c_s = Tr(P_s^dag A) / 2**n, contracted one tensor factor at a time
    t = np.asarray(A, dtype=complex).reshape((2,) * (2 * n))
    # interleave to (r0, c0, r1, c1, ...)
    order = [ax for k in range(n) for ax in (k, n + k)]
    t = t.transpose(order)
    stack = np.stack([b.conj() for b in _BASIS])  # (4, 2, 2)
    for _ in range(n):
        # contract the leading (row, col) pair; the new axis goes to the back
        t = np.tensordot(t, stack, axes=([0, 1], [1, 2]))
    return t / 2**n


def decompose(A, drop_tolerance: float = DEFAULT_DROP_TOLERANCE) -> PauliCoefficients:
    """Coefficients ``c_s`` with ``A = sum_s c_s P_s``; ``|c_s| < drop_tolerance`` are dropped."""
    n = num_qubits_of(A)
    coeffs = _coefficient_tensor(A, n)
    terms = {
        tuple(int(x) for x in s): complex(coeffs[s])
        for s in itertools.product(range(4), repeat=n)
        if abs(coeffs[s]) >= drop_tolerance
    }
    return PauliCoefficients(n, terms)


def reconstruct(c: PauliCoefficients) -> np.ndarray:
    out = np.zeros((2**c.n, 2**c.n), dtype=complex)
    for s, coef in c.items():
        out += coef * pauli_string_matrix(s)
    return out
