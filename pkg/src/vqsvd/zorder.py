"""Z-order flattening of matrices and their amplitude encoding.

For a ``2**n x 2**n`` matrix the flat index of entry ``(i, j)`` interleaves
the bits of ``i`` and ``j``: counting from the least significant bit, even
bits of ``k`` come from ``j`` and odd bits from ``i``.  For ``n = 1`` this is
row-major order, ``[[a, b], [c, d]] -> (a, b, c, d)``.  Because Z-order
preserves tensor products, the ``2n`` data qubits split into consecutive
(row bit, column bit) pairs, one pair per tensor factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pauli import num_qubits_of
from .simcore import GateOp, QuantumCircuit, Statevector


def interleave(i: int, j: int, n: int) -> int:
    if not (0 <= i < 2**n and 0 <= j < 2**n):
        raise ValueError(f"indices ({i}, {j}) out of range for n={n}")
    k = 0
    for b in range(n):
        k |= ((j >> b) & 1) << (2 * b)
        k |= ((i >> b) & 1) << (2 * b + 1)
    return k


def deinterleave(k: int, n: int) -> tuple[int, int]:
    if not 0 <= k < 4**n:
        raise ValueError(f"flat index {k} out of range for n={n}")
    i = j = 0
    for b in range(n):
        j |= ((k >> (2 * b)) & 1) << b
        i |= ((k >> (2 * b + 1)) & 1) << b
    return i, j


def zorder_permutation(n: int) -> np.ndarray:
    """``perm[k]`` is the row-major index of the entry stored at flat index ``k``."""
    perm = np.empty(4**n, dtype=np.intp)
    for k in range(4**n):
        i, j = deinterleave(k, n)
        perm[k] = i * 2**n + j
    return perm


@dataclass(frozen=True)
class FlattenedMatrix:
    n: int
    values: np.ndarray
    scale: float = 1.0

    def unflatten(self) -> np.ndarray:
        """The scaled matrix back in 2-D form."""
        out = np.empty(4**self.n, dtype=self.values.dtype)
        out[zorder_permutation(self.n)] = self.values
        return out.reshape(2**self.n, 2**self.n)


def scale_matrix(A) -> tuple[np.ndarray, float]:
    """Divide by the largest entry magnitude so that ``max |entry| == 1``.

    The zero matrix comes back unchanged with scale 1.
    """
    A = np.asarray(A)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    peak = float(np.max(np.abs(A))) if A.size else 0.0
    if peak == 0.0:
        return A.copy(), 1.0
    return A / peak, peak


def zorder_flatten(A, scale: float = 1.0, atol: float = 1e-12) -> FlattenedMatrix:
    """Flatten an already scaled matrix (entries of magnitude at most 1)."""
    A = np.asarray(A)
    n = num_qubits_of(A)
    if np.max(np.abs(A), initial=0.0) > 1 + atol:
        raise ValueError("matrix entries exceed 1 in magnitude; scale the matrix first")
    return FlattenedMatrix(n, A.reshape(-1)[zorder_permutation(n)].copy(), scale)


def _real_values(F: FlattenedMatrix, atol: float = 1e-12) -> np.ndarray:
    values = np.asarray(F.values)
    if np.iscomplexobj(values):
        if np.max(np.abs(values.imag), initial=0.0) > atol:
            raise ValueError("arccos encoding needs real entries")
        values = values.real
    if np.max(np.abs(values), initial=0.0) > 1 + atol:
        raise ValueError("entries exceed 1 in magnitude")
    return np.clip(values.astype(float), -1.0, 1.0)


def frqi_angles(F: FlattenedMatrix) -> np.ndarray:
    """Rotation angles ``theta_k = 2 arccos(a_k)``."""
    return 2.0 * np.arccos(_real_values(F))


@dataclass(frozen=True)
class EncodedMatrixState:
    """State over ``dat`` (2n qubits) followed by the auxiliary register.

    Projecting every auxiliary qubit onto ``|0>`` leaves ``values / eta``.
    """

    n: int
    state: Statevector
    eta: float
    aux_qubits: int = 1


def encode_frqi(F: FlattenedMatrix) -> EncodedMatrixState:
    """Amplitude-FRQI state ``(1/2**n) sum_k |k> (a_k |0> + sqrt(1 - a_k**2) |1>)``.

    Real values go through the arccos angles.  Complex values are injected
    directly: the aux-0 branch stores ``a_k / 2**n`` and the aux-1 branch
    takes ``sqrt(1 - |a_k|**2) / 2**n`` to keep the state normalized.
    """
    n = F.n
    values = np.asarray(F.values)
    if np.max(np.abs(values), initial=0.0) > 1 + 1e-12:
        raise ValueError("entries exceed 1 in magnitude")
    if np.iscomplexobj(values) and np.max(np.abs(values.imag), initial=0.0) > 1e-12:
        zero = values.astype(complex)
        one = np.sqrt(np.clip(1.0 - np.abs(zero) ** 2, 0.0, None))
    else:
        # cos(arccos a) = a and sin(arccos a) = sqrt(1 - a**2), without roundoff
        zero = _real_values(F)
        one = np.sqrt(1.0 - zero**2)
    amps = np.empty(2 * 4**n, dtype=complex)
    amps[0::2] = zero / 2**n
    amps[1::2] = one / 2**n
    return EncodedMatrixState(n, Statevector(2 * n + 1, amps), eta=float(2**n))


def compile_state_prep(F: FlattenedMatrix) -> QuantumCircuit:
    """Naive circuit for :func:`encode_frqi` over ``dat`` + ``aux``.

    Hadamards on every data qubit, then for each flat index ``k`` one RY(theta_k)
    on the auxiliary qubit controlled on ``dat == k`` (zero controls realized
    by X conjugation).
    """
    angles = frqi_angles(F)
    width = 2 * F.n
    aux = width
    gates = [GateOp("H", (q,)) for q in range(width)]
    controls = tuple(range(width))
    for k, theta in enumerate(angles):
        flips = [GateOp("X", (q,)) for q in range(width) if not (k >> (width - 1 - q)) & 1]
        gates += flips
        gates.append(GateOp("RY", (aux,), controls, (float(theta),)))
        gates += flips
    registers = {"dat": range(0, width), "aux": range(width, width + 1)}
    return QuantumCircuit(width + 1, tuple(gates), registers)


def row_major_to_zorder_qubits(n: int) -> list[int]:
    """Qubit permutation taking a row-major encoding to Z-order.

    Row-major qubits are ``(i_{n-1}..i_0, j_{n-1}..j_0)``; Z-order qubit ``2p``
    holds row bit ``p`` (most significant first) and ``2p + 1`` the column bit.
    Returns ``src`` with Z-order qubit ``q`` taken from row-major qubit ``src[q]``.
    """
    src = []
    for p in range(n):
        src += [p, n + p]
    return src


def permute_qubits(vector, src: list[int]) -> np.ndarray:
    """Reorder qubit wires: output qubit ``q`` is input qubit ``src[q]``."""
    q = len(src)
    t = np.asarray(vector).reshape((2,) * q)
    return t.transpose(src).reshape(-1)


def n_from_flat_length(length: int) -> int:
    n = int(round(math.log(length, 4))) if length > 0 else -1
    if n < 0 or 4**n != length:
        raise ValueError(f"flat length {length} is not a power of four")
    return n
