"""Expectation values of non-unitary matrices from an amplitude encoding.

Register layout for an ``n``-qubit matrix: ``dat`` = qubits ``0..2n-1``
(the Z-ordered flat index), ``aux`` = the next ``a`` qubits (``a = 1`` for the
FRQI encoding), ``isr`` = the last ``n`` qubits holding the input state.

Pipeline: encode the matrix on ``dat``/``aux``, apply the Bell transform to
each data pair so a flattened ``P_s`` becomes the label ``|g(s)>``, prepare
the input state on ``isr``, and let the K gadget of pair ``p`` apply
``P_{s_p}`` to isr qubit ``p``.  The overlap of the result with
``|+>^{2n} |0>_aux |psi>`` is ``<psi|M|psi> / (eta * sqrt(2**n))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pauli import num_qubits_of
from .simcore import (
    GateOp,
    QuantumCircuit,
    Statevector,
    hadamard_test,
    inner_product,
    prob_basis_state,
    run_circuit,
    run_gates_inplace,
)
from .zorder import EncodedMatrixState, compile_state_prep, encode_frqi, zorder_flatten

_G = (0, 1, 3, 2)


def g_map(i: int) -> int:
    """Label of ``P_i`` after the Bell transform: ``0, 1, 2, 3 -> 0, 1, 3, 2``."""
    if i not in (0, 1, 2, 3):
        raise ValueError(f"g is defined on 0..3, got {i}")
    return _G[i]


def bell_transform(pair: tuple[int, int]) -> list[GateOp]:
    """Two-qubit map sending ``(1,0,0,1)``, ``(0,1,1,0)``, ``(0,1,-1,0)``,
    ``(1,0,0,-1)`` (each over sqrt 2) to basis states 0, 1, 3, 2.

    ``pair = (row, col)`` with ``row`` the more significant qubit.  In this
    ordering the circuit is CX(row -> col) followed by H on ``row``.
    """
    a, b = pair
    if a == b:
        raise ValueError("Bell transform needs two distinct qubits")
    return [GateOp("CX", (b,), (a,)), GateOp("H", (a,))]


def k_gadget(dat_pair: tuple[int, int], isr_qubit: int) -> list[GateOp]:
    """Apply ``P_i`` to ``isr_qubit`` when the data pair holds ``|g(i)>``.

    The low label bit switches X on, the high bit switches Z on; X goes first
    so that label ``|11> = |g(2)>`` yields ``Z X = P2``.
    """
    a, b = dat_pair
    if len({a, b, isr_qubit}) != 3:
        raise ValueError("K gadget needs three distinct qubits")
    return [GateOp("CX", (isr_qubit,), (b,)), GateOp("CZ", (isr_qubit,), (a,))]


def _layout(n: int, aux: int) -> dict[str, range]:
    return {
        "dat": range(0, 2 * n),
        "aux": range(2 * n, 2 * n + aux),
        "isr": range(2 * n + aux, 3 * n + aux),
    }


def bell_layer(n: int) -> list[GateOp]:
    return [g for p in range(n) for g in bell_transform((2 * p, 2 * p + 1))]


def k_layer(n: int, aux: int = 1) -> list[GateOp]:
    isr0 = 2 * n + aux
    return [g for p in range(n) for g in k_gadget((2 * p, 2 * p + 1), isr0 + p)]


def _isr_gates(isr_prep: QuantumCircuit, n: int, aux: int) -> tuple[GateOp, ...]:
    if isr_prep.num_qubits != n:
        raise ValueError(f"input-state preparation acts on {isr_prep.num_qubits} qubits, expected {n}")
    return tuple(g.shifted(2 * n + aux) for g in isr_prep.gates)


@dataclass(frozen=True)
class BlockEncoding:
    """Full circuit preparing ``|Phi>`` from ``|0...0>``."""

    phi_circuit: QuantumCircuit
    eta: float
    n: int

    @property
    def subnormalization(self) -> float:
        return self.eta * math.sqrt(2**self.n)


def frqi_encoding(M) -> EncodedMatrixState:
    return encode_frqi(zorder_flatten(M))


def block_encoding(M, isr_prep: QuantumCircuit) -> BlockEncoding:
    """Compiled FRQI block encoding: ``3n + 1`` qubits, ``eta = 2**n``."""
    F = zorder_flatten(M)
    n = F.n
    prep = compile_state_prep(F)
    width = 3 * n + 1
    gates = prep.gates + tuple(bell_layer(n)) + _isr_gates(isr_prep, n, 1) + tuple(k_layer(n))
    return BlockEncoding(QuantumCircuit(width, gates, _layout(n, 1)), float(2**n), n)


def build_phi(enc: EncodedMatrixState | QuantumCircuit, isr_prep: QuantumCircuit) -> Statevector:
    """``|Phi>`` for an encoded state (injected) or a compiled ``dat``+``aux`` preparation."""
    if isinstance(enc, QuantumCircuit):
        n, rem = divmod(enc.num_qubits - 1, 2)
        if rem:
            raise ValueError("compiled preparation must act on 2n + 1 qubits")
        start, aux = run_circuit(enc).amplitudes, 1
    else:
        n, aux = enc.n, enc.aux_qubits
        start = enc.state.amplitudes
        if enc.state.num_qubits != 2 * n + aux:
            raise ValueError("encoded state does not span dat + aux")
    width = 3 * n + aux
    psi = np.kron(start, Statevector.zero(n).amplitudes)
    gates = bell_layer(n) + list(_isr_gates(isr_prep, n, aux)) + k_layer(n, aux)
    run_gates_inplace(psi, width, gates)
    return Statevector(width, psi)


def q_reference(isr_prep: QuantumCircuit, n: int | None = None, aux: int = 1) -> Statevector:
    """``Q|0> = |+>^{2n} |0>_aux |psi>_isr``."""
    n = isr_prep.num_qubits if n is None else n
    width = 3 * n + aux
    return run_circuit(q_circuit(isr_prep, n, aux), Statevector.zero(width))


def q_circuit(isr_prep: QuantumCircuit, n: int, aux: int = 1) -> QuantumCircuit:
    width = 3 * n + aux
    gates = tuple(GateOp("H", (q,)) for q in range(2 * n)) + _isr_gates(isr_prep, n, aux)
    return QuantumCircuit(width, gates, _layout(n, aux))


def _resolve(M, encoding: EncodedMatrixState | None, compiled: bool):
    if encoding is not None:
        if M is not None and num_qubits_of(M) != encoding.n:
            raise ValueError("matrix and encoding sizes differ")
        return encoding, encoding.n, encoding.aux_qubits, encoding.eta
    F = zorder_flatten(M)
    enc = compile_state_prep(F) if compiled else encode_frqi(F)
    return enc, F.n, 1, float(2**F.n)


def transition_novel(
    M,
    ket_prep: QuantumCircuit,
    bra_prep: QuantumCircuit | None = None,
    encoding: EncodedMatrixState | None = None,
    method: str = "overlap",
    compiled: bool = False,
) -> complex:
    """``<bra|M|ket>`` with ``|ket> = ket_prep|0>`` and ``|bra> = bra_prep|0>``.

    ``encoding=None`` uses the FRQI encoding of ``M`` (entries within [-1, 1]);
    otherwise ``encoding`` is any state whose aux-zero block is ``M_flat / eta``.
    ``method="hadamard"`` simulates two Hadamard tests between the compiled
    ``|Phi>`` and ``Q|0>`` circuits (FRQI only).
    """
    bra_prep = ket_prep if bra_prep is None else bra_prep
    if method == "hadamard":
        if encoding is not None:
            raise ValueError("Hadamard-test route needs the compiled FRQI preparation")
        be = block_encoding(M, ket_prep)
        q = q_circuit(bra_prep, be.n)
        re = hadamard_test(q, be.phi_circuit, "real")
        im = hadamard_test(q, be.phi_circuit, "imag")
        return complex(re, im) * be.subnormalization
    if method != "overlap":
        raise ValueError(f"unknown method {method!r}")
    enc, n, aux, eta = _resolve(M, encoding, compiled)
    phi = build_phi(enc, ket_prep)
    ref = q_reference(bra_prep, n, aux)
    return inner_product(ref, phi) * eta * math.sqrt(2**n)


def expectation_novel(M, psi_prep: QuantumCircuit, encoding: EncodedMatrixState | None = None, **kwargs) -> complex:
    """``<psi|M|psi>`` through the block encoding."""
    return transition_novel(M, psi_prep, psi_prep, encoding=encoding, **kwargs)


def magnitude_squared_novel(
    M,
    psi_prep: QuantumCircuit,
    bra_prep: QuantumCircuit | None = None,
    encoding: EncodedMatrixState | None = None,
    compiled: bool = False,
) -> float:
    """``|<bra|M|psi>|**2`` from the all-zeros probability of ``Q^dag |Phi>``."""
    bra_prep = psi_prep if bra_prep is None else bra_prep
    enc, n, aux, eta = _resolve(M, encoding, compiled)
    phi = build_phi(enc, psi_prep)
    undo = [GateOp("H", (q,)) for q in range(2 * n)] + list(_isr_gates(bra_prep.inverse(), n, aux))
    psi = phi.amplitudes.copy()
    run_gates_inplace(psi, phi.num_qubits, undo)
    p0 = prob_basis_state(Statevector(phi.num_qubits, psi), 0)
    return p0 * eta**2 * 2**n


class BlockEncodedOperator:
    """Batched evaluation of ``<bra_t|M|ket_t>`` through the block encoding.

    The encoded ``dat``/``aux`` state and its Bell transforms do not depend on
    the input states, so they are simulated once.  Each call tensors in a batch
    of ``isr`` states, applies the K gadgets, and projects onto
    ``|+>^{2n}|0>_aux|bra_t>`` (infinite-shot overlap).
    """

    def __init__(self, M=None, encoding: EncodedMatrixState | None = None):
        enc, n, aux, eta = _resolve(M, encoding, compiled=False)
        self.n, self.aux, self.eta = n, aux, eta
        self.width = 3 * n + aux
        head = enc.state.amplitudes.copy()
        run_gates_inplace(head, 2 * n + aux, bell_layer(n))
        self._head = head
        plus = np.full(4**n, 0.5**n)
        self._ref = np.kron(plus, Statevector.zero(aux).amplitudes)
        self._k = k_layer(n, aux)

    @property
    def subnormalization(self) -> float:
        return self.eta * math.sqrt(2**self.n)

    def phi_batch(self, kets: np.ndarray) -> np.ndarray:
        """``|Phi_t>`` for every column ``t`` of ``kets`` (shape ``(2**n, T)``)."""
        kets = np.asarray(kets, dtype=complex)
        psi = (self._head[:, None, None] * kets[None, :, :]).reshape(-1, kets.shape[1])
        return run_gates_inplace(psi, self.width, self._k)

    def raw_overlaps(self, kets: np.ndarray, bras: np.ndarray) -> np.ndarray:
        """``<Q_t 0|Phi_t>`` per column, i.e. ``<bra_t|M|ket_t>`` over the subnormalization."""
        phi = self.phi_batch(kets).reshape(self._head.size, 2**self.n, -1)
        reduced = np.tensordot(self._ref.conj(), phi, axes=(0, 0))
        return np.einsum("it,it->t", np.asarray(bras).conj(), reduced)

    def transitions(self, kets: np.ndarray, bras: np.ndarray) -> np.ndarray:
        return self.raw_overlaps(kets, bras) * self.subnormalization
