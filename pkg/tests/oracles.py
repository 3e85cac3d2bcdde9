"""Brute-force dense constructions used as independent references in tests."""

import math
from functools import reduce

import numpy as np

from vqsvd.simcore import GateOp, QuantumCircuit

I2 = np.eye(2, dtype=complex)
P1 = np.diag([0, 1]).astype(complex)


def kron_all(mats):
    return reduce(np.kron, mats, np.ones((1, 1), dtype=complex))


def unit(bits, value):
    m = np.zeros((2, 2), dtype=complex)
    m[bits] = value
    return m


def dense_gate(g: GateOp, q: int) -> np.ndarray:
    """Full 2**q x 2**q matrix of a gate from explicit tensor products.

    ``I - Pc (x) I + Pc (x) G`` where ``Pc`` projects the controls onto ``|1>``;
    a two-target block is expanded into outer products ``|r_a r_b><c_a c_b|``.
    """
    G = g.target_matrix()
    ident = kron_all([I2] * q)
    proj = kron_all([P1 if k in g.controls else I2 for k in range(q)])
    if len(g.targets) == 1:
        (t,) = g.targets
        act = kron_all([P1 if k in g.controls else (G if k == t else I2) for k in range(q)])
    else:
        a, b = g.targets
        act = np.zeros((2**q, 2**q), dtype=complex)
        for r in range(4):
            for c in range(4):
                if G[r, c] == 0:
                    continue
                factors = []
                for k in range(q):
                    if k in g.controls:
                        factors.append(P1)
                    elif k == a:
                        factors.append(unit((r >> 1, c >> 1), 1.0))
                    elif k == b:
                        factors.append(unit((r & 1, c & 1), 1.0))
                    else:
                        factors.append(I2)
                act += G[r, c] * kron_all(factors)
    return ident - proj + act


def dense_circuit(circ: QuantumCircuit) -> np.ndarray:
    U = np.eye(2**circ.num_qubits, dtype=complex)
    for g in circ.gates:
        U = dense_gate(g, circ.num_qubits) @ U
    return U


def random_state(rng, q):
    v = rng.normal(size=2**q) + 1j * rng.normal(size=2**q)
    return v / np.linalg.norm(v)


def random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    qm, r = np.linalg.qr(z)
    return qm * (np.diag(r) / np.abs(np.diag(r)))


def random_gate(rng, q, kinds=None) -> GateOp:
    kinds = kinds or ["H", "X", "Z", "RY", "RZ", "CX", "CZ", "CRY", "CRZ", "CH", "CCX", "unitary2q"]
    kinds = [k for k in kinds if not (k == "CCX" and q < 3) and not (k[0] == "C" and q < 2) and not (k == "unitary2q" and q < 2)]
    kind = kinds[rng.integers(len(kinds))]
    qubits = [int(x) for x in rng.permutation(q)]
    params = (float(rng.uniform(-math.pi, math.pi)),) if kind in ("RY", "RZ", "CRY", "CRZ") else ()
    if kind == "unitary2q":
        return GateOp(kind, tuple(qubits[:2]), matrix=random_unitary(rng, 4))
    n_ctrl = {"CCX": 2}.get(kind, 1 if kind.startswith("C") else 0)
    return GateOp(kind, (qubits[0],), tuple(qubits[1 : 1 + n_ctrl]), params)


def random_circuit(rng, q, count) -> QuantumCircuit:
    return QuantumCircuit(q, tuple(random_gate(rng, q) for _ in range(count)))


def ry(t):
    return np.array([[math.cos(t / 2), -math.sin(t / 2)], [math.sin(t / 2), math.cos(t / 2)]], dtype=complex)


def rz(t):
    return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])


def cx_chain(n):
    """Dense CX(0->1) then CX(1->2) ... from explicit permutation of basis states."""
    U = np.eye(2**n, dtype=complex)
    for c in range(n - 1):
        P = np.zeros((2**n, 2**n))
        for k in range(2**n):
            bits = [(k >> (n - 1 - j)) & 1 for j in range(n)]
            if bits[c]:
                bits[c + 1] ^= 1
            P[int("".join(map(str, bits)), 2), k] = 1
        U = P @ U
    return U


def dense_ansatz(n, params):
    params = np.asarray(params)
    layers = len(params) // (2 * n)
    U = np.eye(2**n, dtype=complex)
    for L in range(layers):
        g = params[2 * n * L : 2 * n * (L + 1)]
        U = cx_chain(n) @ U
        U = kron_all([rz(g[q]) for q in range(n)]) @ U
        U = kron_all([ry(g[n + q]) for q in range(n)]) @ U
    return U


def dense_elements(A, alpha, beta, T):
    n = int(round(math.log2(A.shape[0])))
    M = dense_ansatz(n, alpha).conj().T @ A @ dense_ansatz(n, beta)
    return np.diag(M)[:T]
