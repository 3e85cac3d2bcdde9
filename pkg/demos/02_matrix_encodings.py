"""
Two ways to read <psi|M|psi> from a circuit
===========================================

The Pauli route expands ``M`` into ``4**n`` tensor products of
I, X, iY, Z and needs a Hadamard test per term.  The block-encoding route
loads ``M`` once as an amplitude-encoded state in Z-order and needs a
single overlap, at the price of ``3n + 1`` qubits.
"""

import numpy as np

from vqsvd.blockenc import block_encoding, expectation_novel, magnitude_squared_novel
from vqsvd.pauli import decompose
from vqsvd.simcore import GateOp, QuantumCircuit, run_circuit
from vqsvd.zorder import encode_frqi, interleave, scale_matrix, zorder_flatten

rng = np.random.default_rng(0)
M, scale = scale_matrix(rng.random((4, 4)))
print("scale factor:", round(scale, 4))

# Z-order puts row bits and column bits side by side
print("flat index of (row 2, col 1) for 4x4:", interleave(2, 1, 2))
flat = zorder_flatten(M)
print("Z-order values:", np.round(flat.values[:6], 3), "...")

# amplitude encoding: the aux=0 half is values / 2**n
enc = encode_frqi(flat)
print("aux-0 block equals values/4:", np.allclose(enc.state.amplitudes[0::2], flat.values / 4))

# the Pauli expansion of the same matrix
coeffs = decompose(M)
print("Pauli terms:", len(coeffs))

# an input state and three ways to get <psi|M|psi>
prep = QuantumCircuit(2, (GateOp("H", (0,)), GateOp("RY", (1,), params=(0.7,)), GateOp("CX", (1,), (0,))))
psi = run_circuit(prep).amplitudes
print("dense:          ", np.vdot(psi, M @ psi).real)
print("block encoding: ", expectation_novel(M, prep).real)
print("Hadamard test:  ", expectation_novel(M, prep, method="hadamard").real)
print("|.|^2 from P(0):", magnitude_squared_novel(M, prep))

be = block_encoding(M, prep)
print("qubits:", be.phi_circuit.num_qubits, " subnormalization:", be.subnormalization)
