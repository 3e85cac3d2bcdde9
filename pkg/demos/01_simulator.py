"""
Statevector simulation basics
=============================

Qubit 0 is the most significant bit of a basis index, so ``|10>`` is index 2
and a product state over registers is ``np.kron(first, second)``.
"""

import math

import numpy as np

from vqsvd.simcore import GateOp, QuantumCircuit, Statevector, hadamard_test, inner_product, run_circuit, sample_counts

# a Bell pair: H on qubit 0, then CX from qubit 0 onto qubit 1
bell = QuantumCircuit(2, (GateOp("H", (0,)), GateOp("CX", (1,), (0,))))
psi = run_circuit(bell)
print("Bell amplitudes:", np.round(psi.amplitudes, 4))

# finite-shot sampling of the same state
print("1000 shots:", sample_counts(psi, 1000, rng_seed=1))

# the inverse circuit undoes it
back = run_circuit(bell.inverse(), psi)
print("after inverse:", np.round(back.amplitudes, 12))

# Hadamard test for <a|b> against the direct inner product
a = QuantumCircuit(1, (GateOp("RY", (0,), params=(0.8,)),))
b = QuantumCircuit(1, (GateOp("RY", (0,), params=(0.3,)), GateOp("RZ", (0,), params=(1.1,))))
direct = inner_product(run_circuit(a), run_circuit(b))
tested = complex(hadamard_test(a, b, "real"), hadamard_test(a, b, "imag"))
print(f"<a|b> direct {direct:.6f}  via Hadamard tests {tested:.6f}")

# RZ(t) = diag(exp(-it/2), exp(it/2))
plus = Statevector.from_vector([1 / math.sqrt(2)] * 2)
print("RZ(0.4)|+>:", np.round(run_circuit(QuantumCircuit(1, (GateOp("RZ", (0,), params=(0.4,)),)), plus).amplitudes, 4))
