"""
Weighted real parts versus squared magnitudes
=============================================

The squared-magnitude objective is tied to the reconstruction error:
``4**n * MSE = ||A||_F**2 - f_T`` holds for any parameters.  The weighted
real-part objective has no such link, and a pair of parameter sets can rank
one way under it and the other way under the MSE.
"""

import numpy as np

from vqsvd.algorithm import MatrixElements, ObjectiveConfig, metrics, objective, original_objective_witness, reconstruct_from

rng = np.random.default_rng(5)
A = rng.random((8, 8))
a, b = rng.uniform(0, 2 * np.pi, 12), rng.uniform(0, 2 * np.pi, 12)

f, runs = objective(A, a, b, ObjectiveConfig("modified", 4))
sig = MatrixElements(A)(a, b, range(4))[0]
mse = metrics(A, reconstruct_from(3, a, b, sig)).mse
print(f"64 * MSE = {64 * mse:.10f}")
print(f"||A||^2 - f_T = {np.linalg.norm(A) ** 2 - f:.10f}   ({runs} circuit runs)")

found = original_objective_witness(A, T=4, layers=2, seed=0)
if found:
    _, _, f1, f2, m1, m2 = found
    print(f"weighted objective prefers p1: {f1:.4f} > {f2:.4f}")
    print(f"but p1 reconstructs worse:     {m1:.4f} > {m2:.4f}")
