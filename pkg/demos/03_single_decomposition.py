"""
One variational SVD run
=======================

Train two ansatz circuits so that ``W(alpha)^dag A W(beta)`` is as diagonal
as possible in its first ``T`` entries, then compare with a classical SVD.
"""

import numpy as np

from vqsvd import classical_svd_oracle
from vqsvd.algorithm import fix_phases, metrics, reconstruct, sort_sigmas, svd

A = np.random.default_rng(3).random((4, 4))
_, s, _ = classical_svd_oracle(A)
print("classical singular values:", np.round(s, 5))

for T in (1, 2, 4):
    res = svd(A, T=T, layers=5, seed=0)
    mags, phases = fix_phases(res.sigmas)
    m = metrics(A, reconstruct(res))
    print(
        f"T={T}: sigmas {np.round(sort_sigmas(res.sigmas), 5)}  f_T {res.objective_value:.5f} "
        f"(bound {np.sum(s[:T] ** 2):.5f})  mse {m.mse:.2e}  runs {res.circuit_runs}"
    )

# values come back in index order with a phase each
print("raw sigmas:", np.round(res.sigmas, 4))
print("phases:", np.round(phases, 4))
