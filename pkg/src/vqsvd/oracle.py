"""Classical SVD used as ground truth (one-sided Jacobi, complex-capable)."""

from __future__ import annotations

import numpy as np


def _complete_columns(U: np.ndarray, keep: np.ndarray) -> np.ndarray:
    # fill columns with keep == False by Gram-Schmidt against the standard basis
    m = U.shape[0]
    basis = [U[:, j] for j in range(U.shape[1]) if keep[j]]
    fill = iter(np.eye(m, dtype=complex).T)
    out = U.copy()
    for j in np.flatnonzero(~keep):
        for e in fill:
            v = e - sum(np.vdot(b, e) * b for b in basis)
            norm = np.linalg.norm(v)
            if norm > 1e-8:
                out[:, j] = v / norm
                basis.append(out[:, j])
                break
    return out


def classical_svd_oracle(A, tol: float = 1e-15, max_sweeps: int = 100):
    """``A = U @ diag(s) @ V.conj().T`` with ``s`` descending.

    Hestenes one-sided Jacobi: pairs of columns of ``A V`` are rotated until
    mutually orthogonal; the column norms are then the singular values.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    m, n = A.shape
    if m < n:
        V, s, U = classical_svd_oracle(A.conj().T, tol, max_sweeps)
        return U, s, V
    W = A.copy()
    V = np.eye(n, dtype=complex)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = np.vdot(W[:, p], W[:, p]).real
                beta = np.vdot(W[:, q], W[:, q]).real
                gamma = np.vdot(W[:, p], W[:, q])
                mag = abs(gamma)
                if mag <= tol * np.sqrt(alpha * beta) or mag == 0.0:
                    continue
                rotated = True
                phase = gamma / mag
                zeta = (beta - alpha) / (2 * mag)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(1 + zeta * zeta))
                c = 1 / np.sqrt(1 + t * t)
                s = c * t
                J = np.array([[c, s * phase], [-s * np.conj(phase), c]])
                W[:, [p, q]] = W[:, [p, q]] @ J
                V[:, [p, q]] = V[:, [p, q]] @ J
        if not rotated:
            break
    sigma = np.linalg.norm(W, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, W, V = sigma[order], W[:, order], V[:, order]
    keep = sigma > 1e-300
    U = np.zeros((m, n), dtype=complex)
    U[:, keep] = W[:, keep] / sigma[keep]
    if m == n and not keep.all():
        U = _complete_columns(U, keep)
    return U, sigma, V


def truncated_energy(A, T: int) -> float:
    """``sum_{i<=T} sigma_i**2``, the supremum of the modified objective."""
    _, s, _ = classical_svd_oracle(A)
    return float(np.sum(s[:T] ** 2))
