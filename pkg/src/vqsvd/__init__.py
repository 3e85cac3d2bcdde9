"""Variational quantum singular value decomposition on a statevector simulator."""

from .algorithm import (
    AnsatzSpec,
    Metrics,
    ObjectiveConfig,
    OptimizerConfig,
    VqsvdResult,
    ansatz_circuit,
    basis_prep,
    extract_sigmas,
    fix_phases,
    matrix_element,
    metrics,
    objective,
    optimize,
    reconstruct,
    svd,
)
from .oracle import classical_svd_oracle

__all__ = [
    "AnsatzSpec",
    "Metrics",
    "ObjectiveConfig",
    "OptimizerConfig",
    "VqsvdResult",
    "ansatz_circuit",
    "basis_prep",
    "classical_svd_oracle",
    "extract_sigmas",
    "fix_phases",
    "matrix_element",
    "metrics",
    "objective",
    "optimize",
    "reconstruct",
    "svd",
]
