"""Variational SVD: ansatz, objectives, BFGS training and reconstruction.

Parameters of ``W(gamma)`` follow the layered ansatz: each layer is a CX
chain ``0->1, 1->2, ...`` followed by RZ on every qubit and then RY on every
qubit.  Layer ``L`` uses ``gamma[2nL : 2nL+n]`` for the RZ angles and
``gamma[2nL+n : 2n(L+1)]`` for the RY angles, so ``2 n l`` parameters in all.

Matrix elements ``<i|W(alpha)^dag A W(beta)|i>`` come from one of two
pipelines:

``"novel_blockenc"``
    the Z-order/FRQI block encoding of :mod:`vqsvd.blockenc`; the matrix is
    scaled to ``max |entry| = 1`` internally and results are scaled back.
``"pauli_hadamard"``
    the Pauli decomposition of ``A`` with one complex overlap per term.

Both are exact (infinite-shot) and return values in the units of ``A``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import pauli
from .blockenc import BlockEncodedOperator
from .simcore import GateOp, QuantumCircuit, run_gates_inplace
from .zorder import scale_matrix

logger = logging.getLogger(__name__)

BACKENDS = ("novel_blockenc", "pauli_hadamard")
OBJECTIVES = ("modified", "original")
_BACKEND_ALIASES = {"novel": "novel_blockenc", "pauli": "pauli_hadamard"}


def normalize_backend(name: str) -> str:
    name = _BACKEND_ALIASES.get(name, name)
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    return name


@dataclass(frozen=True)
class AnsatzSpec:
    n: int
    layers: int

    def __post_init__(self):
        if self.n < 1 or self.layers < 1:
            raise ValueError("ansatz needs n >= 1 and layers >= 1")

    @property
    def param_count(self) -> int:
        return 2 * self.n * self.layers

    @classmethod
    def from_params(cls, n: int, params) -> AnsatzSpec:
        count = len(params)
        if count == 0 or count % (2 * n):
            raise ValueError(f"{count} parameters do not fit a {n}-qubit layered ansatz")
        return cls(n, count // (2 * n))


def ansatz_circuit(spec: AnsatzSpec, params) -> QuantumCircuit:
    params = np.asarray(params, dtype=float)
    if params.shape != (spec.param_count,):
        raise ValueError(f"expected {spec.param_count} parameters, got {params.shape}")
    n = spec.n
    gates = []
    for layer in range(spec.layers):
        gamma = params[2 * n * layer : 2 * n * (layer + 1)]
        gates += [GateOp("CX", (q + 1,), (q,)) for q in range(n - 1)]
        gates += [GateOp("RZ", (q,), params=(gamma[q],)) for q in range(n)]
        gates += [GateOp("RY", (q,), params=(gamma[n + q],)) for q in range(n)]
    return QuantumCircuit(n, tuple(gates))


def basis_prep(i: int, n: int) -> QuantumCircuit:
    """X gates on the set bits of ``i`` (qubit 0 is the most significant)."""
    if not 0 <= i < 2**n:
        raise ValueError(f"basis index {i} out of range for n={n}")
    return QuantumCircuit(n, tuple(GateOp("X", (q,)) for q in range(n) if (i >> (n - 1 - q)) & 1))


def ansatz_states(n: int, params, columns: np.ndarray) -> np.ndarray:
    """``W(params_b)`` applied to each column, for a batch of parameter vectors.

    ``params`` has shape ``(B, 2nl)`` and ``columns`` shape ``(2**n, C)``;
    returns ``(2**n, C, B)``.  Same gate sequence as :func:`ansatz_circuit`
    with one rotation angle per batch entry.
    """
    params = np.atleast_2d(np.asarray(params, dtype=float))
    spec = AnsatzSpec.from_params(n, params[0])
    columns = np.asarray(columns, dtype=complex)
    batch = params.shape[0]
    psi = np.repeat(columns[:, :, None], batch, axis=2)
    t = psi.reshape((2,) * n + psi.shape[1:])
    half = 0.5 * params
    phase = np.exp(-1j * half)
    cos, sin = np.cos(half), np.sin(half)
    for layer in range(spec.layers):
        base = 2 * n * layer
        for q in range(n - 1):
            # control q fixed to 1; the target axis q + 1 moves to position q
            view = t[(slice(None),) * q + (1,)]
            lo = (slice(None),) * q + (0,)
            hi = (slice(None),) * q + (1,)
            tmp = view[lo].copy()
            view[lo] = view[hi]
            view[hi] = tmp
        for q in range(n):
            lo = (slice(None),) * q + (0,)
            hi = (slice(None),) * q + (1,)
            z = phase[:, base + q]
            t[lo] *= z
            t[hi] *= z.conj()
        for q in range(n):
            lo = (slice(None),) * q + (0,)
            hi = (slice(None),) * q + (1,)
            c, s = cos[:, base + n + q], sin[:, base + n + q]
            a0 = t[lo].copy()
            a1 = t[hi]
            t[lo] = c * a0 - s * a1
            t[hi] = s * a0 + c * a1
    return psi


def ansatz_unitary(n: int, params) -> np.ndarray:
    """Dense ``W(params)`` obtained by simulating the ansatz on every basis state."""
    return ansatz_states(n, np.asarray(params)[None, :], np.eye(2**n))[:, :, 0]


@dataclass(frozen=True)
class ObjectiveConfig:
    kind: str = "modified"
    T: int = 1
    weights: tuple[float, ...] | None = None
    backend: str = "novel_blockenc"

    def __post_init__(self):
        if self.kind not in OBJECTIVES:
            raise ValueError(f"objective kind must be one of {OBJECTIVES}, got {self.kind!r}")
        object.__setattr__(self, "backend", normalize_backend(self.backend))
        if self.T < 1:
            raise ValueError("T must be at least 1")
        if self.weights is not None:
            w = tuple(float(x) for x in self.weights)
            if len(w) != self.T:
                raise ValueError(f"need {self.T} weights, got {len(w)}")
            if any(x <= 0 for x in w) or any(b >= a for a, b in zip(w, w[1:])):
                raise ValueError("weights must be positive and strictly decreasing")
            object.__setattr__(self, "weights", w)

    def q(self) -> np.ndarray:
        """Weights of the original objective, default ``T + 1 - i`` for ``i = 1..T``."""
        if self.weights is not None:
            return np.array(self.weights)
        return np.arange(self.T, 0, -1, dtype=float)

    def check(self, n: int) -> None:
        if not 1 <= self.T <= 2**n:
            raise ValueError(f"T={self.T} outside 1..{2**n}")


class MatrixElements:
    """Batched ``<i|W(alpha)^dag A W(beta)|i>`` for one matrix and backend.

    Per-matrix work (scaling, encoding, Bell transforms or the Pauli
    decomposition) is done once at construction.
    """

    def __init__(self, A, backend: str = "novel_blockenc"):
        A = np.asarray(A)
        self.A = A
        self.n = pauli.num_qubits_of(A)
        self.backend = normalize_backend(backend)
        if self.backend == "novel_blockenc":
            scaled, self.scale = scale_matrix(A)
            self._op = BlockEncodedOperator(scaled)
        else:
            self.scale = 1.0
            self.coefficients = pauli.decompose(A)
            self._terms = [(self._pauli_gates(s), c) for s, c in self.coefficients.items()]

    @staticmethod
    def _pauli_gates(s) -> list[GateOp]:
        gates = []
        for q, k in enumerate(s):
            if k in (1, 2):
                gates.append(GateOp("X", (q,)))
            if k in (2, 3):
                gates.append(GateOp("Z", (q,)))
        return gates

    @property
    def num_terms(self) -> int:
        return len(self._terms) if self.backend == "pauli_hadamard" else 1

    def runs_per_element(self, complex_value: bool) -> int:
        """Circuits needed for one element: Hadamard tests count Re and Im separately."""
        if self.backend == "pauli_hadamard":
            return 2 * self.num_terms
        return 2 if complex_value else 1

    def __call__(self, alphas, betas, indices) -> np.ndarray:
        """Shape ``(B, len(indices))`` complex array in the units of ``A``."""
        alphas, betas = np.broadcast_arrays(np.atleast_2d(alphas), np.atleast_2d(betas))
        dim = 2**self.n
        cols = np.eye(dim, dtype=complex)[:, list(indices)]
        kets = ansatz_states(self.n, betas, cols)
        bras = ansatz_states(self.n, alphas, cols)
        C, B = kets.shape[1], kets.shape[2]
        kets = kets.reshape(dim, C * B)
        bras = bras.reshape(dim, C * B)
        if self.backend == "novel_blockenc":
            vals = self._op.transitions(kets, bras) * self.scale
        else:
            vals = np.zeros(C * B, dtype=complex)
            for gates, coef in self._terms:
                moved = kets.copy()
                run_gates_inplace(moved, self.n, gates)
                vals += coef * np.einsum("it,it->t", bras.conj(), moved)
        return vals.reshape(C, B).T


def matrix_element(A, alpha, beta, i: int, backend: str = "novel_blockenc") -> complex:
    """``<i|W(alpha)^dag A W(beta)|i>``."""
    n = pauli.num_qubits_of(A)
    if not 0 <= i < 2**n:
        raise ValueError(f"index {i} out of range")
    return complex(MatrixElements(A, backend)(alpha, beta, [i])[0, 0])


def objective_values(elements: np.ndarray, cfg: ObjectiveConfig) -> np.ndarray:
    """Objective per batch row from a ``(B, T)`` block of matrix elements."""
    if cfg.kind == "modified":
        return np.sum(np.abs(elements) ** 2, axis=1)
    return elements.real @ cfg.q()


def runs_per_objective(ev: MatrixElements, cfg: ObjectiveConfig) -> int:
    """Circuit runs for one objective evaluation.

    Block-encoding route: one circuit per ``i`` (the all-zeros probability for
    the modified objective, the real-part Hadamard test for the original).
    Pauli route: Re and Im Hadamard tests for every term and every ``i``.
    """
    if ev.backend == "pauli_hadamard":
        return 2 * cfg.T * ev.num_terms
    return cfg.T


def objective(A, alpha, beta, cfg: ObjectiveConfig) -> tuple[float, int]:
    """``(value, runs_used)`` for the configured objective."""
    ev = MatrixElements(A, cfg.backend)
    cfg.check(ev.n)
    vals = objective_values(ev(alpha, beta, range(cfg.T)), cfg)
    return float(vals[0]), runs_per_objective(ev, cfg)


@dataclass(frozen=True)
class OptimizerConfig:
    max_iter: int = 500
    gtol: float = 1e-6
    fd_step: float = 1e-6
    c1: float = 1e-4
    c2: float = 0.9


class OptimizationError(RuntimeError):
    def __init__(self, message: str, trace: list[float]):
        super().__init__(message)
        self.trace = trace


@dataclass
class VqsvdResult:
    n: int
    T: int
    kind: str
    backend: str
    alpha_star: np.ndarray
    beta_star: np.ndarray
    sigmas: np.ndarray
    circuit_runs: int
    objective_value: float
    objective_trace: list[float] = field(default_factory=list)
    runs_trace: list[int] = field(default_factory=list)
    scale: float = 1.0
    iterations: int = 0
    message: str = ""

    @property
    def layers(self) -> int:
        return AnsatzSpec.from_params(self.n, self.alpha_star).layers


class _Counter:
    """Objective wrapper that caches values and counts circuit runs."""

    def __init__(self, ev: MatrixElements, cfg: ObjectiveConfig, split: int):
        self.ev, self.cfg, self.split = ev, cfg, split
        self.per_eval = runs_per_objective(ev, cfg)
        self.runs = 0
        self.cache: dict[bytes, float] = {}
        self.seen: list[float] = []

    def values(self, X: np.ndarray) -> np.ndarray:
        els = self.ev(X[:, : self.split], X[:, self.split :], range(self.cfg.T))
        vals = objective_values(els, self.cfg)
        self.runs += self.per_eval * X.shape[0]
        if not np.all(np.isfinite(vals)):
            raise OptimizationError("objective is not finite", list(self.seen))
        return vals

    def value(self, x: np.ndarray) -> float:
        key = x.tobytes()
        if key not in self.cache:
            v = float(self.values(x[None, :])[0])
            self.cache[key] = v
            self.seen.append(v)
        return self.cache[key]


def _fd_gradient(counter: _Counter, x: np.ndarray, h: float) -> np.ndarray:
    eye = np.eye(x.size) * h
    vals = counter.values(np.vstack([x + eye, x - eye]))
    return (vals[: x.size] - vals[x.size :]) / (2 * h)


def optimize(
    A,
    cfg: ObjectiveConfig,
    init: tuple[np.ndarray, np.ndarray],
    opt_cfg: OptimizerConfig | None = None,
) -> VqsvdResult:
    """Maximize the objective with BFGS on central finite-difference gradients.

    The returned ``sigmas`` are extracted at the optimum (adding ``2T`` runs).
    """
    opt_cfg = opt_cfg or OptimizerConfig()
    alpha0, beta0 = (np.asarray(p, dtype=float) for p in init)
    if alpha0.shape != beta0.shape:
        raise ValueError("alpha and beta need the same shape")
    if not (np.all(np.isfinite(alpha0)) and np.all(np.isfinite(beta0))):
        raise ValueError("initial parameters must be finite")
    ev = MatrixElements(A, cfg.backend)
    cfg.check(ev.n)
    AnsatzSpec.from_params(ev.n, alpha0)
    split = alpha0.size
    counter = _Counter(ev, cfg, split)
    trace: list[float] = []
    runs_trace: list[int] = []

    def record(xk):
        trace.append(counter.value(np.asarray(xk, dtype=float)))
        runs_trace.append(counter.runs)

    x0 = np.concatenate([alpha0, beta0])
    record(x0)
    res = minimize(
        lambda x: -counter.value(x),
        x0,
        jac=lambda x: -_fd_gradient(counter, x, opt_cfg.fd_step),
        method="BFGS",
        callback=record,
        options={"gtol": opt_cfg.gtol, "maxiter": opt_cfg.max_iter, "c1": opt_cfg.c1, "c2": opt_cfg.c2},
    )
    x = np.asarray(res.x, dtype=float)
    value = counter.value(x)
    if not trace or trace[-1] != value:
        record(x)
    logger.debug("BFGS finished after %d iterations: %s", res.nit, res.message)
    result = VqsvdResult(
        n=ev.n,
        T=cfg.T,
        kind=cfg.kind,
        backend=ev.backend,
        alpha_star=x[:split].copy(),
        beta_star=x[split:].copy(),
        sigmas=np.zeros(cfg.T, dtype=complex),
        circuit_runs=counter.runs,
        objective_value=value,
        objective_trace=trace,
        runs_trace=runs_trace,
        scale=ev.scale,
        iterations=int(res.nit),
        message=str(res.message),
    )
    result.sigmas = extract_sigmas(A, result, ev)
    result.circuit_runs += 2 * cfg.T
    return result


def extract_sigmas(A, result: VqsvdResult, ev: MatrixElements | None = None) -> np.ndarray:
    """``sigma_i = <i|W(alpha*)^dag A W(beta*)|i>`` for ``i < T``, in index order."""
    ev = ev or MatrixElements(A, result.backend)
    return ev(result.alpha_star, result.beta_star, range(result.T))[0]


def fix_phases(sigmas) -> tuple[np.ndarray, np.ndarray]:
    """Split ``sigma_i = magnitude_i * phase_i``; a zero value gets phase 1."""
    sigmas = np.asarray(sigmas, dtype=complex)
    mags = np.abs(sigmas)
    phases = np.ones_like(sigmas)
    nz = mags > 0
    phases[nz] = sigmas[nz] / mags[nz]
    return mags, phases


def sort_sigmas(sigmas) -> np.ndarray:
    """Magnitudes in descending order, for comparison with a classical SVD."""
    return np.sort(np.abs(np.asarray(sigmas)))[::-1]


def reconstruct(result: VqsvdResult, sigmas=None) -> np.ndarray:
    """``sum_i sigma_i W(alpha*)|i><i| W(beta*)^dag``."""
    sigmas = result.sigmas if sigmas is None else np.asarray(sigmas)
    return reconstruct_from(result.n, result.alpha_star, result.beta_star, sigmas)


def reconstruct_from(n: int, alpha, beta, sigmas) -> np.ndarray:
    U = ansatz_unitary(n, alpha)
    V = ansatz_unitary(n, beta)
    T = len(sigmas)
    return (U[:, :T] * np.asarray(sigmas)) @ V[:, :T].conj().T


@dataclass(frozen=True)
class Metrics:
    mse: float
    frobenius_error: float
    psnr: float | None = None


def metrics(A_original, A_rec, image_max: float | None = None) -> Metrics:
    A_original, A_rec = np.asarray(A_original), np.asarray(A_rec)
    if A_original.shape != A_rec.shape:
        raise ValueError("shape mismatch")
    fro = float(np.linalg.norm(A_original - A_rec))
    mse = fro**2 / A_original.size
    psnr = None
    if image_max is not None:
        psnr = math.inf if mse == 0 else 10 * math.log10(image_max**2 / mse)
    return Metrics(mse, fro, psnr)


def random_init(n: int, layers: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Initial angles drawn uniformly from ``[0, 2 pi)``."""
    count = 2 * n * layers
    return rng.uniform(0, 2 * math.pi, count), rng.uniform(0, 2 * math.pi, count)


def svd(
    A,
    T: int,
    layers: int,
    kind: str = "modified",
    backend: str = "novel_blockenc",
    seed: int = 0,
    opt_cfg: OptimizerConfig | None = None,
) -> VqsvdResult:
    """One training run from a seeded random start."""
    n = pauli.num_qubits_of(A)
    init = random_init(n, layers, np.random.default_rng(seed))
    return optimize(A, ObjectiveConfig(kind, T, backend=backend), init, opt_cfg)


def original_objective_witness(A, T: int, layers: int, seed: int = 0, samples: int = 200, steps: int = 200):
    """Search for parameter pairs where the original objective and the MSE disagree.

    Returns ``(p1, p2, f1, f2, mse1, mse2)`` with ``f1 > f2`` and ``mse1 > mse2``
    (each ``p`` is an ``(alpha, beta)`` tuple), or ``None``.  Random samples
    are compared first; failing that, a local search pushes the original
    objective up from each sample while watching the MSE.
    """
    A = np.asarray(A)
    n = pauli.num_qubits_of(A)
    rng = np.random.default_rng(seed)
    cfg = ObjectiveConfig("original", T)
    ev = MatrixElements(A, cfg.backend)
    count = 2 * n * layers
    norm2 = float(np.linalg.norm(A) ** 2)
    dim2 = A.size

    def evaluate(X):
        els = ev(X[:, :count], X[:, count:], range(T))
        f = objective_values(els, cfg)
        mse = (norm2 - np.sum(np.abs(els) ** 2, axis=1)) / dim2
        return f, mse

    X = rng.uniform(0, 2 * math.pi, (samples, 2 * count))
    f, mse = evaluate(X)

    def pick(X, f, mse):
        for a in range(len(f)):
            hit = np.flatnonzero((f[a] > f) & (mse[a] > mse))
            if hit.size:
                b = hit[0]
                return (
                    (X[a, :count], X[a, count:]),
                    (X[b, :count], X[b, count:]),
                    float(f[a]),
                    float(f[b]),
                    float(mse[a]),
                    float(mse[b]),
                )
        return None

    found = pick(X, f, mse)
    x = X[int(np.argmax(f))].copy()
    fx = f.max()
    for _ in range(steps if found is None else 0):
        trial = x + rng.normal(scale=0.3, size=x.size)
        ft, mt = evaluate(trial[None, :])
        if ft[0] > fx:
            x, fx = trial, ft[0]
            X = np.vstack([X, trial])
            f, mse = np.append(f, ft), np.append(mse, mt)
            found = pick(X, f, mse)
            if found:
                break
    return found
