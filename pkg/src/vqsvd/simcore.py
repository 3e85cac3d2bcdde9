"""Dense statevector simulator.

Qubit ordering is big-endian: qubit 0 is the most significant bit of a basis
index, so for ``q`` qubits the basis index ``k`` has qubit ``p`` equal to
``(k >> (q - 1 - p)) & 1``.  A product state of registers listed in qubit
order is therefore ``np.kron(first, second, ...)``.

Gate kernels act on arrays of shape ``(2**q,)`` or ``(2**q, batch)``; the
trailing batch axis lets one circuit run over many input states at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

_SQRT1_2 = 1.0 / math.sqrt(2.0)

_FIXED = {
    "H": np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# controlled aliases -> (base kind, required number of controls)
_ALIASES = {
    "CX": ("X", 1),
    "CZ": ("Z", 1),
    "CH": ("H", 1),
    "CRY": ("RY", 1),
    "CRZ": ("RZ", 1),
    "CCX": ("X", 2),
}

_ROTATIONS = {"RY", "RZ"}
GATE_KINDS = frozenset(_FIXED) | _ROTATIONS | frozenset(_ALIASES) | {"unitary2q"}


def ry_matrix(theta: float) -> np.ndarray:
    """RY(theta) = exp(-i theta Y / 2)."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    """RZ(theta) = exp(-i theta Z / 2)."""
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


@dataclass(frozen=True)
class GateOp:
    """One gate: ``kind`` acting on ``targets``, gated by ``controls``.

    Every kind accepts extra controls; the ``C*`` names are shorthands that
    require exactly one (two for ``CCX``) control.
    """

    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    params: tuple[float, ...] = ()
    matrix: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        base, need = _ALIASES.get(self.kind, (self.kind, None))
        if need is not None and len(self.controls) != need:
            raise ValueError(f"{self.kind} needs exactly {need} control(s)")
        n_targets = 2 if base == "unitary2q" else 1
        if len(self.targets) != n_targets:
            raise ValueError(f"{self.kind} acts on {n_targets} target(s), got {self.targets}")
        n_params = 1 if base in _ROTATIONS else 0
        if len(self.params) != n_params:
            raise ValueError(f"{self.kind} takes {n_params} angle(s), got {len(self.params)}")
        if base == "unitary2q":
            if self.matrix is None or np.shape(self.matrix) != (4, 4):
                raise ValueError("unitary2q needs a 4x4 matrix")
            object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=complex))
        qubits = self.targets + self.controls
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"targets and controls overlap: {qubits}")
        if any(q < 0 for q in qubits):
            raise ValueError("negative qubit index")

    @property
    def base_kind(self) -> str:
        return _ALIASES.get(self.kind, (self.kind, 0))[0]

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets + self.controls

    def target_matrix(self) -> np.ndarray:
        """Matrix acting on the targets (before controls are added)."""
        base = self.base_kind
        if base == "RY":
            return ry_matrix(self.params[0])
        if base == "RZ":
            return rz_matrix(self.params[0])
        if base == "unitary2q":
            return self.matrix
        return _FIXED[base]

    def inverse(self) -> GateOp:
        base = self.base_kind
        if base in _ROTATIONS:
            return GateOp(self.kind, self.targets, self.controls, (-self.params[0],))
        if base == "unitary2q":
            return GateOp(self.kind, self.targets, self.controls, matrix=self.matrix.conj().T)
        return self

    def shifted(self, offset: int) -> GateOp:
        return GateOp(
            self.kind,
            tuple(t + offset for t in self.targets),
            tuple(c + offset for c in self.controls),
            self.params,
            self.matrix,
        )

    def with_controls(self, extra: Sequence[int]) -> GateOp:
        """The same gate with additional control qubits (alias dropped to its base)."""
        base = self.base_kind
        return GateOp(base, self.targets, self.controls + tuple(extra), self.params, self.matrix)


@dataclass(frozen=True)
class Statevector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.num_qubits,):
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes for {self.num_qubits} qubits, "
                f"got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zero(cls, num_qubits: int) -> Statevector:
        return cls.basis(num_qubits, 0)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> Statevector:
        if not 0 <= index < 2**num_qubits:
            raise ValueError(f"basis index {index} out of range for {num_qubits} qubits")
        amps = np.zeros(2**num_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def from_vector(cls, vector) -> Statevector:
        vector = np.asarray(vector, dtype=complex)
        q = int(round(math.log2(len(vector)))) if len(vector) else -1
        if q < 0 or 2**q != len(vector):
            raise ValueError(f"vector length {len(vector)} is not a power of two")
        return cls(q, vector)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self, other: Statevector) -> Statevector:
        """This state on the leading qubits, ``other`` on the trailing ones."""
        return Statevector(self.num_qubits + other.num_qubits, np.kron(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class QuantumCircuit:
    """Ordered gate list over ``num_qubits`` with optional named registers.

    ``registers`` maps a name to a ``range`` of qubit indices; when given, the
    ranges must partition ``range(num_qubits)``.
    """

    num_qubits: int
    gates: tuple[GateOp, ...] = ()
    registers: dict[str, range] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.num_qubits:
                raise ValueError(f"gate {g.kind} on {g.qubits} exceeds {self.num_qubits} qubits")
        if self.registers:
            covered = sorted(q for r in self.registers.values() for q in r)
            if covered != list(range(self.num_qubits)):
                raise ValueError(f"registers {self.registers} do not partition {self.num_qubits} qubits")

    def __len__(self):
        return len(self.gates)

    def __add__(self, other: QuantumCircuit) -> QuantumCircuit:
        if other.num_qubits != self.num_qubits:
            raise ValueError("cannot concatenate circuits of different widths")
        return QuantumCircuit(self.num_qubits, self.gates + other.gates, self.registers or other.registers)

    def inverse(self) -> QuantumCircuit:
        return QuantumCircuit(self.num_qubits, tuple(g.inverse() for g in reversed(self.gates)), self.registers)

    def embed(self, num_qubits: int, offset: int = 0, registers: dict[str, range] | None = None) -> QuantumCircuit:
        """Place this circuit on qubits ``offset..offset+width`` of a wider circuit."""
        if offset + self.num_qubits > num_qubits:
            raise ValueError("embedding does not fit")
        return QuantumCircuit(num_qubits, tuple(g.shifted(offset) for g in self.gates), registers or {})

    def controlled(self, control: int) -> QuantumCircuit:
        """Every gate additionally controlled on qubit ``control`` (must be unused)."""
        return QuantumCircuit(self.num_qubits, tuple(g.with_controls([control]) for g in self.gates))

    def count_ops(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for g in self.gates:
            counts[g.kind] = counts.get(g.kind, 0) + 1
        return counts


# -- kernels ---------------------------------------------------------------


def _as_tensor(psi: np.ndarray, num_qubits: int) -> np.ndarray:
    return psi.reshape((2,) * num_qubits + psi.shape[1:])


def apply_gate_inplace(psi: np.ndarray, num_qubits: int, gate: GateOp) -> None:
    """Apply ``gate`` to the (possibly batched) amplitude array in place."""
    if max(gate.qubits) >= num_qubits:
        raise ValueError(f"gate {gate.kind} on qubits {gate.qubits} but state has {num_qubits}")
    tensor = _as_tensor(psi, num_qubits)
    if gate.controls:
        index = [slice(None)] * tensor.ndim
        for c in gate.controls:
            index[c] = 1
        view = tensor[tuple(index)]
        # axis positions shift left past every removed control axis
        targets = [t - sum(c < t for c in gate.controls) for t in gate.targets]
    else:
        view = tensor
        targets = list(gate.targets)

    base = gate.base_kind
    if len(targets) == 1:
        t = targets[0]
        lo = (slice(None),) * t + (0,)
        hi = (slice(None),) * t + (1,)
        if base == "X":
            tmp = view[lo].copy()
            view[lo] = view[hi]
            view[hi] = tmp
        elif base == "Z":
            view[hi] *= -1
        elif base == "RZ":
            theta = gate.params[0]
            view[lo] *= np.exp(-0.5j * theta)
            view[hi] *= np.exp(0.5j * theta)
        else:
            m = gate.target_matrix()
            a0 = view[lo].copy()
            a1 = view[hi]
            view[lo] = m[0, 0] * a0 + m[0, 1] * a1
            view[hi] = m[1, 0] * a0 + m[1, 1] * a1
    else:
        m = gate.target_matrix().reshape((2,) * 4)
        moved = np.tensordot(m, view, axes=([2, 3], targets))
        view[...] = np.moveaxis(moved, [0, 1], targets)


def run_gates_inplace(psi: np.ndarray, num_qubits: int, gates: Iterable[GateOp]) -> np.ndarray:
    for g in gates:
        apply_gate_inplace(psi, num_qubits, g)
    return psi


def apply_gate(state: Statevector, g: GateOp) -> Statevector:
    psi = state.amplitudes.copy()
    apply_gate_inplace(psi, state.num_qubits, g)
    return Statevector(state.num_qubits, psi)


def run_circuit(circ: QuantumCircuit, input: Statevector | None = None) -> Statevector:
    """Apply the gates of ``circ`` in order; ``input`` defaults to ``|0...0>``."""
    if input is None:
        input = Statevector.zero(circ.num_qubits)
    if input.num_qubits != circ.num_qubits:
        raise ValueError(f"circuit has {circ.num_qubits} qubits, state has {input.num_qubits}")
    psi = input.amplitudes.copy()
    run_gates_inplace(psi, circ.num_qubits, circ.gates)
    return Statevector(circ.num_qubits, psi)


def run_circuit_batch(circ: QuantumCircuit, columns: np.ndarray) -> np.ndarray:
    """Run ``circ`` on every column of a ``(2**q, batch)`` array."""
    psi = np.array(columns, dtype=complex, copy=True)
    if psi.shape[0] != 2**circ.num_qubits:
        raise ValueError("batch height does not match circuit width")
    return run_gates_inplace(psi, circ.num_qubits, circ.gates)


def inner_product(a: Statevector, b: Statevector) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.num_qubits != b.num_qubits:
        raise ValueError("inner product of states with different qubit counts")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def prob_basis_state(state: Statevector, index: int) -> float:
    if not 0 <= index < 2**state.num_qubits:
        raise ValueError(f"basis index {index} out of range")
    return float(abs(state.amplitudes[index]) ** 2)


def expectation_z(state: Statevector, qubit: int) -> float:
    """``<Z>`` on one qubit, i.e. P(0) - P(1)."""
    probs = np.abs(_as_tensor(state.amplitudes, state.num_qubits)) ** 2
    probs = np.moveaxis(probs, qubit, 0).reshape(2, -1).sum(axis=1)
    return float(probs[0] - probs[1])


def hadamard_test_circuit(prep_a: QuantumCircuit, prep_b: QuantumCircuit, part: str) -> QuantumCircuit:
    """Ancilla-controlled interference circuit for ``Re<a|b>`` or ``Im<a|b>``.

    The ancilla is qubit 0; the preparations are shifted up by one.  ``<Z>``
    on the ancilla at the end equals the requested part.
    """
    if part not in ("real", "imag"):
        raise ValueError(f"part must be 'real' or 'imag', got {part!r}")
    if prep_a.num_qubits != prep_b.num_qubits:
        raise ValueError("Hadamard test needs preparations over the same qubits")
    if prep_a.registers and prep_b.registers and prep_a.registers != prep_b.registers:
        raise ValueError("Hadamard test needs identical register layouts")
    width = prep_a.num_qubits + 1
    a = prep_a.embed(width, 1).controlled(0)
    b = prep_b.embed(width, 1).controlled(0)
    gates = [GateOp("H", (0,)), GateOp("X", (0,)), *a.gates, GateOp("X", (0,)), *b.gates]
    if part == "imag":
        # S^dagger up to a global phase
        gates.append(GateOp("RZ", (0,), params=(-math.pi / 2,)))
    gates.append(GateOp("H", (0,)))
    return QuantumCircuit(width, tuple(gates))


def hadamard_test(
    prep_a: QuantumCircuit, prep_b: QuantumCircuit, part: str, method: str = "circuit"
) -> float:
    """Re or Im of ``<a|b>`` for states prepared from ``|0...0>``.

    ``method="circuit"`` simulates the ancilla construction; ``"overlap"``
    takes the infinite-shot shortcut through :func:`inner_product`.
    """
    if method == "overlap":
        if prep_a.num_qubits != prep_b.num_qubits:
            raise ValueError("Hadamard test needs preparations over the same qubits")
        if part not in ("real", "imag"):
            raise ValueError(f"part must be 'real' or 'imag', got {part!r}")
        ov = inner_product(run_circuit(prep_a), run_circuit(prep_b))
        return ov.real if part == "real" else ov.imag
    if method != "circuit":
        raise ValueError(f"unknown method {method!r}")
    circ = hadamard_test_circuit(prep_a, prep_b, part)
    return expectation_z(run_circuit(circ), 0)


def sample_counts(state: Statevector, shots: int, rng_seed: int) -> dict[int, int]:
    """Multinomial measurement histogram in the computational basis."""
    if shots <= 0:
        raise ValueError("shots must be positive")
    probs = np.abs(state.amplitudes) ** 2
    total = probs.sum()
    if not np.isclose(total, 1.0, atol=1e-9):
        raise ValueError(f"state is not normalized (norm^2 = {total})")
    counts = np.random.default_rng(rng_seed).multinomial(shots, probs / total)
    return {int(k): int(c) for k, c in enumerate(counts) if c}
