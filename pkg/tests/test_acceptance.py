"""Numbered acceptance criteria; the terminal summary prints one PASS/FAIL line each."""

import itertools
import subprocess
import sys
import time

import numpy as np
import pytest

from oracles import dense_circuit, dense_elements, random_circuit, random_state
from vqsvd.algorithm import (
    MatrixElements,
    ObjectiveConfig,
    metrics,
    objective,
    original_objective_witness,
    reconstruct_from,
    svd,
)
from vqsvd.bench import BenchmarkConfig, run_benchmark
from vqsvd.blockenc import bell_transform, block_encoding, expectation_novel, g_map, k_gadget, magnitude_squared_novel
from vqsvd.oracle import truncated_energy
from vqsvd.pauli import basis_matrix, decompose, reconstruct
from vqsvd.simcore import QuantumCircuit, Statevector, run_circuit
from vqsvd.zorder import interleave, zorder_flatten


def rand_params(rng, n, layers):
    return rng.uniform(0, 2 * np.pi, 2 * n * layers)


@pytest.mark.acceptance(1, "MSE equals (||A||_F^2 - f_T) / 4**n for 200 random tuples")
def test_mse_objective_identity():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for k in range(200):
        n = k % 3 + 1
        A = rng.random((2**n, 2**n)) * rng.uniform(0.1, 5)
        layers = int(rng.integers(1, 5))
        a, b = rand_params(rng, n, layers), rand_params(rng, n, layers)
        T = int(rng.integers(1, 2**n + 1))
        f, _ = objective(A, a, b, ObjectiveConfig("modified", T))
        sig = MatrixElements(A)(a, b, range(T))[0]
        mse = metrics(A, reconstruct_from(n, a, b, sig)).mse
        worst = max(worst, abs(4**n * mse - (np.linalg.norm(A) ** 2 - f)))
    assert worst < 1e-9
    assert time.perf_counter() - start < 60


@pytest.mark.acceptance(2, "block-encoding expectation and magnitude match dense values, 3n+1 qubits")
def test_block_encoding_correctness():
    rng = np.random.default_rng(102)
    start = time.perf_counter()
    for k in range(120):
        n = k % 3 + 1
        M = rng.random((2**n, 2**n))
        prep = random_circuit(rng, n, 12)
        psi = run_circuit(prep).amplitudes
        ref = np.vdot(psi, M @ psi)
        assert abs(expectation_novel(M, prep) - ref) < 1e-10
        assert abs(magnitude_squared_novel(M, prep) - abs(ref) ** 2) < 1e-10
    for n in (1, 2, 3):
        assert block_encoding(rng.random((2**n, 2**n)), QuantumCircuit(n)).phi_circuit.num_qubits == 3 * n + 1
    assert time.perf_counter() - start < 120


@pytest.mark.acceptance(3, "Bell transform and K gadget identities")
def test_gadget_identities():
    B = dense_circuit(QuantumCircuit(2, tuple(bell_transform((0, 1)))))
    for i in range(4):
        flat = zorder_flatten(basis_matrix(i)).values / np.sqrt(2)
        np.testing.assert_allclose(B @ flat, np.eye(4)[[0, 1, 3, 2][i]], atol=1e-15)
    K = QuantumCircuit(3, tuple(k_gadget((0, 1), 2)))
    rng = np.random.default_rng(103)
    for i in range(4):
        label = np.eye(4)[g_map(i)]
        for _ in range(20):
            phi = random_state(rng, 1)
            out = run_circuit(K, Statevector(3, np.kron(label, phi))).amplitudes
            assert np.max(np.abs(out - np.kron(label, basis_matrix(i) @ phi))) < 1e-12


@pytest.mark.acceptance(4, "Z-order tensor law and interleave quotient/remainder identities")
def test_zorder_laws():
    rng = np.random.default_rng(104)
    for p in range(1, 3):
        for q in range(1, 4 - p):
            A = rng.uniform(-1, 1, (2**p, 2**p))
            B = rng.uniform(-1, 1, (2**q, 2**q))
            lhs = zorder_flatten(np.kron(A, B)).values
            assert np.array_equal(lhs, np.kron(zorder_flatten(A).values, zorder_flatten(B).values))
    for n in range(1, 5):
        for q in range(n + 1):
            for i, j in itertools.product(range(2**n), repeat=2):
                k = interleave(i, j, n)
                assert k // 4**q == interleave(i // 2**q, j // 2**q, n - q)
                assert k % 4**q == interleave(i % 2**q, j % 2**q, q)


@pytest.mark.acceptance(5, "Pauli decomposition roundtrip and basis orthogonality")
def test_pauli_roundtrip():
    rng = np.random.default_rng(105)
    for n in (1, 2, 3):
        for _ in range(5):
            A = rng.normal(size=(2**n, 2**n)) + 1j * rng.normal(size=(2**n, 2**n))
            assert np.max(np.abs(reconstruct(decompose(A, 0)) - A)) < 1e-12
    for i, j in itertools.product(range(4), repeat=2):
        assert np.trace(basis_matrix(i).conj().T @ basis_matrix(j)) == 2 * (i == j)


@pytest.mark.acceptance(6, "Pauli and block-encoding matrix elements agree on 50 random inputs")
def test_backend_equivalence():
    rng = np.random.default_rng(106)
    for k in range(50):
        n = k % 2 + 1
        A = rng.random((2**n, 2**n)) * rng.uniform(0.5, 4)
        layers = int(rng.integers(1, 5))
        a, b = rand_params(rng, n, layers), rand_params(rng, n, layers)
        i = [int(rng.integers(2**n))]
        novel = MatrixElements(A, "novel_blockenc")(a, b, i)[0, 0]
        pauli = MatrixElements(A, "pauli_hadamard")(a, b, i)[0, 0]
        assert abs(novel - pauli) < 1e-9
        assert abs(novel - dense_elements(A, a, b, 2**n)[i[0]]) < 1e-9


@pytest.mark.acceptance(7, "best-of-seeds f_T reaches the truncated singular value energy")
def test_optimization_quality():
    rng = np.random.default_rng(107)
    start = time.perf_counter()
    for dim, T, layers, frac in ((2, 2, 4, 0.99), (4, 4, 5, 0.95)):
        for _ in range(10):
            A = rng.random((dim, dim))
            bound = truncated_energy(A, T)
            best = 0.0
            for seed in range(10):
                res = svd(A, T, layers, seed=seed)
                assert max(res.objective_trace) <= bound + 1e-6
                best = max(best, res.objective_value)
            assert best >= frac * bound, (dim, best / bound)
    assert time.perf_counter() - start < 600


@pytest.mark.acceptance(8, "mean MSE falls with T and does not rise with layers on 4x4 inputs")
def test_trend_reproduction():
    start = time.perf_counter()
    cfg = BenchmarkConfig(
        sizes=(2,), T_range=(1, 4), layer_range=(2, 4), matrices_per_size=5, seeds_per_matrix=4,
        objectives=("modified",), rng_seed=8, workers=1,
    )
    _, table = run_benchmark(cfg)
    mean = {(r["layers"], r["T"]): r["mse_mean"] for r in table}
    for layers in (2, 4):
        assert mean[(layers, 4)] < mean[(layers, 1)]
    for T in (1, 4):
        assert mean[(4, T)] <= mean[(2, T)] + 1e-3
    assert time.perf_counter() - start < 900


@pytest.mark.acceptance(9, "original objective and MSE disagree on some 8x8 parameter pair")
def test_original_objective_witness():
    A = np.random.default_rng(109).random((8, 8))
    found = original_objective_witness(A, 4, 2, seed=0)
    assert found is not None
    (a1, b1), (a2, b2), _, _, _, _ = found
    cfg = ObjectiveConfig("original", 4)
    f1, f2 = objective(A, a1, b1, cfg)[0], objective(A, a2, b2, cfg)[0]
    m1 = metrics(A, reconstruct_from(3, a1, b1, dense_elements(A, a1, b1, 4))).mse
    m2 = metrics(A, reconstruct_from(3, a2, b2, dense_elements(A, a2, b2, 4))).mse
    assert f1 > f2 and m1 > m2


@pytest.mark.acceptance(10, "bench random is byte-reproducible under a fixed rng seed")
def test_bench_determinism(tmp_path):
    outputs = []
    for run in ("a", "b"):
        out = tmp_path / run
        cmd = [sys.executable, "-m", "vqsvd", "bench", "random", "--n", "1,2", "--matrices", "2", "--seeds", "2",
               "--layers", "2,3", "--objective", "both", "--rng-seed", "13", "--workers", "2", "--out", str(out)]
        subprocess.run(cmd, check=True, capture_output=True)
        outputs.append((out / "random_aggregate.csv").read_bytes())
    assert outputs[0] == outputs[1]
    assert outputs[0].count(b"\n") == 1 + 2 * 2 * (2 + 4)
