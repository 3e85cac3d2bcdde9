"""Command line entry point.

    vqsvd bench random --n 1,2,3 --t-range auto --layers 2,3,4,5 --objective both --out DIR
    vqsvd bench images --file digits.csv --count 20 --t-range 3..8 --layers 2..5 --out DIR
    vqsvd svd --matrix matrix.csv --t 2 --layers 4 --objective modified --out result.json
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .algorithm import fix_phases, metrics, normalize_backend, reconstruct, svd
from .bench import BenchmarkConfig, run_benchmark
from .oracle import classical_svd_oracle


def parse_int_list(text: str) -> tuple[int, ...] | None:
    """``"1,2,3"``, ``"3..8"`` (inclusive) or ``"auto"`` (returns None)."""
    text = text.strip()
    if text == "auto":
        return None
    values: list[int] = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            values += range(int(lo), int(hi) + 1)
        elif part:
            values.append(int(part))
    if not values:
        raise argparse.ArgumentTypeError(f"empty list: {text!r}")
    return tuple(values)


def _objectives(text: str) -> tuple[str, ...]:
    if text == "both":
        return ("modified", "original")
    if text not in ("modified", "original"):
        raise argparse.ArgumentTypeError("objective must be modified, original or both")
    return (text,)


def _add_common(p: argparse.ArgumentParser, t_default: str, layers_default: str) -> None:
    p.add_argument("--t-range", type=parse_int_list, default=parse_int_list(t_default))
    p.add_argument("--layers", type=parse_int_list, default=parse_int_list(layers_default))
    p.add_argument("--objective", type=_objectives, default=("modified", "original"))
    p.add_argument("--backend", default="novel", choices=["novel", "pauli", "novel_blockenc", "pauli_hadamard"])
    p.add_argument("--seeds", type=int, default=10, help="random initial parameter sets per matrix")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: BENCH_THREADS or CPU count)")
    p.add_argument("--out", required=True, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vqsvd", description="Variational quantum SVD on a statevector simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="benchmark sweeps")
    bench_sub = bench.add_subparsers(dest="mode", required=True)
    rand = bench_sub.add_parser("random", help="random matrices with entries uniform in [0, 1)")
    rand.add_argument("--n", type=parse_int_list, default=(1, 2, 3), help="matrix qubit counts")
    rand.add_argument("--matrices", type=int, default=10)
    _add_common(rand, "auto", "2,3,4,5")
    images = bench_sub.add_parser("images", help="8x8 digit images (CSV, 64 values + optional label)")
    images.add_argument("--file", default=None, help="digits CSV (default: bundled 20-image sample)")
    images.add_argument("--count", type=int, default=20)
    images.add_argument("--image-max", type=float, default=16.0)
    _add_common(images, "3..8", "2..5")

    one = sub.add_parser("svd", help="decompose a single matrix")
    one.add_argument("--matrix", required=True, help="CSV file of real numbers")
    one.add_argument("--t", type=int, required=True)
    one.add_argument("--layers", type=int, default=4)
    one.add_argument("--objective", choices=["modified", "original"], default="modified")
    one.add_argument("--backend", default="novel", choices=["novel", "pauli", "novel_blockenc", "pauli_hadamard"])
    one.add_argument("--seed", type=int, default=0)
    one.add_argument("--image-max", type=float, default=None, help="peak value for PSNR")
    one.add_argument("--out", required=True, help="result JSON path")
    return parser


def _pad(A: np.ndarray) -> np.ndarray:
    size = max(A.shape)
    dim = 1 << max(1, (size - 1).bit_length())
    out = np.zeros((dim, dim), dtype=A.dtype)
    out[: A.shape[0], : A.shape[1]] = A
    return out


def run_svd(args) -> dict:
    A = np.atleast_2d(np.loadtxt(args.matrix, delimiter=",", dtype=float))
    padded = _pad(A)
    res = svd(padded, args.t, args.layers, kind=args.objective, backend=normalize_backend(args.backend), seed=args.seed)
    A_rec = reconstruct(res)[: A.shape[0], : A.shape[1]]
    m = metrics(A, A_rec, args.image_max)
    mags, phases = fix_phases(res.sigmas)
    _, classical, _ = classical_svd_oracle(A)
    result = {
        "shape": list(A.shape),
        "padded_dim": padded.shape[0],
        "n": res.n,
        "T": res.T,
        "layers": res.layers,
        "objective": res.kind,
        "backend": res.backend,
        "seed": args.seed,
        "scale": res.scale,
        "sigmas": [[s.real, s.imag] for s in res.sigmas],
        "magnitudes": mags.tolist(),
        "phases": [[p.real, p.imag] for p in phases],
        "alpha": res.alpha_star.tolist(),
        "beta": res.beta_star.tolist(),
        "objective_value": res.objective_value,
        "circuit_runs": res.circuit_runs,
        "iterations": res.iterations,
        "A_rec_real": A_rec.real.tolist(),
        "A_rec_imag": A_rec.imag.tolist(),
        "metrics": {"mse": m.mse, "frobenius_error": m.frobenius_error, "psnr": m.psnr},
        "classical_singular_values": classical.tolist(),
    }
    with open(args.out, "w") as fh:
        json.dump(result, fh, indent=2)
    return result


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "svd":
        result = run_svd(args)
        print(f"sigmas: {np.round(result['magnitudes'], 6).tolist()}  mse: {result['metrics']['mse']:.6g}")
        return 0
    common = dict(
        mode=args.mode,
        T_range=args.t_range,
        layer_range=args.layers,
        seeds_per_matrix=args.seeds,
        objectives=args.objective,
        backend=args.backend,
        rng_seed=args.rng_seed,
        output_dir=args.out,
        workers=args.workers,
    )
    if args.mode == "random":
        cfg = BenchmarkConfig(sizes=args.n, matrices_per_size=args.matrices, **common)
    else:
        cfg = BenchmarkConfig(digits_file=args.file, image_count=args.count, image_max=args.image_max, **common)
    records, table = run_benchmark(cfg)
    failed = sum(r.failed for r in records)
    print(f"{len(records)} runs ({failed} failed), {len(table)} aggregate cells written to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
