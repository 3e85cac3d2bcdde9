"""Benchmark sweeps over random matrices and 8x8 digit images.

Every (matrix, seed, T, layers, objective) cell is one independent training
run.  Seeds are derived from ``rng_seed`` and the cell coordinates, so a sweep
is reproducible regardless of execution order or worker count.

Outputs in ``output_dir``:

``{mode}_runs.csv``
    one row per run, columns :data:`RUN_FIELDS`.
``{mode}_params.jsonl``
    trained angles and extracted ``sigma`` per run (for recomputing metrics).
``{mode}_aggregate.csv``
    mean and population standard deviation per (n, objective, layers, T),
    columns :data:`AGGREGATE_FIELDS`; runs flagged as failed are excluded and
    counted.
``{mode}_{metric}_{objective}_{n}.dat``
    plot data, see :func:`emit_plot_data`.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .algorithm import (
    ObjectiveConfig,
    OptimizationError,
    OptimizerConfig,
    metrics,
    normalize_backend,
    optimize,
    random_init,
    reconstruct_from,
)

logger = logging.getLogger(__name__)

RUN_FIELDS = (
    "mode",
    "n",
    "matrix_id",
    "seed",
    "T",
    "layers",
    "objective",
    "backend",
    "objective_value",
    "mse",
    "psnr",
    "circuit_runs",
    "iterations",
    "scale",
    "failed",
)

# wall time goes to its own file so the other outputs are byte-reproducible
TIMING_FIELDS = ("mode", "n", "matrix_id", "seed", "T", "layers", "objective", "wall_time")

AGGREGATE_FIELDS = (
    "mode",
    "n",
    "objective",
    "layers",
    "T",
    "count",
    "excluded",
    "mse_mean",
    "mse_std",
    "psnr_mean",
    "psnr_std",
    "runs_mean",
    "runs_std",
    "objective_mean",
)

DIGITS_MAX = 16.0


def bundled_digits_path() -> Path:
    return Path(str(resources.files("vqsvd") / "data" / "digits_first20.csv"))


@dataclass
class BenchmarkConfig:
    mode: str = "random"
    sizes: tuple[int, ...] = (1, 2, 3)
    T_range: tuple[int, ...] | None = None  # None: 1..2**n for random, 3..8 for images
    layer_range: tuple[int, ...] = (2, 3, 4, 5)
    matrices_per_size: int = 10
    seeds_per_matrix: int = 10
    objectives: tuple[str, ...] = ("modified", "original")
    backend: str = "novel_blockenc"
    rng_seed: int = 0
    output_dir: str | None = None
    digits_file: str | None = None
    image_count: int = 20
    image_max: float = DIGITS_MAX
    workers: int | None = None
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)

    def __post_init__(self):
        if self.mode not in ("random", "images"):
            raise ValueError(f"mode must be 'random' or 'images', got {self.mode!r}")
        self.backend = normalize_backend(self.backend)
        for kind in self.objectives:
            ObjectiveConfig(kind)
        if self.mode == "images":
            self.sizes = (3,)

    def t_values(self, n: int) -> tuple[int, ...]:
        if self.T_range is not None:
            return tuple(t for t in self.T_range if 1 <= t <= 2**n)
        if self.mode == "images":
            return tuple(range(3, 9))
        return tuple(range(1, 2**n + 1))


@dataclass
class RunRecord:
    mode: str
    n: int
    matrix_id: int
    seed: int
    T: int
    layers: int
    objective: str
    backend: str
    objective_value: float = float("nan")
    mse: float = float("nan")
    psnr: float | None = None
    circuit_runs: int = 0
    iterations: int = 0
    scale: float = 1.0
    failed: bool = False
    wall_time: float = 0.0
    alpha: list[float] = field(default_factory=list, repr=False)
    beta: list[float] = field(default_factory=list, repr=False)
    sigmas: list[complex] = field(default_factory=list, repr=False)

    @property
    def key(self):
        return (self.mode, self.n, self.objective, self.layers, self.T, self.matrix_id, self.seed)


def gen_random_matrix(n: int, rng_seed: int) -> np.ndarray:
    """``2**n x 2**n`` matrix with i.i.d. entries uniform on ``[0, 1)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return np.random.default_rng(rng_seed).random((2**n, 2**n))


def load_digits(path) -> list[np.ndarray]:
    """Read 8x8 images from CSV: 64 pixel values in ``[0, 16]`` per row plus an optional label."""
    images = []
    with open(path, newline="") as fh:
        for row_number, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) not in (64, 65):
                raise ValueError(f"row {row_number}: expected 64 values (+ optional label), got {len(row)}")
            try:
                pixels = np.array([float(v) for v in row[:64]])
            except ValueError as exc:
                raise ValueError(f"row {row_number}: non-numeric value ({exc})") from None
            if not np.all(np.isfinite(pixels)) or pixels.min() < 0 or pixels.max() > DIGITS_MAX:
                raise ValueError(f"row {row_number}: pixel values must lie in [0, {DIGITS_MAX:g}]")
            images.append(pixels.reshape(8, 8))
    return images


def _matrices(cfg: BenchmarkConfig, n: int) -> list[np.ndarray]:
    if cfg.mode == "images":
        path = cfg.digits_file or bundled_digits_path()
        images = load_digits(path)[: cfg.image_count]
        if len(images) < cfg.image_count:
            logger.warning("only %d images available in %s", len(images), path)
        return images
    return [
        gen_random_matrix(n, int(np.random.SeedSequence([cfg.rng_seed, n, m]).generate_state(1)[0]))
        for m in range(cfg.matrices_per_size)
    ]


def _init_seed(cfg: BenchmarkConfig, n: int, matrix_id: int, seed: int, layers: int) -> int:
    # shared across T and objective so those comparisons are paired
    return int(np.random.SeedSequence([cfg.rng_seed, n, matrix_id, seed, layers, 1]).generate_state(1)[0])


def _run_cell(args) -> RunRecord:
    cfg, A, n, matrix_id, seed, T, layers, kind = args
    record = RunRecord(cfg.mode, n, matrix_id, seed, T, layers, kind, cfg.backend)
    init = random_init(n, layers, np.random.default_rng(_init_seed(cfg, n, matrix_id, seed, layers)))
    start = time.perf_counter()
    try:
        res = optimize(A, ObjectiveConfig(kind, T, backend=cfg.backend), init, cfg.optimizer)
    except OptimizationError as exc:
        logger.warning("run %s failed: %s", record.key, exc)
        record.failed = True
        record.wall_time = time.perf_counter() - start
        return record
    record.wall_time = time.perf_counter() - start
    A_rec = reconstruct_from(n, res.alpha_star, res.beta_star, res.sigmas)
    m = metrics(A, A_rec, cfg.image_max if cfg.mode == "images" else None)
    record.objective_value = res.objective_value
    record.mse = m.mse
    record.psnr = m.psnr
    record.circuit_runs = res.circuit_runs
    record.iterations = res.iterations
    record.scale = res.scale
    record.alpha = res.alpha_star.tolist()
    record.beta = res.beta_star.tolist()
    record.sigmas = res.sigmas.tolist()
    return record


def _workers(cfg: BenchmarkConfig) -> int:
    if cfg.workers:
        return cfg.workers
    env = os.environ.get("BENCH_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_benchmark(cfg: BenchmarkConfig) -> tuple[list[RunRecord], list[dict]]:
    """Run the full grid; returns sorted records and the aggregate rows.

    When ``cfg.output_dir`` is set, CSV, JSONL and plot-data files are written.
    """
    tasks = []
    matrices = {}
    for n in cfg.sizes:
        mats = _matrices(cfg, n)
        for matrix_id, A in enumerate(mats):
            matrices[(n, matrix_id)] = A
            for seed in range(cfg.seeds_per_matrix):
                for layers in cfg.layer_range:
                    for T in cfg.t_values(n):
                        for kind in cfg.objectives:
                            tasks.append((cfg, A, n, matrix_id, seed, T, layers, kind))
    workers = min(_workers(cfg), max(len(tasks), 1))
    logger.info("running %d cells on %d worker(s)", len(tasks), workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_cell, tasks, chunksize=max(1, len(tasks) // (8 * workers))))
    else:
        records = [_run_cell(t) for t in tasks]
    records.sort(key=lambda r: r.key)
    table = aggregate(records)
    if cfg.output_dir:
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_runs_csv(records, out / f"{cfg.mode}_runs.csv")
        write_params_jsonl(records, out / f"{cfg.mode}_params.jsonl")
        write_timing_csv(records, out / f"{cfg.mode}_timing.csv")
        write_aggregate_csv(table, out / f"{cfg.mode}_aggregate.csv")
        emit_plot_data(records, out)
    return records, table


def _mean_std(values) -> tuple[float, float]:
    if not values:
        return float("nan"), float("nan")
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std())


def aggregate(records: list[RunRecord]) -> list[dict]:
    """Mean and population standard deviation per (mode, n, objective, layers, T)."""
    cells: dict[tuple, list[RunRecord]] = {}
    for r in records:
        cells.setdefault((r.mode, r.n, r.objective, r.layers, r.T), []).append(r)
    rows = []
    for key in sorted(cells):
        group = cells[key]
        ok = [r for r in group if not r.failed]
        mse = _mean_std([r.mse for r in ok])
        psnr_vals = [r.psnr for r in ok if r.psnr is not None]
        psnr = _mean_std(psnr_vals) if psnr_vals else (None, None)
        runs = _mean_std([r.circuit_runs for r in ok])
        obj = _mean_std([r.objective_value for r in ok])
        mode, n, kind, layers, T = key
        rows.append(
            {
                "mode": mode,
                "n": n,
                "objective": kind,
                "layers": layers,
                "T": T,
                "count": len(ok),
                "excluded": len(group) - len(ok),
                "mse_mean": mse[0],
                "mse_std": mse[1],
                "psnr_mean": psnr[0],
                "psnr_std": psnr[1],
                "runs_mean": runs[0],
                "runs_std": runs[1],
                "objective_mean": obj[0],
            }
        )
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_runs_csv(records: list[RunRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RUN_FIELDS)
        for r in records:
            d = asdict(r)
            writer.writerow([_fmt(d[k]) for k in RUN_FIELDS])


def write_timing_csv(records: list[RunRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TIMING_FIELDS)
        for r in records:
            d = asdict(r)
            writer.writerow([_fmt(d[k]) for k in TIMING_FIELDS])


def write_params_jsonl(records: list[RunRecord], path) -> None:
    with open(path, "w") as fh:
        for r in records:
            entry = {
                "mode": r.mode,
                "n": r.n,
                "matrix_id": r.matrix_id,
                "seed": r.seed,
                "T": r.T,
                "layers": r.layers,
                "objective": r.objective,
                "alpha": r.alpha,
                "beta": r.beta,
                "sigmas": [[s.real, s.imag] for s in map(complex, r.sigmas)],
            }
            fh.write(json.dumps(entry) + "\n")


def write_aggregate_csv(rows: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(AGGREGATE_FIELDS)
        for row in rows:
            writer.writerow([_fmt(row[k]) for k in AGGREGATE_FIELDS])


def emit_plot_data(records: list[RunRecord], output_dir) -> list[Path]:
    """One whitespace-delimited file per (mode, metric, objective, n) panel.

    Columns: ``T`` then ``mean_L{l} lower_L{l} upper_L{l}`` for each layer
    count ``l``, where lower/upper are mean -/+ one standard deviation.
    Metrics are ``mse``, ``runs`` and, for images, ``psnr``.
    """
    if not records:
        raise ValueError("no records to emit")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = aggregate(records)
    written = []
    panels = sorted({(r["mode"], r["objective"], r["n"]) for r in rows})
    for mode, kind, n in panels:
        panel = [r for r in rows if (r["mode"], r["objective"], r["n"]) == (mode, kind, n)]
        layers = sorted({r["layers"] for r in panel})
        Ts = sorted({r["T"] for r in panel})
        metric_names = ["mse", "runs"] + (["psnr"] if mode == "images" else [])
        for metric in metric_names:
            path = out / f"{mode}_{metric}_{kind}_{n}.dat"
            lines = ["# T " + " ".join(f"mean_L{l} lower_L{l} upper_L{l}" for l in layers)]
            for T in Ts:
                cols = [str(T)]
                for l in layers:
                    match = [r for r in panel if r["layers"] == l and r["T"] == T]
                    mean = match[0][f"{metric}_mean"] if match else None
                    std = match[0][f"{metric}_std"] if match else None
                    if mean is None or std is None:
                        cols += ["nan"] * 3
                    else:
                        cols += [repr(mean), repr(mean - std), repr(mean + std)]
                lines.append(" ".join(cols))
            path.write_text("\n".join(lines) + "\n")
            written.append(path)
    return written
