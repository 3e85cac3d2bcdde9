"""
A small random-matrix sweep
===========================

Equivalent CLI:

    vqsvd bench random --n 1,2 --matrices 3 --seeds 3 --layers 2,4 --objective modified --out bench_out
"""

import sys
import tempfile
from pathlib import Path

from vqsvd.bench import BenchmarkConfig, run_benchmark

out = Path(sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="vqsvd_"))
cfg = BenchmarkConfig(
    sizes=(1, 2),
    layer_range=(2, 4),
    matrices_per_size=3,
    seeds_per_matrix=3,
    objectives=("modified",),
    output_dir=str(out),
)
records, table = run_benchmark(cfg)
print(f"{len(records)} runs written to {out}")
print(f"{'n':>2} {'L':>2} {'T':>2} {'mse mean':>12} {'mse std':>12} {'runs':>8}")
for row in table:
    print(f"{row['n']:>2} {row['layers']:>2} {row['T']:>2} {row['mse_mean']:12.3e} {row['mse_std']:12.3e} {row['runs_mean']:8.0f}")
print("plot data:", sorted(p.name for p in out.glob("*.dat")))
