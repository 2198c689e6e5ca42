from .astar import NoPathError, astar_optimal
from .batch import ALL_VARIANTS, BatchResult, ExperimentConfig, feasible_world, run_batch
from .bench import BenchStats, bench_filtering, bench_kernels, synthetic_scans
from .metrics import LengthMismatchError, MetricsReport, RobotRow, compute_metrics

__all__ = [
    "ALL_VARIANTS",
    "BatchResult",
    "BenchStats",
    "ExperimentConfig",
    "LengthMismatchError",
    "MetricsReport",
    "NoPathError",
    "RobotRow",
    "astar_optimal",
    "bench_filtering",
    "bench_kernels",
    "compute_metrics",
    "feasible_world",
    "run_batch",
    "synthetic_scans",
]
