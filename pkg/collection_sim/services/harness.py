"""
Experiment harness: variability sweeps with seeded replications.

Each (variability, seed) pair is one simulation shared by every enabled
algorithm, so paired comparisons see identical mobility and round timing.
Runs can be spread over a process pool; rows are always returned in the
same sorted order regardless of completion order.
"""

import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Dict, Iterable, List, Sequence, Tuple

import pandas as pd

from collection_sim.core.constants import ALGORITHMS
from collection_sim.core.logging_config import get_logger
from collection_sim.models.results import SampleRow, SeedSummaryRow, SummaryRow
from collection_sim.models.scenario import ScenarioConfig
from collection_sim.services.simulator import run_simulation
from collection_sim.utils.csv_writer import samples_frame

logger = get_logger(__name__)

Window = Tuple[float, float]


class SweepError(RuntimeError):
    """A single run of a sweep failed."""

    def __init__(self, variability: float, seed: int, cause: BaseException):
        super().__init__(f"run failed for variability={variability} seed={seed}: {cause}")
        self.variability = variability
        self.seed = seed
        self.cause = cause


def run_one(config: ScenarioConfig) -> List[SampleRow]:
    """Simulate one (variability, seed) configuration and flatten its samples."""
    result = run_simulation(config)
    return [
        SampleRow(
            algorithm=algorithm,
            variability=config.variability,
            seed=config.seed,
            time=t,
            value=value,
            true_count=result.true_count,
        )
        for algorithm in config.algorithms
        for t, value in zip(result.sample_times, result.samples[algorithm])
    ]


def _row_key(row: SampleRow):
    return (row.variability, row.seed, ALGORITHMS.index(row.algorithm), row.time)


def run_sweep(
    base: ScenarioConfig,
    variabilities: Sequence[float],
    seeds: Sequence[int],
    workers: int = 1,
) -> List[SampleRow]:
    """
    Run every (variability, seed) combination of ``base``.

    Args:
        base: Scenario shared by all runs (its variability and seed are replaced)
        variabilities: Variability values in [0, 1]
        seeds: Generator seeds, one replication each
        workers: Parallel worker processes (1 runs in-process)

    Returns:
        Sample rows sorted by (variability, seed, algorithm, time)

    Raises:
        ValueError: If either list is empty
        SweepError: If any run fails, naming its variability and seed
    """
    if not variabilities:
        raise ValueError("variabilities must not be empty")
    if not seeds:
        raise ValueError("seeds must not be empty")

    configs = [base.replace(variability=v, seed=s) for v in variabilities for s in seeds]
    logger.info(
        "Sweep started",
        extra={
            "extra_data": {
                "runs": len(configs),
                "variabilities": len(variabilities),
                "seeds": len(seeds),
                "workers": workers,
            }
        }
    )

    rows: List[SampleRow] = []
    if workers <= 1:
        for config in configs:
            try:
                rows.extend(run_one(config))
            except Exception as e:
                raise SweepError(config.variability, config.seed, e) from e
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(run_one, config): config for config in configs}
            for future in as_completed(futures):
                config = futures[future]
                try:
                    rows.extend(future.result())
                except Exception as e:
                    for pending in futures:
                        pending.cancel()
                    raise SweepError(config.variability, config.seed, e) from e

    rows.sort(key=_row_key)
    logger.info("Sweep finished", extra={"extra_data": {"rows": len(rows)}})
    return rows


def _fsum_mean(series: pd.Series) -> float:
    # exact summation keeps results independent of row order
    return math.fsum(series) / len(series)


def _window_frame(rows: Iterable[SampleRow], window: Window) -> pd.DataFrame:
    start, end = window
    if not end > start:
        raise ValueError(f"degenerate window ({start}, {end})")
    frame = samples_frame(rows)
    frame = frame[(frame["time_s"] >= start) & (frame["time_s"] <= end)].copy()
    if frame.empty:
        raise ValueError(f"no samples inside window ({start}, {end})")
    frame["abs_rel_error"] = (frame["value"] - frame["true_count"]).abs() / frame["true_count"]
    return frame


def _cell_order(algorithm: str) -> int:
    return ALGORITHMS.index(algorithm) if algorithm in ALGORITHMS else len(ALGORITHMS)


def summarize_by_seed(rows: Iterable[SampleRow], window: Window) -> List[SeedSummaryRow]:
    """Window mean value and mean absolute relative error of every single run."""
    frame = _window_frame(rows, window)
    grouped = frame.groupby(["algorithm", "variability", "seed"], sort=True).agg(
        mean_value=("value", _fsum_mean),
        mean_abs_rel_error=("abs_rel_error", _fsum_mean),
    )
    result = [
        SeedSummaryRow(
            algorithm=algorithm,
            variability=float(variability),
            seed=int(seed),
            mean_value=float(row.mean_value),
            mean_abs_rel_error=float(row.mean_abs_rel_error),
        )
        for (algorithm, variability, seed), row in grouped.iterrows()
    ]
    result.sort(key=lambda r: (r.variability, _cell_order(r.algorithm), r.seed))
    return result


def summarize(rows: Iterable[SampleRow], window: Window) -> List[SummaryRow]:
    """
    Pool in-window samples across seeds per (algorithm, variability).

    ``std_error`` is the standard error of the per-seed window means
    (0 with a single seed).

    Raises:
        ValueError: If the window is degenerate or contains no samples
    """
    frame = _window_frame(rows, window)
    pooled = frame.groupby(["algorithm", "variability"], sort=True).agg(
        mean_value=("value", _fsum_mean),
        mean_abs_rel_error=("abs_rel_error", _fsum_mean),
    )
    per_seed = frame.groupby(["algorithm", "variability", "seed"], sort=True)["value"].agg(_fsum_mean)

    summary = []
    for (algorithm, variability), row in pooled.iterrows():
        seed_means = per_seed.loc[(algorithm, variability)]
        count = len(seed_means)
        std_error = float(seed_means.std(ddof=1) / math.sqrt(count)) if count > 1 else 0.0
        summary.append(
            SummaryRow(
                algorithm=algorithm,
                variability=float(variability),
                mean_value=float(row.mean_value),
                mean_abs_rel_error=float(row.mean_abs_rel_error),
                window=(float(window[0]), float(window[1])),
                std_error=std_error,
                seed_count=count,
            )
        )
    summary.sort(key=lambda r: (r.variability, _cell_order(r.algorithm)))

    for cell in summary:
        logger.info(
            "Summary cell",
            extra={
                "extra_data": {
                    "algorithm": cell.algorithm,
                    "variability": cell.variability,
                    "mean_value": cell.mean_value,
                    "mean_abs_rel_error": cell.mean_abs_rel_error,
                    "std_error": cell.std_error,
                }
            }
        )
    return summary


def error_by_variability(summary: Iterable[SummaryRow]) -> Dict[str, List[Tuple[float, float]]]:
    """Per algorithm, (variability, mean_abs_rel_error) pairs in ascending variability."""
    curves: Dict[str, List[Tuple[float, float]]] = {}
    for cell in summary:
        curves.setdefault(cell.algorithm, []).append((cell.variability, cell.mean_abs_rel_error))
    for points in curves.values():
        points.sort()
    return curves
