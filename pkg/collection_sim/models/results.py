"""Harness output records."""

from dataclasses import dataclass
from typing import Tuple


@dataclass(frozen=True, slots=True)
class SampleRow:
    """One value read at the source for one algorithm at one simulated second."""

    algorithm: str
    variability: float
    seed: int
    time: int
    value: float
    true_count: int


@dataclass(frozen=True, slots=True)
class SummaryRow:
    """Window statistics for one (algorithm, variability) cell, pooled across seeds."""

    algorithm: str
    variability: float
    mean_value: float
    mean_abs_rel_error: float
    window: Tuple[float, float]
    std_error: float = 0.0
    seed_count: int = 0


@dataclass(frozen=True, slots=True)
class SeedSummaryRow:
    """Window statistics for a single (algorithm, variability, seed) run."""

    algorithm: str
    variability: float
    seed: int
    mean_value: float
    mean_abs_rel_error: float
