"""Scenario description for one simulation run."""

from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from collection_sim.core.constants import (
    ALGORITHMS,
    JITTER_HALF_WIDTH,
    SPEED_SCALE,
    STALENESS_PERIODS,
    TELEPORT_RATE,
)
from collection_sim.services.algebra import AggregationKind

SourceSelector = Union[Literal["rightmost", "leftmost"], int]
AlgorithmName = Literal["sp", "mp", "wmp"]


class SourceEntry(BaseModel):
    """From ``time`` on, the source is the device picked by ``selector``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    time: float = Field(ge=0)
    selector: SourceSelector

    @model_validator(mode="after")
    def _check_selector(self) -> "SourceEntry":
        if isinstance(self.selector, int) and self.selector < 0:
            raise ValueError(f"device id selector must be non-negative, got {self.selector}")
        return self


def switch_schedule(switch_time: Optional[float]) -> List[SourceEntry]:
    """Right end first, then the left end from ``switch_time`` (if any)."""
    schedule = [SourceEntry(time=0.0, selector="rightmost")]
    if switch_time is not None:
        schedule.append(SourceEntry(time=switch_time, selector="leftmost"))
    return schedule


class ScenarioConfig(BaseModel):
    """Full description of one corridor run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    device_count: int = Field(gt=0)
    corridor_length: float = Field(gt=0)
    corridor_width: float = Field(gt=0)
    radius: float = Field(gt=0)
    mean_period: float = Field(gt=0)
    duration: float = Field(gt=0)
    variability: float = Field(default=0.0, ge=0, le=1)
    source_schedule: List[SourceEntry] = Field(default_factory=lambda: switch_schedule(None))
    seed: int = Field(default=0, ge=0, lt=2**64)
    potential_mode: Literal["oracle", "bellman-ford"] = "oracle"
    flow: Literal["named", "claimed"] = "named"
    staleness_bound: Optional[float] = Field(default=None, gt=0)

    algorithms: Tuple[AlgorithmName, ...] = ALGORITHMS
    kind: AggregationKind = AggregationKind.SUM
    local_value: float = 1.0

    # Variability -> dynamics calibration
    speed_scale: float = Field(default=SPEED_SCALE, ge=0)
    teleport_rate: float = Field(default=TELEPORT_RATE, ge=0, le=1)
    jitter_half_width: float = Field(default=JITTER_HALF_WIDTH, ge=0, lt=1)

    check_invariants: bool = False

    @model_validator(mode="after")
    def _check_consistency(self) -> "ScenarioConfig":
        schedule = self.source_schedule
        if not schedule:
            raise ValueError("source_schedule must not be empty")
        if schedule[0].time != 0:
            raise ValueError("source_schedule must start at time 0")
        times = [entry.time for entry in schedule]
        if times != sorted(times):
            raise ValueError("source_schedule must be sorted by time")
        for entry in schedule:
            if isinstance(entry.selector, int) and entry.selector >= self.device_count:
                raise ValueError(
                    f"source_schedule selects device {entry.selector} "
                    f"but only {self.device_count} devices exist"
                )
        if not self.algorithms:
            raise ValueError("algorithms must not be empty")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ValueError("algorithms must not repeat")
        return self

    @property
    def staleness(self) -> float:
        """Neighbour exports at least this old are discarded."""
        if self.staleness_bound is not None:
            return self.staleness_bound
        return STALENESS_PERIODS * self.mean_period

    @property
    def speed(self) -> float:
        """Waypoint speed in m/s."""
        return self.variability * self.speed_scale

    @property
    def teleport_probability(self) -> float:
        return self.variability * self.teleport_rate

    @property
    def jitter_bounds(self) -> Tuple[float, float]:
        """Interval of rate multipliers and per-round jitter factors."""
        half = self.jitter_half_width * self.variability
        return 1.0 - half, 1.0 + half

    def replace(self, **changes) -> "ScenarioConfig":
        """Validated copy with ``changes`` applied."""
        data = self.model_dump()
        data.update(changes)
        return ScenarioConfig(**data)
