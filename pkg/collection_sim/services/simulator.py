"""
Event-driven simulation of asynchronous device rounds in a corridor.

A ``World`` holds device states, the shared position array, the seeded
generator and the event queue. ``fire_round`` executes one device round:
move, gather fresh neighbour exports, update the potential, run every
enabled collection strategy and schedule the next round. ``run_simulation``
drives the queue and samples the value held by the current source once per
simulated second.
"""

import math
import time as wall_clock
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from collection_sim.core.constants import (
    FLOW_CLAIMED,
    POTENTIAL_ORACLE,
    SAMPLE_INTERVAL_SECONDS,
    SHARE_SUM_TOLERANCE,
)
from collection_sim.core.logging_config import get_logger
from collection_sim.models.device import DeviceState
from collection_sim.models.payload import DeviceId, ExportPayload, NeighborView, RoundContext
from collection_sim.models.scenario import ScenarioConfig, SourceEntry
from collection_sim.services.algebra import Aggregation, get_aggregation
from collection_sim.services.collection import get_step_function, inflow_sources
from collection_sim.services.event_queue import EventQueue
from collection_sim.services.mobility import advance_waypoint, random_point, random_points
from collection_sim.services.potential import PotentialAssignment, bellman_ford_step, oracle_potential

logger = get_logger(__name__)


class InvariantViolation(AssertionError):
    """Raised when a round breaks a structural invariant of the collection layer."""
    pass


@dataclass
class World:
    """Complete mutable state of one simulation run."""

    config: ScenarioConfig
    rng: np.random.Generator
    positions: np.ndarray
    devices: List[DeviceState]
    queue: EventQueue
    aggregation: Aggregation
    anchors: Dict[str, DeviceId]
    positions_version: int = 0
    potential_field: Optional[PotentialAssignment] = None
    field_key: Optional[Tuple[int, DeviceId]] = None
    trace: Optional[List[Tuple[float, DeviceId]]] = None

    @property
    def device_count(self) -> int:
        return len(self.devices)


@dataclass
class SimulationResult:
    """Source samples of one run, one list entry per sampled second."""

    sample_times: List[int]
    samples: Dict[str, List[float]]
    rounds: int
    true_count: int
    trace: Optional[List[Tuple[float, DeviceId]]] = None


def build_scenario(config: ScenarioConfig, record_trace: bool = False) -> World:
    """
    Draw the initial world for ``config``.

    Positions, waypoints, rate multipliers and initial phases all come from
    one generator seeded with ``config.seed``, so building twice yields
    identical worlds.
    """
    rng = np.random.default_rng(config.seed)
    n = config.device_count
    length, width = config.corridor_length, config.corridor_width

    positions = random_points(rng, n, length, width)
    waypoints = random_points(rng, n, length, width)
    low, high = config.jitter_bounds
    multipliers = rng.uniform(low, high, n)
    phases = rng.uniform(0.0, config.mean_period, n)

    aggregation = get_aggregation(config.kind)
    aggregation.validate(config.local_value)

    anchors = {
        "rightmost": int(np.argmax(positions[:, 0])),
        "leftmost": int(np.argmin(positions[:, 0])),
    }

    devices = [
        DeviceState(
            id=i,
            position=positions[i],
            waypoint=waypoints[i],
            speed=config.speed,
            rate_multiplier=float(multipliers[i]),
            next_fire=float(phases[i]),
            potential=math.inf,
            local_value=config.local_value,
            exports={name: ExportPayload.initial(aggregation) for name in config.algorithms},
        )
        for i in range(n)
    ]

    queue = EventQueue()
    for device in devices:
        queue.schedule(device.next_fire, device.id)

    world = World(
        config=config,
        rng=rng,
        positions=positions,
        devices=devices,
        queue=queue,
        aggregation=aggregation,
        anchors=anchors,
        trace=[] if record_trace else None,
    )

    if config.potential_mode == POTENTIAL_ORACLE:
        field_ = _oracle_field(world, current_source(world, 0.0))
        for device in devices:
            device.potential = field_[device.id]

    logger.debug(
        "Scenario built",
        extra={"extra_data": {"devices": n, "seed": config.seed, "variability": config.variability}}
    )
    return world


def current_source(
    world: World,
    time: float,
    source_schedule: Optional[Sequence[SourceEntry]] = None,
) -> DeviceId:
    """
    Device selected by the latest schedule entry not after ``time``.

    ``rightmost`` / ``leftmost`` refer to the extremal devices at t = 0.
    """
    schedule = source_schedule if source_schedule is not None else world.config.source_schedule
    selected = schedule[0]
    for entry in schedule:
        if entry.time <= time:
            selected = entry
        else:
            break
    if isinstance(selected.selector, int):
        return selected.selector
    return world.anchors[selected.selector]


def _oracle_field(world: World, source: DeviceId) -> PotentialAssignment:
    key = (world.positions_version, source)
    if world.field_key != key:
        world.potential_field = oracle_potential(world.positions, world.config.radius, source)
        world.field_key = key
    return world.potential_field


def _move(world: World, state: DeviceState, time: float) -> None:
    config = world.config
    elapsed = time - state.last_moved
    state.last_moved = time

    if world.rng.random() < config.teleport_probability:
        state.position[:] = random_point(world.rng, config.corridor_length, config.corridor_width)
        world.positions_version += 1
        return

    travel = state.speed * elapsed
    if travel <= 0:
        return
    position, state.waypoint = advance_waypoint(
        state.position, state.waypoint, travel, world.rng,
        config.corridor_length, config.corridor_width,
    )
    state.position[:] = position
    world.positions_version += 1


def _fresh_neighbors(world: World, device_id: DeviceId, time: float) -> List[Tuple[DeviceId, float, float]]:
    """(id, link distance, age) of in-range devices whose export is still fresh."""
    config = world.config
    offsets = world.positions - world.positions[device_id]
    distances = np.hypot(offsets[:, 0], offsets[:, 1])
    in_range = np.flatnonzero(distances <= config.radius)

    neighbors = []
    for other in in_range:
        other = int(other)
        if other == device_id:
            continue
        age = time - world.devices[other].exported_at
        if age < config.staleness:
            neighbors.append((other, float(distances[other]), age))
    return neighbors


def _check_round(
    algorithm: str,
    ctx: RoundContext,
    payload: ExportPayload,
    potentials: Dict[DeviceId, float],
) -> None:
    """
    Check one round against the potentials it was evaluated with.

    Every inflow edge must descend strictly, so the edges taken at any one
    instant form a DAG.
    """
    for sender in inflow_sources(ctx, algorithm):
        if not potentials[sender] > ctx.own_potential:
            raise InvariantViolation(
                f"{algorithm}: device {ctx.own_id} (P={ctx.own_potential}) took inflow "
                f"from {sender} (P={potentials[sender]})"
            )
    if payload.shares:
        total = math.fsum(payload.shares.values())
        if abs(total - 1.0) > SHARE_SUM_TOLERANCE:
            raise InvariantViolation(f"{algorithm}: device {ctx.own_id} exported shares summing to {total}")
    if payload.lower_count != len(payload.lower_set):
        raise InvariantViolation(f"{algorithm}: device {ctx.own_id} lower count mismatch")
    if payload.parent is not None and payload.parent not in payload.lower_set:
        raise InvariantViolation(f"{algorithm}: device {ctx.own_id} parent outside its lower set")


def fire_round(world: World, device_id: DeviceId, time: float) -> World:
    """
    Execute one round of ``device_id`` at ``time`` and schedule its next one.

    Steps: move (or jump), collect fresh in-range exports, update the
    potential, run every enabled strategy, reschedule.
    """
    config = world.config
    state = world.devices[device_id]
    if world.trace is not None:
        world.trace.append((time, device_id))

    _move(world, state, time)

    source = current_source(world, time)
    neighbors = _fresh_neighbors(world, device_id, time)

    if config.potential_mode == POTENTIAL_ORACLE:
        field_ = _oracle_field(world, source)
        state.potential = field_[device_id]
        if config.flow == FLOW_CLAIMED:
            # neighbours are read as of their own last round
            potentials = {other: world.devices[other].potential for other, _, _ in neighbors}
        else:
            potentials = {other: field_[other] for other, _, _ in neighbors}
    else:
        potentials = {other: world.devices[other].potential for other, _, _ in neighbors}
        state.potential = bellman_ford_step(
            device_id == source,
            [(potentials[other], distance) for other, distance, _ in neighbors],
        )

    fresh_exports = {}
    for algorithm in config.algorithms:
        views = [
            NeighborView(
                id=other,
                potential=potentials[other],
                link_distance=distance,
                payload=world.devices[other].exports[algorithm],
                age=age,
            )
            for other, distance, age in neighbors
        ]
        ctx = RoundContext(
            own_id=device_id,
            own_value=state.local_value,
            own_potential=state.potential,
            is_source=device_id == source,
            radius=config.radius,
            neighbors=views,
            kind=world.aggregation,
            flow=config.flow,
        )
        payload = get_step_function(algorithm)(ctx)
        if config.check_invariants:
            _check_round(algorithm, ctx, payload, potentials)
        fresh_exports[algorithm] = payload

    state.exports = fresh_exports
    state.exported_at = time
    state.last_fired = time
    state.rounds += 1

    low, high = config.jitter_bounds
    jitter = world.rng.uniform(low, high)
    state.next_fire = time + config.mean_period * state.rate_multiplier * jitter
    world.queue.schedule(state.next_fire, device_id)
    return world


def sample_at_source(world: World, time: float, algorithm: str) -> float:
    """Latest aggregate exported by the current source (identity before its first round)."""
    state = world.devices[current_source(world, time)]
    if not state.has_fired:
        return world.aggregation.identity
    return state.exports[algorithm].aggregate


def advance_to(world: World, time: float) -> int:
    """Fire every queued round scheduled at or before ``time``; return the count."""
    fired = 0
    while world.queue and world.queue.peek_time() <= time:
        event_time, device_id = world.queue.pop()
        fire_round(world, device_id, event_time)
        fired += 1
    return fired


def run_simulation(config: ScenarioConfig, record_trace: bool = False) -> SimulationResult:
    """
    Simulate ``config`` and sample every enabled algorithm once per second.

    Samples are taken at t = 0, 1, ..., floor(duration), each after all
    rounds scheduled at or before t have fired.
    """
    started = wall_clock.perf_counter()
    world = build_scenario(config, record_trace=record_trace)

    sample_times = list(range(0, int(math.floor(config.duration)) + 1, SAMPLE_INTERVAL_SECONDS))
    samples: Dict[str, List[float]] = {name: [] for name in config.algorithms}
    rounds = 0
    last_source = current_source(world, 0.0)

    for t in sample_times:
        rounds += advance_to(world, float(t))
        source = current_source(world, float(t))
        if source != last_source:
            logger.info(
                "Source switched",
                extra={"extra_data": {"time": t, "from": last_source, "to": source, "seed": config.seed}}
            )
            last_source = source
        for name in config.algorithms:
            samples[name].append(sample_at_source(world, float(t), name))

    logger.info(
        "Simulation finished",
        extra={
            "extra_data": {
                "seed": config.seed,
                "variability": config.variability,
                "devices": config.device_count,
                "rounds": rounds,
                "wall_seconds": round(wall_clock.perf_counter() - started, 3),
            }
        }
    )
    return SimulationResult(
        sample_times=sample_times,
        samples=samples,
        rounds=rounds,
        true_count=config.device_count,
        trace=world.trace,
    )
