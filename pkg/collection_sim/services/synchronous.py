"""
Synchronous iteration of a collection strategy on a static network.

All devices fire together each round, reading the exports produced by the
previous round. On a static network with fixed potentials the iteration
reaches an exact fixed point after at most (longest descending path + 1)
rounds.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from collection_sim.core.constants import FLOW_NAMED
from collection_sim.models.payload import DeviceId, ExportPayload, NeighborView, RoundContext
from collection_sim.services.algebra import KindLike, get_aggregation
from collection_sim.services.collection import get_step_function
from collection_sim.services.potential import as_positions, oracle_potential

Adjacency = Mapping[DeviceId, Sequence[Tuple[DeviceId, float]]]


@dataclass
class SynchronousResult:
    """Outcome of a synchronous run."""

    exports: Dict[DeviceId, ExportPayload]
    source_history: List[float] = field(default_factory=list)
    converged_at: Optional[int] = None

    @property
    def rounds(self) -> int:
        return len(self.source_history)

    def aggregate(self, device_id: DeviceId) -> float:
        return self.exports[device_id].aggregate


def adjacency_from_positions(positions, radius: float) -> Dict[DeviceId, List[Tuple[DeviceId, float]]]:
    """Neighbour lists (id, link distance) of the unit-disk graph."""
    points = as_positions(positions)
    adjacency: Dict[DeviceId, List[Tuple[DeviceId, float]]] = {i: [] for i in range(len(points))}
    for i, j in cKDTree(points).query_pairs(r=radius, output_type="ndarray"):
        # the tree may accept a pair whose recomputed length is one ulp past the radius
        distance = min(float(np.linalg.norm(points[i] - points[j])), radius)
        adjacency[int(i)].append((int(j), distance))
        adjacency[int(j)].append((int(i), distance))
    for neighbors in adjacency.values():
        neighbors.sort()
    return adjacency


def iterate_synchronous(
    adjacency: Adjacency,
    potentials: Mapping[DeviceId, float],
    radius: float,
    source: DeviceId,
    algorithm: str,
    values: Optional[Mapping[DeviceId, float]] = None,
    kind: KindLike = "sum",
    max_rounds: Optional[int] = None,
    flow: str = FLOW_NAMED,
) -> SynchronousResult:
    """
    Run ``algorithm`` synchronously from identity exports until a fixed point.

    Args:
        adjacency: Neighbour lists with link distances
        potentials: Potential of every device
        radius: Communication radius
        source: Device whose aggregate is tracked
        algorithm: "sp", "mp" or "wmp"
        values: Local values (default 1 everywhere)
        kind: Aggregation kind
        max_rounds: Round cap (default: device count + 2)
        flow: Inflow rule, "named" or "claimed"

    Returns:
        SynchronousResult with final exports and the source aggregate per round
    """
    aggregation = get_aggregation(kind)
    step = get_step_function(algorithm)
    devices = sorted(adjacency)
    values = values if values is not None else {device: 1.0 for device in devices}
    max_rounds = max_rounds if max_rounds is not None else len(devices) + 2

    exports = {device: ExportPayload.initial(aggregation) for device in devices}
    result = SynchronousResult(exports=exports)

    for round_index in range(1, max_rounds + 1):
        fresh = {}
        for device in devices:
            views = [
                NeighborView(
                    id=other,
                    potential=potentials[other],
                    link_distance=distance,
                    payload=exports[other],
                )
                for other, distance in adjacency[device]
            ]
            ctx = RoundContext(
                own_id=device,
                own_value=values[device],
                own_potential=potentials[device],
                is_source=device == source,
                radius=radius,
                neighbors=views,
                kind=aggregation,
                flow=flow,
            )
            fresh[device] = step(ctx)

        result.source_history.append(fresh[source].aggregate)
        if fresh == exports:
            result.converged_at = round_index - 1
            break
        exports = fresh
        result.exports = exports

    return result


def run_synchronous(
    positions,
    radius: float,
    source: DeviceId,
    algorithm: str,
    values: Optional[Mapping[DeviceId, float]] = None,
    kind: KindLike = "sum",
    max_rounds: Optional[int] = None,
    flow: str = FLOW_NAMED,
) -> SynchronousResult:
    """Synchronous run on a 2-D deployment with oracle potentials."""
    adjacency = adjacency_from_positions(positions, radius)
    field_ = oracle_potential(positions, radius, source)
    potentials = {device: field_[device] for device in adjacency}
    return iterate_synchronous(
        adjacency, potentials, radius, source, algorithm,
        values=values, kind=kind, max_rounds=max_rounds, flow=flow,
    )


def descent_depth(adjacency: Adjacency, potentials: Mapping[DeviceId, float]) -> int:
    """
    Length, in hops, of the longest strictly descending path.

    Multi-path strategies move mass along every descending path, so this
    (not the hop diameter) bounds the rounds needed to reach a fixed point.
    """
    depth: Dict[DeviceId, int] = {}
    reachable = [device for device in adjacency if np.isfinite(potentials[device])]
    for device in sorted(reachable, key=lambda d: potentials[d]):
        lower = [
            depth[other]
            for other, _ in adjacency[device]
            if other in depth and potentials[other] < potentials[device]
        ]
        depth[device] = max(lower) + 1 if lower else 0
    return max(depth.values(), default=0)
