"""
Potential fields: approximate distance of every device from the source.

Two providers are available:
- ``oracle_potential``: exact shortest-path distance over the unit-disk
  communication graph (edge weight = Euclidean link length)
- ``bellman_ford_step``: one round of the classic adaptive distance
  gradient, evaluated locally by each device
"""

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, dijkstra
from scipy.spatial import cKDTree

from collection_sim.core.constants import MIN_LINK_DISTANCE


@dataclass(frozen=True)
class PotentialAssignment:
    """Per-device potentials (meters, +inf when unreachable) for one source."""

    potentials: np.ndarray
    source: int

    def __len__(self) -> int:
        return len(self.potentials)

    def __getitem__(self, device_id: int) -> float:
        return float(self.potentials[device_id])


def as_positions(positions) -> np.ndarray:
    """Coerce a sequence of 2-D points into an (n, 2) float array."""
    array = np.asarray(positions, dtype=float)
    if array.ndim != 2 or array.shape[1] != 2:
        raise ValueError(f"positions must have shape (n, 2), got {array.shape}")
    return array


def link_graph(positions, radius: float) -> coo_matrix:
    """
    Sparse adjacency of the communication graph.

    Devices are linked when their distance is at most ``radius``. Each link
    is stored once (i < j) with its length as weight, never below
    ``MIN_LINK_DISTANCE`` so co-located devices stay connected.
    """
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    points = as_positions(positions)
    n = len(points)
    pairs = cKDTree(points).query_pairs(r=radius, output_type="ndarray")
    if len(pairs) == 0:
        return coo_matrix((n, n))
    rows, cols = pairs[:, 0], pairs[:, 1]
    lengths = np.linalg.norm(points[rows] - points[cols], axis=1)
    return coo_matrix((np.maximum(lengths, MIN_LINK_DISTANCE), (rows, cols)), shape=(n, n))


def oracle_potential(positions, radius: float, source: int) -> PotentialAssignment:
    """
    Exact single-source shortest-path distances over the communication graph.

    Args:
        positions: (n, 2) device coordinates in meters
        radius: Communication radius in meters
        source: Index of the source device

    Returns:
        PotentialAssignment with 0 at the source and +inf for unreachable devices

    Examples:
        >>> oracle_potential([(0, 0), (6, 0), (12, 0)], 10, 0).potentials
        array([ 0.,  6., 12.])
    """
    points = as_positions(positions)
    if not 0 <= source < len(points):
        raise ValueError(f"source {source} outside 0..{len(points) - 1}")
    graph = link_graph(points, radius)
    distances = dijkstra(graph.tocsr(), directed=False, indices=source)
    distances[source] = 0.0
    return PotentialAssignment(potentials=distances, source=source)


def bellman_ford_step(is_source: bool, neighbors: Iterable[Tuple[float, float]]) -> float:
    """
    One adaptive Bellman-Ford update.

    Args:
        is_source: Whether the evaluating device is the source
        neighbors: (neighbour potential, link distance) pairs

    Returns:
        0 at the source, otherwise the minimum of potential + distance over
        neighbours with finite potential (+inf when there are none)

    Examples:
        >>> bellman_ford_step(False, [(6.0, 6.0), (0.0, 12.0)])
        12.0
    """
    if is_source:
        return 0.0
    return min(
        (potential + distance for potential, distance in neighbors if math.isfinite(potential)),
        default=math.inf,
    )


def is_connected(positions, radius: float) -> bool:
    points = as_positions(positions)
    if len(points) <= 1:
        return True
    count, _ = connected_components(link_graph(points, radius).tocsr(), directed=False)
    return count == 1

