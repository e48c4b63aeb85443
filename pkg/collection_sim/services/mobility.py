"""
Corridor mobility: random-waypoint walks plus occasional long-range jumps.

Every point drawn here lies inside the [0, length] x [0, width] rectangle,
and walks move along straight segments between such points, so devices
never leave the corridor.
"""

from typing import Tuple

import numpy as np


def random_point(rng: np.random.Generator, length: float, width: float) -> np.ndarray:
    """Uniform point in the corridor."""
    return np.array([rng.uniform(0.0, length), rng.uniform(0.0, width)])


def random_points(rng: np.random.Generator, count: int, length: float, width: float) -> np.ndarray:
    """``count`` uniform points in the corridor, as an (count, 2) array."""
    return np.column_stack((rng.uniform(0.0, length, count), rng.uniform(0.0, width, count)))


def advance_waypoint(
    position: np.ndarray,
    waypoint: np.ndarray,
    travel: float,
    rng: np.random.Generator,
    length: float,
    width: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Walk ``travel`` meters towards the waypoint.

    On arrival a new waypoint is drawn and the leftover distance is walked
    towards it.

    Returns:
        (new position, current waypoint)
    """
    position = position.copy()
    remaining = travel
    while remaining > 0:
        offset = waypoint - position
        gap = float(np.hypot(offset[0], offset[1]))
        if gap <= remaining:
            position = waypoint.copy()
            remaining -= gap
            waypoint = random_point(rng, length, width)
        else:
            position += offset * (remaining / gap)
            remaining = 0.0
    np.clip(position, (0.0, 0.0), (length, width), out=position)
    return position, waypoint
