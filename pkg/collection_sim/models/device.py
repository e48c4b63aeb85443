from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from collection_sim.models.payload import DeviceId, ExportPayload


@dataclass(slots=True)
class DeviceState:
    """Mutable per-device simulation state.

    ``position`` is a row view into the world's position array, so writes
    through it are visible to neighbour queries.
    """

    id: DeviceId
    position: np.ndarray
    waypoint: np.ndarray
    speed: float
    rate_multiplier: float
    next_fire: float
    potential: float
    local_value: float
    exports: Dict[str, ExportPayload] = field(default_factory=dict)
    exported_at: float = 0.0
    last_moved: float = 0.0
    last_fired: Optional[float] = None
    rounds: int = 0

    @property
    def has_fired(self) -> bool:
        return self.last_fired is not None
