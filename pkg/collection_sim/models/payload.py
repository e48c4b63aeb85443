"""Per-round collection types: neighbour views, exports and round contexts."""

from dataclasses import dataclass, field
from typing import FrozenSet, List, Mapping, Optional

from collection_sim.core.constants import FLOW_NAMED, FLOW_RULES
from collection_sim.services.algebra import Aggregation, get_aggregation

DeviceId = int


@dataclass(frozen=True, slots=True)
class ExportPayload:
    """What a device publishes at the end of a round for one algorithm."""

    aggregate: float
    parent: Optional[DeviceId] = None
    shares: Mapping[DeviceId, float] = field(default_factory=dict)
    lower_set: FrozenSet[DeviceId] = frozenset()
    # N(δ): sum of link weights over D⁻ at export time (weighted multi-path only)
    weight_total: float = 0.0

    @property
    def lower_count(self) -> int:
        """Size of D⁻ at export time."""
        return len(self.lower_set)

    @classmethod
    def initial(cls, aggregation: Aggregation) -> "ExportPayload":
        """Identity aggregate, no parent, no shares, empty lower set."""
        return cls(aggregate=aggregation.identity)


@dataclass(frozen=True, slots=True)
class NeighborView:
    """What a device knows about one linked device at round time."""

    id: DeviceId
    potential: float
    link_distance: float
    payload: ExportPayload
    age: float = 0.0


@dataclass(frozen=True, slots=True)
class RoundContext:
    """Inputs of one device round."""

    own_id: DeviceId
    own_value: float
    own_potential: float
    is_source: bool
    radius: float
    neighbors: List[NeighborView]
    kind: Aggregation
    flow: str = FLOW_NAMED

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius!r}")
        if self.flow not in FLOW_RULES:
            raise ValueError(f"unknown flow rule {self.flow!r}, expected one of {list(FLOW_RULES)}")
        object.__setattr__(self, "kind", get_aggregation(self.kind))
        self.kind.validate(self.own_value)
