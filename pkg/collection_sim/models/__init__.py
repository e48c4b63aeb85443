from collection_sim.models.device import DeviceState
from collection_sim.models.payload import DeviceId, ExportPayload, NeighborView, RoundContext
from collection_sim.models.results import SampleRow, SeedSummaryRow, SummaryRow
from collection_sim.models.scenario import ScenarioConfig, SourceEntry, switch_schedule

__all__ = [
    "DeviceId",
    "DeviceState",
    "ExportPayload",
    "NeighborView",
    "RoundContext",
    "SampleRow",
    "ScenarioConfig",
    "SeedSummaryRow",
    "SourceEntry",
    "SummaryRow",
    "switch_schedule",
]
