import heapq
from typing import List, Optional, Tuple

from collection_sim.models.payload import DeviceId


class EventQueue:
    """Time-ordered device-round events.

    Simultaneous events dequeue by ascending device id, which keeps runs
    reproducible for a given seed.
    """

    def __init__(self):
        self._heap: List[Tuple[float, DeviceId]] = []
        self.now = 0.0

    def schedule(self, time: float, device_id: DeviceId) -> None:
        if time < self.now:
            raise ValueError(f"cannot schedule device {device_id} at {time} before now={self.now}")
        heapq.heappush(self._heap, (time, device_id))

    def pop(self) -> Tuple[float, DeviceId]:
        time, device_id = heapq.heappop(self._heap)
        self.now = time
        return time, device_id

    def peek_time(self) -> Optional[float]:
        return self._heap[0][0] if self._heap else None

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)
