"""Clock sources for anytime planners.

Planners call ``tick`` once per expanded node and compare ``elapsed_ms``
against their deadline. The monotonic clock ignores ticks; the virtual
clock is driven by them alone, which makes a budgeted search a pure function
of its inputs.
"""

from __future__ import annotations

import time


class MonotonicClock:
    def __init__(self):
        self._t0 = time.perf_counter()

    def start(self) -> None:
        self._t0 = time.perf_counter()

    def tick(self, n: int = 1) -> None:
        pass

    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self._t0) * 1000.0


class VirtualClock:
    """Each tick costs ``ms_per_tick`` simulated milliseconds."""

    def __init__(self, ms_per_tick: float = 0.1):
        if ms_per_tick <= 0:
            raise ValueError("ms_per_tick must be > 0")
        self.ms_per_tick = ms_per_tick
        self.ticks = 0

    def start(self) -> None:
        self.ticks = 0

    def tick(self, n: int = 1) -> None:
        self.ticks += n

    def elapsed_ms(self) -> float:
        return self.ticks * self.ms_per_tick
