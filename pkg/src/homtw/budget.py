"""Search budgets: node counts and wall-clock limits."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .errors import Inconclusive


@dataclass
class Budget:
    """Limits for one search.  ``None`` means unlimited.

    A budget is consumed as the search runs; pass a fresh one per query.
    """

    nodes: int | None = None
    seconds: float | None = None
    used: int = 0
    _start: float = field(default_factory=time.monotonic, repr=False)

    def tick(self, k: int = 1) -> None:
        self.used += k
        if self.nodes is not None and self.used > self.nodes:
            raise Inconclusive(f"node budget of {self.nodes} exhausted")
        if self.seconds is not None and self.used % 256 == 0:
            if time.monotonic() - self._start > self.seconds:
                raise Inconclusive(f"time budget of {self.seconds}s exhausted")

    def fresh(self) -> Budget:
        return Budget(self.nodes, self.seconds)


def unlimited() -> Budget:
    return Budget()
