"""
Fixture plumbing: a fixture bundles a universe, one protocol component per
process and, for object implementations, the workload that drives them.
"""

import random
from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional

from ..core.types import Action, NULL, OpCall, ProcId, Universe
from ..runtime.protocol import LocalState, Protocol, ProtocolFn, current_operation
from ..runtime.run import GlobalState

# (pid, pending call, records since its invoke, whole local state) -> next action
OperationStep = Callable[[ProcId, OpCall, LocalState, LocalState], Action]


def operation_component(pid: ProcId, step: OperationStep) -> ProtocolFn:
    """A deterministic component that idles between operations and runs `step` inside one."""

    def component(local: LocalState):
        call, since = current_operation(local)
        if call is None:
            return (NULL,)
        return (step(pid, call, since, local),)

    return component


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    make_universe: Callable[[int], Universe]
    make_components: Callable[[Universe], Mapping[ProcId, ProtocolFn]]
    make_workload: Optional[Callable[[Universe], object]] = None
    object_kind: Optional[str] = None
    default_n: int = 2

    def universe(self, n: Optional[int] = None) -> Universe:
        return self.make_universe(n or self.default_n)

    def protocol(self, n: Optional[int] = None) -> Protocol:
        universe = self.universe(n)
        return Protocol(self.name, universe, self.make_components(universe))

    def workload(self, universe: Universe, ratio: float = 0.5):
        """A fresh workload; `ratio` is the share of writes or updates in the mix."""
        return self.make_workload(universe, ratio) if self.make_workload else None


class RegisterWorkload:
    """Reads and writes with globally unique written values, so each value
    identifies the write that produced it."""

    def __init__(self, universe: Universe, write_ratio: float = 0.5):
        self.fresh = [v for v in universe.values if v != universe.default]
        self.write_ratio = write_ratio

    def next_call(self, rng: random.Random, pid: ProcId, state: GlobalState) -> Optional[OpCall]:
        if self.fresh and rng.random() < self.write_ratio:
            return OpCall("Write", self.fresh.pop(0))
        return OpCall("Read")


class SnapshotWorkload:
    """Updates and scans; each process updates with a value at most once."""

    def __init__(self, universe: Universe, update_ratio: float = 0.5):
        self.fresh: Dict[ProcId, list] = {
            pid: [v for v in universe.values if v is not None] for pid in universe.pids
        }
        self.update_ratio = update_ratio

    def next_call(self, rng: random.Random, pid: ProcId, state: GlobalState) -> Optional[OpCall]:
        if self.fresh[pid] and rng.random() < self.update_ratio:
            return OpCall("Update", self.fresh[pid].pop(0))
        return OpCall("Scan")
