"""
Sequential specifications of the objects the fixtures implement.

A spec steps an abstract state through one operation. `step` checks a
complete operation's response and returns None when it is illegal;
`step_pending` applies a pending operation's effect with whatever response
it would have had.
"""

from abc import ABC, abstractmethod
from typing import Hashable, List, Optional, Tuple

from ..core.types import Universe, Value
from ..runtime.history import History, Operation

State = Hashable


class SequentialSpec(ABC):
    name: str = ""

    @abstractmethod
    def initial(self) -> State:
        ...

    @abstractmethod
    def step(self, state: State, op: Operation) -> Optional[State]:
        ...

    def step_pending(self, state: State, op: Operation) -> Optional[State]:
        return self.step(state, op)

    def dependencies(self, op: Operation, history: History) -> List[Operation]:
        """Operations whose values op's response mentions."""
        return []


def value_of(op: Operation) -> Value:
    """The value an operation is about: what a Read returned or what a Write wrote."""
    if op.name == "Read":
        return op.result
    return op.arg


class RegisterSpec(SequentialSpec):
    name = "register"

    def __init__(self, default: Value = 0):
        self.default = default

    def initial(self) -> State:
        return self.default

    def step(self, state: State, op: Operation) -> Optional[State]:
        if op.name == "Write":
            return op.arg
        if op.name == "Read":
            return state if op.result == state else None
        return None

    def step_pending(self, state: State, op: Operation) -> Optional[State]:
        if op.name == "Write":
            return op.arg
        return state

    def dependencies(self, op: Operation, history: History) -> List[Operation]:
        if op.name != "Read" or op.result == self.default:
            return []
        return [w for w in history.operations if w.name == "Write" and w.arg == op.result]


class SnapshotSpec(SequentialSpec):
    """Single-writer snapshot over n components, initially all ⊥ (None)."""

    name = "snapshot"

    def __init__(self, n: int):
        self.n = n

    def initial(self) -> State:
        return (None,) * self.n

    def step(self, state: Tuple, op: Operation) -> Optional[State]:
        if op.name == "Update":
            updated = list(state)
            updated[op.process - 1] = op.arg
            return tuple(updated)
        if op.name == "Scan":
            result = tuple(op.result) if op.result is not None else None
            return state if result == state else None
        return None

    def step_pending(self, state: Tuple, op: Operation) -> Optional[State]:
        if op.name == "Update":
            return self.step(state, op)
        return state

    def dependencies(self, op: Operation, history: History) -> List[Operation]:
        if op.name != "Scan" or op.result is None:
            return []
        needed = []
        for idx, value in enumerate(op.result):
            if value is None:
                continue
            needed.extend(
                u for u in history.of_process(idx + 1) if u.name == "Update" and u.arg == value
            )
        return needed


def spec_for(kind: str, universe: Universe) -> SequentialSpec:
    if kind == "register":
        return RegisterSpec(universe.default)
    if kind == "snapshot":
        return SnapshotSpec(universe.n)
    raise ValueError(f"no sequential specification for {kind!r}")
