"""
Protocols, local states and schedules.

A process's local state is the list of records it has observed so far; its
protocol maps that list to a nonempty set of candidate actions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, FrozenSet, Mapping, Optional, Sequence, Tuple, Union

from ..core.types import (
    Action,
    Event,
    EventKind,
    Internal,
    NULL,
    OpCall,
    ProcId,
    Return,
    Universe,
    Value,
    VarId,
)
from ..exceptions import InvalidActionError, ScheduleInvalidError


class RecordKind(str, Enum):
    W = "W"
    R = "R"
    RMW = "RMW"
    F = "F"
    INTERNAL = "internal"
    INVOKE = "invoke"
    RETURN = "return"


@dataclass(frozen=True)
class LocalRecord:
    """One entry of a local state. Reads are recorded as R(x, v) whatever their source."""

    kind: RecordKind
    var: Optional[VarId] = None
    value: Value = None
    expected: Value = None
    label: Optional[str] = None
    op: Optional[OpCall] = None

    @classmethod
    def from_event(cls, event: Event) -> Optional["LocalRecord"]:
        if event.kind is EventKind.W:
            return cls(RecordKind.W, event.var, event.value)
        if event.is_read:
            return cls(RecordKind.R, event.var, event.value)
        if event.kind is EventKind.RMW:
            return cls(RecordKind.RMW, event.var, event.value, expected=event.expected)
        if event.kind is EventKind.F:
            return cls(RecordKind.F)
        if event.kind is EventKind.INTERNAL:
            if isinstance(event.action, Return):
                return cls(RecordKind.RETURN, value=event.action.result, op=event.action.op)
            label = event.action.label if isinstance(event.action, Internal) else None
            return cls(RecordKind.INTERNAL, label=label)
        return None

    @classmethod
    def invoke(cls, op: OpCall) -> "LocalRecord":
        return cls(RecordKind.INVOKE, op=op)

    def __str__(self) -> str:
        if self.kind is RecordKind.W:
            return f"W({self.var},{self.value})"
        if self.kind is RecordKind.R:
            return f"R({self.var},{self.value})"
        if self.kind is RecordKind.RMW:
            return f"RMW({self.var},{self.expected},{self.value})"
        if self.kind is RecordKind.INVOKE:
            return f"invoke({self.op})"
        if self.kind is RecordKind.RETURN:
            return f"return({self.op})={self.value}"
        if self.kind is RecordKind.INTERNAL:
            return f"internal({self.label})"
        return "F"


LocalState = Tuple[LocalRecord, ...]
ProtocolFn = Callable[[LocalState], Sequence[Action]]


def current_operation(local: LocalState) -> Tuple[Optional[OpCall], LocalState]:
    """The pending operation of a local state and the records produced since its invoke."""
    for idx in range(len(local) - 1, -1, -1):
        record = local[idx]
        if record.kind is RecordKind.RETURN:
            return None, ()
        if record.kind is RecordKind.INVOKE:
            return record.op, local[idx + 1:]
    return None, ()


@dataclass(frozen=True)
class Protocol:
    """A named protocol: one component per process over a declared universe."""

    name: str
    universe: Universe
    components: Mapping[ProcId, ProtocolFn]

    def candidates(self, pid: ProcId, local: LocalState) -> Tuple[Action, ...]:
        if pid not in self.components:
            raise InvalidActionError(f"{self.name} has no component for process {pid}")
        actions = tuple(self.components[pid](local))
        if not actions:
            raise InvalidActionError(
                f"{self.name} offers no action to process {pid}",
                error_code="empty_candidates",
            )
        return actions


def straight_line(program: Sequence[Action]) -> ProtocolFn:
    """A deterministic component performing `program` once, then idling."""
    program = tuple(program)

    def component(local: LocalState) -> Tuple[Action, ...]:
        done = sum(1 for r in local if r.kind is not RecordKind.INVOKE)
        if done < len(program):
            return (program[done],)
        return (NULL,)

    return component


Choice = Union[int, Action]


@dataclass(frozen=True)
class RoundPlan:
    """
    What should happen in one round before enabledness is consulted.

    `moves` picks each moving process's action, either as an index into its
    candidates or as the action itself; `props` lists dispatchers asked to
    propagate; `invokes` are the environment's operation calls.
    """

    moves: Mapping[ProcId, Choice] = field(default_factory=dict)
    props: FrozenSet[ProcId] = frozenset()
    invokes: Mapping[ProcId, OpCall] = field(default_factory=dict)


@dataclass(frozen=True)
class Schedule:
    """An explicit, replayable sequence of round plans."""

    rounds: Tuple[RoundPlan, ...]
    seed: Optional[int] = None

    def __len__(self) -> int:
        return len(self.rounds)

    def plan_round(self, state, t: int) -> RoundPlan:
        if t >= len(self.rounds):
            raise ScheduleInvalidError(
                f"schedule has {len(self.rounds)} rounds, round {t + 1} requested",
                error_code="schedule_too_short",
            )
        return self.rounds[t]
