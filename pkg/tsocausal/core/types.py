"""
Domain types of the TSO machine.

Agents are processes p1..pn and their dispatchers d1..dn. Values are opaque
hashable objects drawn from a finite declared set; tags identify individual
writes. Everything here is immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Hashable, Mapping, Optional, Tuple, Union

VarId = str
ProcId = int
Value = Hashable


class AgentKind(str, Enum):
    PROCESS = "p"
    DISPATCHER = "d"


@dataclass(frozen=True, order=True)
class Agent:
    """A process or the dispatcher draining that process's store buffer."""

    kind: AgentKind
    pid: ProcId

    @classmethod
    def process(cls, pid: ProcId) -> "Agent":
        return cls(AgentKind.PROCESS, pid)

    @classmethod
    def dispatcher(cls, pid: ProcId) -> "Agent":
        return cls(AgentKind.DISPATCHER, pid)

    @property
    def is_process(self) -> bool:
        return self.kind is AgentKind.PROCESS

    @property
    def is_dispatcher(self) -> bool:
        return self.kind is AgentKind.DISPATCHER

    def counterpart(self) -> "Agent":
        if self.is_process:
            return Agent.dispatcher(self.pid)
        return Agent.process(self.pid)

    def sort_key(self) -> Tuple[int, int]:
        return (0 if self.is_process else 1, self.pid)

    def __str__(self) -> str:
        return f"{self.kind.value}{self.pid}"


def all_agents(n: int) -> Tuple[Agent, ...]:
    """Processes 1..n followed by dispatchers d1..dn (the joint-action order)."""
    return tuple(Agent.process(i) for i in range(1, n + 1)) + tuple(
        Agent.dispatcher(i) for i in range(1, n + 1)
    )


@dataclass(frozen=True, order=True)
class Node:
    """A point <agent, time>; its action is the one performed in round time+1."""

    agent: Agent
    time: int

    def __str__(self) -> str:
        return f"{self.agent}@{self.time}"


@dataclass(frozen=True, order=True)
class Tag:
    """The seq'th write of process `writer`. Writer 0 marks initial memory contents."""

    writer: ProcId
    seq: int

    @property
    def is_initial(self) -> bool:
        return self.writer == 0

    def __str__(self) -> str:
        return "init" if self.is_initial else f"<{self.writer},{self.seq}>"


INITIAL_TAG = Tag(0, 0)


@dataclass(frozen=True)
class OpCall:
    """An operation name plus its argument, e.g. Write(3) or Scan."""

    name: str
    arg: Value = None

    def __str__(self) -> str:
        return self.name if self.arg is None else f"{self.name}({self.arg})"


# ─────────────────────────
# Actions
# ─────────────────────────

@dataclass(frozen=True)
class Read:
    var: VarId

    def __str__(self) -> str:
        return f"R[{self.var}]"


@dataclass(frozen=True)
class Write:
    var: VarId
    value: Value

    def __str__(self) -> str:
        return f"W[{self.var},{self.value}]"


@dataclass(frozen=True)
class Fence:
    def __str__(self) -> str:
        return "F"


@dataclass(frozen=True)
class Rmw:
    var: VarId
    expected: Value
    new: Value

    def __str__(self) -> str:
        return f"RMW[{self.var},{self.expected},{self.new}]"


@dataclass(frozen=True)
class Null:
    def __str__(self) -> str:
        return "null"


@dataclass(frozen=True)
class Internal:
    label: str

    def __str__(self) -> str:
        return f"internal({self.label})"


@dataclass(frozen=True)
class Return:
    """The internal action completing an operation, carrying its response."""

    op: OpCall
    result: Value = None

    def __str__(self) -> str:
        return f"return({self.op})={self.result}"


@dataclass(frozen=True)
class Prop:
    def __str__(self) -> str:
        return "prop"


@dataclass(frozen=True)
class Invoke:
    """Environment input starting an operation at a process."""

    pid: ProcId
    op: OpCall

    def __str__(self) -> str:
        return f"invoke({self.pid},{self.op})"


Action = Union[Read, Write, Fence, Rmw, Null, Internal, Return, Prop, Invoke]
PROCESS_ACTIONS = (Read, Write, Fence, Rmw, Null, Internal, Return)
NULL = Null()


# ─────────────────────────
# Events
# ─────────────────────────

class EventKind(str, Enum):
    W = "W"
    RFB = "RfB"
    RFM = "RfM"
    F = "F"
    RMW = "RMW"
    PROP = "prop"
    INTERNAL = "internal"
    INVOKE = "invoke"
    NULL = "null"


@dataclass(frozen=True)
class Event:
    """
    What an action did when it was applied.

    `tag` is set for W, RfB, RfM and prop; an RMW also carries the fresh tag it
    installed in memory, with `read_tag` naming the write it replaced.
    """

    agent: Agent
    kind: EventKind
    var: Optional[VarId] = None
    value: Value = None
    expected: Value = None
    tag: Optional[Tag] = None
    read_tag: Optional[Tag] = None
    action: Optional[Action] = None

    @property
    def is_read(self) -> bool:
        return self.kind in (EventKind.RFB, EventKind.RFM)

    def __str__(self) -> str:
        if self.kind is EventKind.RMW:
            return f"{self.agent}:RMW({self.var},{self.expected},{self.value}){self.tag}"
        if self.var is not None:
            return f"{self.agent}:{self.kind.value}({self.var},{self.value}){self.tag}"
        if self.kind is EventKind.INTERNAL:
            return f"{self.agent}:{self.action}"
        return f"{self.agent}:{self.kind.value}"


# ─────────────────────────
# TSO state
# ─────────────────────────

@dataclass(frozen=True)
class BufferEntry:
    var: VarId
    value: Value
    tag: Tag


@dataclass(frozen=True)
class MemoryCell:
    value: Value
    tag: Tag = INITIAL_TAG


@dataclass(frozen=True)
class Universe:
    """The declared system: process count, variables, value set and initial contents."""

    n: int
    variables: Tuple[VarId, ...]
    values: Tuple[Value, ...] = tuple(range(10))
    default: Value = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a system needs at least one process")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variables must be declared once")

    @property
    def agents(self) -> Tuple[Agent, ...]:
        return all_agents(self.n)

    @property
    def pids(self) -> range:
        return range(1, self.n + 1)


@dataclass(frozen=True)
class TsoState:
    """The pair <m, buf>: memory with originating tags, and per-process FIFO buffers."""

    memory: Mapping[VarId, MemoryCell]
    buffers: Mapping[ProcId, Tuple[BufferEntry, ...]]

    @classmethod
    def initial(cls, universe: Universe) -> "TsoState":
        return cls(
            memory={x: MemoryCell(universe.default) for x in universe.variables},
            buffers={i: () for i in universe.pids},
        )

    def buffer(self, pid: ProcId) -> Tuple[BufferEntry, ...]:
        return self.buffers.get(pid, ())

    def value_of(self, var: VarId) -> Value:
        return self.memory[var].value

    def all_buffers_empty(self) -> bool:
        return all(not buf for buf in self.buffers.values())

    def with_memory(self, updates: Dict[VarId, MemoryCell]) -> "TsoState":
        return TsoState(memory={**self.memory, **updates}, buffers=self.buffers)

    def with_buffer(self, pid: ProcId, entries: Tuple[BufferEntry, ...]) -> "TsoState":
        return TsoState(memory=self.memory, buffers={**self.buffers, pid: entries})
