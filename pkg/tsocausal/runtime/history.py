"""
Operation histories read off a run.

An operation invoked at process i in round t+1 starts at node <i, t>. The
Return performed in round t' ends it at node <i, t'>, so its own actions
occupy rounds X.s+1 .. X.e.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from ..core.types import Agent, EventKind, Node, OpCall, ProcId, Return, Tag, Value
from ..exceptions import MalformedHistoryError, NotFoundError
from .run import Run

UPDATE_OPS = ("Write", "Update")


@dataclass(frozen=True)
class Operation:
    op_id: str
    process: ProcId
    index: int
    call: OpCall
    start: Node
    end: Optional[Node] = None
    result: Value = None
    op_tag: Optional[Tag] = None

    @property
    def complete(self) -> bool:
        return self.end is not None

    @property
    def name(self) -> str:
        return self.call.name

    @property
    def arg(self) -> Value:
        return self.call.arg

    @property
    def agents(self) -> Tuple[Agent, Agent]:
        return Agent.process(self.process), Agent.dispatcher(self.process)

    def __str__(self) -> str:
        suffix = f"={self.result}" if self.complete and self.result is not None else ""
        pending = "" if self.complete else " (pending)"
        return f"{self.op_id}:{self.call}{suffix}{pending}"


@dataclass(frozen=True)
class History:
    operations: Tuple[Operation, ...]
    horizon: int

    def by_id(self, op_id: str) -> Operation:
        for op in self.operations:
            if op.op_id == op_id:
                return op
        raise NotFoundError(f"no operation {op_id!r} in history", error_code="unknown_op")

    @property
    def complete(self) -> Tuple[Operation, ...]:
        return tuple(op for op in self.operations if op.complete)

    @property
    def pending(self) -> Tuple[Operation, ...]:
        return tuple(op for op in self.operations if not op.complete)

    def of_process(self, pid: ProcId) -> Tuple[Operation, ...]:
        return tuple(op for op in self.operations if op.process == pid)

    def restricted(self, ops) -> "History":
        keep = {op.op_id for op in ops}
        return History(tuple(op for op in self.operations if op.op_id in keep), self.horizon)

    def __len__(self) -> int:
        return len(self.operations)


def precedes(x: Operation, y: Operation) -> bool:
    """Real-time order: x completed strictly before y was invoked."""
    return x.end is not None and x.end.time < y.start.time


def extract_history(r: Run) -> History:
    """
    Collect the operations of a run.

    Raises:
        MalformedHistoryError: a Return without a pending operation, or returning
            a different call than the one pending
    """
    open_ops: Dict[ProcId, Operation] = {}
    closed = []
    counts: Dict[ProcId, int] = {}
    updates: Dict[ProcId, int] = {}

    for t, record in enumerate(r.rounds):
        for event in record.events:
            if event.kind is not EventKind.INTERNAL or not isinstance(event.action, Return):
                continue
            pid = event.agent.pid
            op = open_ops.pop(pid, None)
            if op is None:
                raise MalformedHistoryError(
                    f"process {pid} returns {event.action.op} in round {t + 1} with nothing pending"
                )
            if op.call != event.action.op:
                raise MalformedHistoryError(
                    f"process {pid} returns {event.action.op} while {op.call} is pending"
                )
            closed.append(Operation(
                op.op_id, op.process, op.index, op.call, op.start,
                end=Node(Agent.process(pid), t + 1), result=event.action.result, op_tag=op.op_tag,
            ))

        for pid in sorted(record.joint.invokes):
            call = record.joint.invokes[pid]
            if pid in open_ops:
                raise MalformedHistoryError(f"process {pid} invoked twice without returning")
            counts[pid] = counts.get(pid, 0) + 1
            op_tag = None
            if call.name in UPDATE_OPS:
                updates[pid] = updates.get(pid, 0) + 1
                op_tag = Tag(pid, updates[pid])
            open_ops[pid] = Operation(
                f"p{pid}#{counts[pid]}", pid, counts[pid], call,
                start=Node(Agent.process(pid), t), op_tag=op_tag,
            )

    operations = closed + list(open_ops.values())
    operations.sort(key=lambda op: (op.start.time, op.process))
    return History(tuple(operations), r.horizon)


def locate_operation(r: Run, op: Operation) -> Operation:
    """The operation of r with the same process and per-process index as `op`."""
    for candidate in extract_history(r).of_process(op.process):
        if candidate.index == op.index:
            return candidate
    raise NotFoundError(f"{op.op_id} does not occur in {r.label()}", error_code="unknown_op")


def operation_events(r: Run, op: Operation):
    """(node, event) pairs of op's process in rounds X.s+1 .. X.e."""
    agent = Agent.process(op.process)
    last = op.end.time if op.end is not None else r.horizon
    for t in range(op.start.time, last):
        event = r.rounds[t].event_of(agent)
        if event is not None:
            yield Node(agent, t), event


def contains_sync(r: Run, op: Operation) -> bool:
    """Whether the operation performs a fence or an RMW."""
    return any(e.kind in (EventKind.F, EventKind.RMW) for _, e in operation_events(r, op))


def runs_solo(r: Run, op: Operation) -> bool:
    """Only p_i and d_i act in rounds X.s+1 .. X.e."""
    if not op.complete:
        return False
    mine = set(op.agents)
    for t in range(op.start.time, op.end.time):
        if any(e.agent not in mine for e in r.rounds[t].events):
            return False
    return True


def runs_in_isolation(h: History, op: Operation) -> bool:
    """No other operation of the history is concurrent with op."""
    for other in h.operations:
        if other.op_id == op.op_id:
            continue
        if not (precedes(other, op) or precedes(op, other)):
            return False
    return True
