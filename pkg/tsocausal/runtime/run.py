"""
Runs: finite sequences of global states linked by joint actions.

A joint action is applied processes first (p1..pn), then dispatchers
(d1..dn), then the environment's invokes. Round t+1 moves the run from
time t to time t+1, so the action of node <b, t> lives in rounds[t].
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterator, List, Mapping, Optional, Tuple

from ..core.machine import apply, clashes, conflicts, consumes_write_counter
from ..core.types import (
    Action,
    Agent,
    Event,
    NULL,
    Node,
    Null,
    OpCall,
    Prop,
    ProcId,
    Return,
    TsoState,
    Universe,
)
from ..exceptions import (
    ConflictingJointActionError,
    DoubleInvokeError,
    InvalidActionError,
    PreconditionViolatedError,
)
from .protocol import LocalRecord, LocalState, Protocol, RoundPlan, Schedule

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JointAction:
    """One action per agent; absent processes and dispatchers not in `props` stay null."""

    processes: Mapping[ProcId, Action] = field(default_factory=dict)
    props: FrozenSet[ProcId] = frozenset()
    invokes: Mapping[ProcId, OpCall] = field(default_factory=dict)

    def action_of(self, agent: Agent) -> Action:
        if agent.is_dispatcher:
            return Prop() if agent.pid in self.props else NULL
        return self.processes.get(agent.pid, NULL)

    @property
    def is_idle(self) -> bool:
        return not self.props and not self.invokes and all(
            isinstance(a, Null) for a in self.processes.values()
        )


@dataclass(frozen=True)
class GlobalState:
    """TSO state plus every process's local state, pending operation and write counter."""

    tso: TsoState
    locals: Mapping[ProcId, LocalState]
    pending_ops: Mapping[ProcId, Optional[OpCall]]
    write_counters: Mapping[ProcId, int]

    @classmethod
    def initial(cls, universe: Universe) -> "GlobalState":
        return cls(
            tso=TsoState.initial(universe),
            locals={i: () for i in universe.pids},
            pending_ops={i: None for i in universe.pids},
            write_counters={i: 0 for i in universe.pids},
        )

    def local(self, pid: ProcId) -> LocalState:
        return self.locals[pid]


@dataclass(frozen=True)
class RoundRecord:
    """The joint action of a round and the non-null events it produced, in application order."""

    joint: JointAction
    events: Tuple[Event, ...] = ()

    def event_of(self, agent: Agent) -> Optional[Event]:
        for event in self.events:
            if event.agent == agent:
                return event
        return None


@dataclass(frozen=True)
class Run:
    universe: Universe
    protocol_name: str
    states: Tuple[GlobalState, ...]
    rounds: Tuple[RoundRecord, ...] = ()
    seed: Optional[int] = None

    @classmethod
    def empty(cls, universe: Universe, protocol_name: str, seed: Optional[int] = None) -> "Run":
        return cls(universe, protocol_name, (GlobalState.initial(universe),), (), seed)

    @property
    def horizon(self) -> int:
        return len(self.rounds)

    @property
    def final(self) -> GlobalState:
        return self.states[-1]

    def state(self, t: int) -> GlobalState:
        return self.states[t]

    def local(self, pid: ProcId, t: int) -> LocalState:
        return self.states[t].locals[pid]

    def event_at(self, node: Node) -> Optional[Event]:
        """The event performed by node's agent in round node.time + 1, if any."""
        if node.time >= self.horizon:
            return None
        return self.rounds[node.time].event_of(node.agent)

    def nodes(self) -> Iterator[Node]:
        for agent in self.universe.agents:
            for t in range(self.horizon + 1):
                yield Node(agent, t)

    def action_nodes(self) -> Iterator[Tuple[Node, Event]]:
        for t, record in enumerate(self.rounds):
            for event in record.events:
                yield Node(event.agent, t), event

    def label(self) -> str:
        return f"{self.protocol_name}/n={self.universe.n}/T={self.horizon}"


def joint_apply(
    g: GlobalState,
    joint: JointAction,
    universe: Optional[Universe] = None,
) -> Tuple[GlobalState, Tuple[Event, ...]]:
    """
    Apply a joint action strictly. With a universe, written values must be declared in it.

    Raises:
        NotEnabledError: some component is not enabled at its turn
        ConflictingJointActionError: two components conflict, or a write and its
            own prop share the round
        DoubleInvokeError: an invoke reaches a process with a pending operation
    """
    values = universe.values if universe is not None else None
    tso = g.tso
    locals_ = dict(g.locals)
    pending = dict(g.pending_ops)
    counters = dict(g.write_counters)
    events: List[Event] = []

    def perform(agent: Agent, action: Action):
        nonlocal tso
        if agent.pid not in locals_:
            raise InvalidActionError(f"no agent {agent} in this system")
        tso, event = apply(tso, agent, action, counters[agent.pid] + 1, values)
        for other in events:
            if clashes(other, event):
                reason = "conflict" if conflicts(other, event) else "buffer_flow"
                raise ConflictingJointActionError(
                    f"{other} and {event} cannot share a round",
                    pair=(other, event),
                    error_code=reason,
                )
        if consumes_write_counter(event):
            counters[agent.pid] += 1
        events.append(event)
        if agent.is_process:
            record = LocalRecord.from_event(event)
            if record is not None:
                locals_[agent.pid] = locals_[agent.pid] + (record,)
            if isinstance(action, Return):
                pending[agent.pid] = None

    for pid in sorted(joint.processes):
        action = joint.processes[pid]
        if not isinstance(action, Null):
            perform(Agent.process(pid), action)

    for pid in sorted(joint.props):
        perform(Agent.dispatcher(pid), Prop())

    for pid in sorted(joint.invokes):
        if pending.get(pid) is not None:
            raise DoubleInvokeError(
                f"process {pid} still runs {pending[pid]} when {joint.invokes[pid]} arrives",
                error_code="double_invoke",
            )
        op = joint.invokes[pid]
        pending[pid] = op
        locals_[pid] = locals_[pid] + (LocalRecord.invoke(op),)

    return GlobalState(tso, locals_, pending, counters), tuple(events)


def advance(r: Run, joint: JointAction) -> Run:
    """The run extended by one round performing `joint`."""
    g, events = joint_apply(r.final, joint, r.universe)
    return Run(
        r.universe, r.protocol_name, r.states + (g,),
        r.rounds + (RoundRecord(joint, events),), r.seed,
    )


def pad(r: Run, k: int) -> Run:
    """Append k all-null rounds."""
    for _ in range(k):
        r = advance(r, JointAction())
    return r


def truncate(r: Run, t: int) -> Run:
    """The prefix of r up to time t."""
    if t > r.horizon:
        raise ValueError(f"cannot truncate a run of horizon {r.horizon} at {t}")
    return Run(r.universe, r.protocol_name, r.states[:t + 1], r.rounds[:t], r.seed)


def quiesce(r: Run, p: Optional[Protocol] = None) -> Run:
    """
    Extend r with dispatcher-only rounds, one prop per round round-robin,
    until every buffer is empty. Processes take no step in those rounds.

    Raises:
        PreconditionViolatedError: p is given and r is not a run of it
    """
    if p is not None and (p.name != r.protocol_name or p.universe != r.universe):
        raise PreconditionViolatedError(
            f"{r.label()} is not a run of {p.name}", clause="protocol", error_code="protocol_mismatch",
        )
    last = 0
    n = r.universe.n
    while not r.final.tso.all_buffers_empty():
        buffers = r.final.tso.buffers
        order = [((last + k - 1) % n) + 1 for k in range(1, n + 1)]
        pid = next(i for i in order if buffers[i])
        r = advance(r, JointAction(props=frozenset({pid})))
        last = pid
    logger.debug(f"quiesced {r.label()}")
    return r


def schedule_of(r: Run) -> Schedule:
    """The explicit schedule that replays r action for action."""
    plans = tuple(
        RoundPlan(
            moves=dict(record.joint.processes),
            props=record.joint.props,
            invokes=dict(record.joint.invokes),
        )
        for record in r.rounds
    )
    return Schedule(plans, seed=r.seed)
