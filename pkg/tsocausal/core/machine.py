"""
The single-step TSO machine.

`enabled` decides whether an agent may perform an action in a state; `apply`
performs it and reports the resulting event. Both are pure.
"""

from typing import Collection, Optional, Tuple

from .types import (
    Agent,
    BufferEntry,
    Event,
    EventKind,
    Fence,
    Internal,
    Invoke,
    MemoryCell,
    Null,
    Prop,
    Read,
    Return,
    Rmw,
    Tag,
    TsoState,
    VarId,
    Write,
    PROCESS_ACTIONS,
)
from ..exceptions import InvalidActionError, NotEnabledError, UnknownVarError

MEMORY_ACCESS_KINDS = (EventKind.RMW, EventKind.PROP, EventKind.RFM)


def _well_formed(agent: Agent, action) -> bool:
    if isinstance(action, Invoke):
        return False
    if agent.is_dispatcher:
        return isinstance(action, (Prop, Null))
    return isinstance(action, PROCESS_ACTIONS)


def _written_value(action) -> Optional[Tuple]:
    if isinstance(action, Write):
        return (action.value,)
    if isinstance(action, Rmw):
        return (action.new,)
    return None


def enabled(state: TsoState, agent: Agent, action) -> bool:
    """True iff the premise of the action's transition rule holds in `state`."""
    if not _well_formed(agent, action):
        return False

    buf = state.buffer(agent.pid)
    if isinstance(action, Prop):
        return bool(buf)
    if isinstance(action, Fence):
        return not buf
    if isinstance(action, Rmw):
        cell = state.memory.get(action.var)
        return not buf and cell is not None and cell.value == action.expected
    return True


def apply(
    state: TsoState,
    agent: Agent,
    action,
    next_seq: int,
    values: Optional[Collection] = None,
) -> Tuple[TsoState, Event]:
    """
    Perform `action` by `agent` and return the new state with its event.

    Args:
        state: Current TSO state
        agent: Performing agent
        action: The action; must be enabled
        next_seq: Sequence number a fresh write tag of this process would get
        values: Declared value set; when given, written values must belong to it

    Raises:
        InvalidActionError: action cannot be issued by this kind of agent, or
            writes a value outside `values`
        UnknownVarError: action names an undeclared variable
        NotEnabledError: the rule's precondition fails
    """
    if not _well_formed(agent, action):
        raise InvalidActionError(f"{agent} cannot perform {action}", error_code="bad_agent")

    var = getattr(action, "var", None)
    if var is not None and var not in state.memory:
        raise UnknownVarError(f"undeclared variable {var!r} in {action}", error_code="unknown_var")

    written = _written_value(action)
    if values is not None and written is not None and written[0] not in values:
        raise InvalidActionError(f"{action} writes {written[0]!r}, not a declared value", error_code="unknown_value")

    if not enabled(state, agent, action):
        raise NotEnabledError(f"{action} is not enabled for {agent}", error_code="not_enabled")

    pid = agent.pid

    if isinstance(action, Write):
        tag = Tag(pid, next_seq)
        entry = BufferEntry(action.var, action.value, tag)
        new_state = state.with_buffer(pid, state.buffer(pid) + (entry,))
        return new_state, Event(agent, EventKind.W, action.var, action.value, tag=tag, action=action)

    if isinstance(action, Read):
        for entry in reversed(state.buffer(pid)):
            if entry.var == action.var:
                return state, Event(agent, EventKind.RFB, entry.var, entry.value, tag=entry.tag, action=action)
        cell = state.memory[action.var]
        return state, Event(agent, EventKind.RFM, action.var, cell.value, tag=cell.tag, action=action)

    if isinstance(action, Rmw):
        old = state.memory[action.var]
        tag = Tag(pid, next_seq)
        new_state = state.with_memory({action.var: MemoryCell(action.new, tag)})
        return new_state, Event(
            agent, EventKind.RMW, action.var, action.new,
            expected=action.expected, tag=tag, read_tag=old.tag, action=action,
        )

    if isinstance(action, Prop):
        head, rest = state.buffer(pid)[0], state.buffer(pid)[1:]
        new_state = TsoState(
            memory={**state.memory, head.var: MemoryCell(head.value, head.tag)},
            buffers={**state.buffers, pid: rest},
        )
        return new_state, Event(agent, EventKind.PROP, head.var, head.value, tag=head.tag, action=action)

    if isinstance(action, Fence):
        return state, Event(agent, EventKind.F, action=action)

    if isinstance(action, (Internal, Return)):
        return state, Event(agent, EventKind.INTERNAL, action=action)

    return state, Event(agent, EventKind.NULL, action=action)


def consumes_write_counter(event: Event) -> bool:
    """W and RMW events draw a fresh tag from their process's write counter."""
    return event.kind in (EventKind.W, EventKind.RMW)


def memory_access_var(event: Event) -> Optional[VarId]:
    """The variable an RMW, prop or RfM accesses in memory; None for everything else."""
    if event.kind in MEMORY_ACCESS_KINDS:
        return event.var
    return None


def conflicts(e1: Event, e2: Event) -> bool:
    """Two events conflict when they access the same variable in memory, unless both
    are RfM or one is a prop at d_i and the other an RfM at i."""
    x1, x2 = memory_access_var(e1), memory_access_var(e2)
    if x1 is None or x1 != x2:
        return False
    if e1.kind is EventKind.RFM and e2.kind is EventKind.RFM:
        return False
    for a, b in ((e1, e2), (e2, e1)):
        if (a.kind is EventKind.PROP and b.kind is EventKind.RFM
                and a.agent.is_dispatcher and b.agent.is_process and a.agent.pid == b.agent.pid):
            return False
    return True


def same_round_buffer_flow(e1: Event, e2: Event) -> bool:
    """
    True when one event is a W of process i and the other is d_i's prop of the
    same tag. A prop must be enabled at the start of its round, so it can only
    carry an entry buffered in an earlier round. A read from the buffer followed
    by the prop of the same entry in one round is allowed.
    """
    for a, b in ((e1, e2), (e2, e1)):
        if (a.kind is EventKind.W and b.kind is EventKind.PROP
                and a.agent.is_process and b.agent.is_dispatcher
                and a.agent.pid == b.agent.pid and a.tag == b.tag):
            return True
    return False


def clashes(e1: Event, e2: Event) -> bool:
    """Events that may not be part of one joint action."""
    return conflicts(e1, e2) or same_round_buffer_flow(e1, e2)
