"""
Line-delimited JSON traces.

A trace is a header line, one line per round, and a footer line holding the
final memory and buffers. Reading a trace replays every round from the
initial state and checks it against what the file recorded, so a trace that
loads is a valid run of the TSO machine.
"""

import json
import logging
import re
from pathlib import Path
from typing import Iterable, List, Optional, Union

from pydantic import ValidationError

from ..core.types import (
    Action,
    Agent,
    AgentKind,
    Event,
    Fence,
    Internal,
    Node,
    Null,
    OpCall,
    Read,
    Return,
    Rmw,
    Tag,
    Universe,
    Write,
)
from ..exceptions import NotFoundError, TraceFormatError, TsoCausalException
from ..runtime.run import JointAction, Run, advance
from ..schemas.trace import (
    TRACE_VERSION,
    ActionModel,
    BufferEntryModel,
    EventModel,
    MemoryCellModel,
    OpCallModel,
    RoundLine,
    TagModel,
    TraceFile,
    TraceFooter,
    TraceHeader,
)

logger = logging.getLogger(__name__)

_NODE_RE = re.compile(r"^([pd])(\d+)@(\d+)$")
_AGENT_RE = re.compile(r"^([pd])(\d+)$")


# ─────────────────────────
# Nodes and values
# ─────────────────────────

def format_node(node: Node) -> str:
    return str(node)


def parse_node(text: str) -> Node:
    """'p3@12' -> Node(p3, 12). Raises ValueError on anything else."""
    match = _NODE_RE.match(text.strip())
    if not match:
        raise ValueError(f"not a node: {text!r} (expected e.g. p3@12 or d3@12)")
    kind, pid, time = match.groups()
    return Node(Agent(AgentKind(kind), int(pid)), int(time))


def parse_nodes(text: str) -> List[Node]:
    """A comma-separated node list."""
    return [parse_node(part) for part in text.split(",") if part.strip()]


def parse_tag(text: str) -> Tag:
    """'2:1' -> the first write of p2."""
    writer, sep, seq = text.partition(":")
    if not sep:
        raise ValueError(f"not a tag: {text!r} (expected writer:seq)")
    return Tag(int(writer), int(seq))


def _parse_agent(text: str, line: int) -> Agent:
    match = _AGENT_RE.match(text)
    if not match:
        raise TraceFormatError(f"not an agent: {text!r}", line=line)
    return Agent(AgentKind(match.group(1)), int(match.group(2)))


def freeze(value):
    """JSON arrays back to the tuples the engine uses as values."""
    if isinstance(value, list):
        return tuple(freeze(v) for v in value)
    return value


def thaw(value):
    if isinstance(value, tuple):
        return [thaw(v) for v in value]
    return value


def _tag_model(tag: Optional[Tag]) -> Optional[TagModel]:
    return TagModel(writer=tag.writer, seq=tag.seq) if tag is not None else None


def _call_model(call: OpCall) -> OpCallModel:
    return OpCallModel(name=call.name, arg=thaw(call.arg))


def _call(model: OpCallModel) -> OpCall:
    return OpCall(model.name, freeze(model.arg))


# ─────────────────────────
# Run -> trace
# ─────────────────────────

def _action_model(action: Action) -> ActionModel:
    if isinstance(action, Read):
        return ActionModel(kind="R", var=action.var)
    if isinstance(action, Write):
        return ActionModel(kind="W", var=action.var, value=thaw(action.value))
    if isinstance(action, Fence):
        return ActionModel(kind="F")
    if isinstance(action, Rmw):
        return ActionModel(kind="RMW", var=action.var, expected=thaw(action.expected), value=thaw(action.new))
    if isinstance(action, Internal):
        return ActionModel(kind="internal", label=action.label)
    if isinstance(action, Return):
        return ActionModel(kind="return", op=_call_model(action.op), result=thaw(action.result))
    raise TraceFormatError(f"{action} cannot be written as a process action")


def _event_model(event: Event) -> EventModel:
    return EventModel(
        agent=str(event.agent),
        kind=event.kind.value,
        var=event.var,
        value=thaw(event.value),
        expected=thaw(event.expected),
        tag=_tag_model(event.tag),
        read_tag=_tag_model(event.read_tag),
    )


def _footer(r: Run) -> TraceFooter:
    tso = r.final.tso
    return TraceFooter(
        memory={
            x: MemoryCellModel(value=thaw(cell.value), tag=_tag_model(cell.tag))
            for x, cell in sorted(tso.memory.items())
        },
        buffers={
            f"p{pid}": [
                BufferEntryModel(var=e.var, value=thaw(e.value), tag=_tag_model(e.tag))
                for e in tso.buffer(pid)
            ]
            for pid in r.universe.pids
        },
    )


def run_to_trace(r: Run) -> TraceFile:
    u = r.universe
    header = TraceHeader(
        version=TRACE_VERSION,
        fixture=r.protocol_name,
        n=u.n,
        variables=list(u.variables),
        values=[thaw(v) for v in u.values],
        default=thaw(u.default),
        horizon=r.horizon,
        seed=r.seed,
    )
    rounds = []
    for t, record in enumerate(r.rounds):
        joint = record.joint
        rounds.append(RoundLine(
            round=t + 1,
            actions={
                f"p{pid}": _action_model(joint.processes[pid])
                for pid in sorted(joint.processes)
                if not isinstance(joint.processes[pid], Null)
            },
            props=sorted(joint.props),
            invokes={f"p{pid}": _call_model(joint.invokes[pid]) for pid in sorted(joint.invokes)},
            events=[_event_model(e) for e in record.events],
        ))
    return TraceFile(header=header, rounds=rounds, footer=_footer(r))


# ─────────────────────────
# Trace -> run
# ─────────────────────────

def _action(model: ActionModel, line: int) -> Action:
    kind = model.kind
    if kind in ("R", "W", "RMW") and model.var is None:
        raise TraceFormatError(f"{kind} action without a variable", line=line)
    if kind == "R":
        return Read(model.var)
    if kind == "W":
        return Write(model.var, freeze(model.value))
    if kind == "F":
        return Fence()
    if kind == "RMW":
        return Rmw(model.var, freeze(model.expected), freeze(model.value))
    if kind == "internal":
        return Internal(model.label or "")
    if model.op is None:
        raise TraceFormatError("return action without its operation", line=line)
    return Return(_call(model.op), freeze(model.result))


def _joint(line_model: RoundLine, line: int) -> JointAction:
    processes = {}
    for key, model in line_model.actions.items():
        agent = _parse_agent(key, line)
        if not agent.is_process:
            raise TraceFormatError(f"dispatcher {key} listed with a process action", line=line)
        processes[agent.pid] = _action(model, line)
    invokes = {}
    for key, model in line_model.invokes.items():
        agent = _parse_agent(key, line)
        if not agent.is_process:
            raise TraceFormatError(f"invoke addressed to dispatcher {key}", line=line)
        invokes[agent.pid] = _call(model)
    return JointAction(processes=processes, props=frozenset(line_model.props), invokes=invokes)


def _dump(model) -> dict:
    return model.model_dump(mode="json", exclude_none=True)


def trace_to_run(trace: TraceFile) -> Run:
    """
    Replay a trace from the initial state.

    Raises:
        TraceFormatError: a round cannot be applied, or the replay disagrees
            with the events or final state the trace recorded
    """
    header = trace.header
    if header.version != TRACE_VERSION:
        raise TraceFormatError(f"unsupported trace version {header.version}", line=1)
    try:
        universe = Universe(
            n=header.n,
            variables=tuple(header.variables),
            values=tuple(freeze(v) for v in header.values),
            default=freeze(header.default),
        )
    except ValueError as e:
        raise TraceFormatError(str(e), line=1)

    r = Run.empty(universe, header.fixture, header.seed)
    for t, line_model in enumerate(trace.rounds):
        line = t + 2
        if line_model.round != t + 1:
            raise TraceFormatError(f"expected round {t + 1}, found round {line_model.round}", line=line)
        try:
            r = advance(r, _joint(line_model, line))
        except TraceFormatError:
            raise
        except TsoCausalException as e:
            raise TraceFormatError(f"round {t + 1} cannot be replayed: {e.message}", line=line)
        replayed = [_dump(_event_model(e)) for e in r.rounds[-1].events]
        recorded = [_dump(e) for e in line_model.events]
        if replayed != recorded:
            raise TraceFormatError(f"round {t + 1} records events the replay does not produce", line=line)

    if header.horizon != r.horizon:
        raise TraceFormatError(
            f"header announces {header.horizon} rounds, the body has {r.horizon}", line=1,
        )
    if _dump(_footer(r)) != _dump(trace.footer):
        raise TraceFormatError("final memory or buffers differ from the replay", line=r.horizon + 2)
    return r


# ─────────────────────────
# Text
# ─────────────────────────

def emit_trace(trace: TraceFile) -> str:
    lines = [trace.header.model_dump_json(exclude_none=True)]
    lines.extend(line.model_dump_json(exclude_none=True) for line in trace.rounds)
    lines.append(trace.footer.model_dump_json(exclude_none=True))
    return "\n".join(lines) + "\n"


def _validated(model_cls, text: str, line: int):
    try:
        return model_cls.model_validate_json(text)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        raise TraceFormatError(f"{where or 'line'}: {first.get('msg')}", line=line)


def parse_trace(text: Union[str, Iterable[str]]) -> TraceFile:
    """
    Parse the text of a trace. Blank lines are skipped but still counted, so
    errors carry the line number an editor shows.

    Raises:
        TraceFormatError: with the 1-based line of the first problem
    """
    raw = text.splitlines() if isinstance(text, str) else list(text)
    numbered = [(k + 1, s) for k, s in enumerate(raw) if s.strip()]
    if not numbered:
        raise TraceFormatError("empty trace", line=1)
    if len(numbered) < 2:
        raise TraceFormatError("trace ends without a footer", line=numbered[-1][0])

    for number, s in numbered:
        try:
            kind = json.loads(s).get("type")
        except (json.JSONDecodeError, AttributeError):
            raise TraceFormatError("not a JSON object", line=number)
        expected = "header" if number == numbered[0][0] else "footer" if number == numbered[-1][0] else "round"
        if kind != expected:
            raise TraceFormatError(f"expected a {expected} line, found {kind!r}", line=number)

    header = _validated(TraceHeader, numbered[0][1], numbered[0][0])
    rounds = [_validated(RoundLine, s, number) for number, s in numbered[1:-1]]
    footer = _validated(TraceFooter, numbered[-1][1], numbered[-1][0])
    return TraceFile(header=header, rounds=rounds, footer=footer)


def read_trace(path: Union[str, Path]) -> TraceFile:
    path = Path(path)
    if not path.exists():
        raise NotFoundError(f"no trace at {path}", error_code="missing_trace")
    return parse_trace(path.read_text())


def write_trace(path: Union[str, Path], trace: TraceFile):
    Path(path).write_text(emit_trace(trace))
    logger.info(f"wrote {len(trace.rounds)} rounds to {path}")


def load_run(path: Union[str, Path]) -> Run:
    return trace_to_run(read_trace(path))
