"""
Independent replay of a recorded run against its protocol.
"""

import logging
from typing import Dict, List

from ..core.machine import apply, clashes, conflicts, consumes_write_counter, enabled
from ..core.types import Agent, EventKind, Null, Prop, Return
from ..exceptions import TsoCausalException
from ..schemas.reports import ValidationReport
from ..utils.logging_utils import log_analysis_action
from .protocol import LocalRecord, Protocol
from .run import GlobalState, Run

logger = logging.getLogger(__name__)


def validate_run(r: Run, p: Protocol) -> ValidationReport:
    """
    Check that r is a run of p: it starts in the initial state, each process
    action is one of its protocol's candidates, every action is enabled at its
    turn, no round holds clashing events, and each recorded state and event is
    the one the machine produces.
    """
    report = ValidationReport(horizon=r.horizon, protocol=p.name)

    if len(r.states) != len(r.rounds) + 1:
        report.add("shape", f"{len(r.states)} states for {len(r.rounds)} rounds")
        return report
    if r.states[0] != GlobalState.initial(r.universe):
        report.add("initial-state", "run does not start in the initial state", round=0)

    for t, record in enumerate(r.rounds):
        _replay_round(r, p, t, report)

    _check_fifo(r, report)
    log_analysis_action(logger, r.label(), "validate_run", {"violations": len(report.violations)})
    return report


def _replay_round(r: Run, p: Protocol, t: int, report: ValidationReport):
    g = r.states[t]
    record = r.rounds[t]
    rnd = t + 1
    tso = g.tso
    locals_ = dict(g.locals)
    pending = dict(g.pending_ops)
    counters = dict(g.write_counters)
    produced = []

    steps = [(Agent.process(pid), a) for pid, a in sorted(record.joint.processes.items())
             if not isinstance(a, Null)]
    steps += [(Agent.dispatcher(pid), Prop()) for pid in sorted(record.joint.props)]

    for agent, action in steps:
        if agent.is_process and action not in p.candidates(agent.pid, g.locals[agent.pid]):
            report.add("protocol", f"{action} is not a candidate of {agent}", rnd, str(agent))
        if not enabled(tso, agent, action):
            report.add("enabledness", f"{action} is not enabled for {agent}", rnd, str(agent))
            continue
        try:
            tso, event = apply(tso, agent, action, counters[agent.pid] + 1, p.universe.values)
        except TsoCausalException as e:
            report.add("enabledness", e.message, rnd, str(agent))
            continue
        for other in produced:
            if clashes(other, event):
                kind = "conflict" if conflicts(other, event) else "buffer-flow"
                report.add(kind, f"{other} and {event} share the round", rnd, str(agent))
        if consumes_write_counter(event):
            counters[agent.pid] += 1
        produced.append(event)
        if agent.is_process:
            local_record = LocalRecord.from_event(event)
            if local_record is not None:
                locals_[agent.pid] = locals_[agent.pid] + (local_record,)
            if isinstance(action, Return):
                pending[agent.pid] = None

    for pid, op in sorted(record.joint.invokes.items()):
        if pending.get(pid) is not None:
            report.add("double-invoke", f"{op} reaches p{pid} while {pending[pid]} is pending", rnd, f"p{pid}")
        pending[pid] = op
        locals_[pid] = locals_[pid] + (LocalRecord.invoke(op),)

    if tuple(produced) != record.events:
        report.add("event-mismatch", "recorded events differ from the replayed ones", rnd)

    following = r.states[t + 1]
    if following.tso != tso or following.write_counters != counters:
        report.add("state-mismatch", "recorded TSO state differs from the replayed one", rnd)
    for pid, local in locals_.items():
        if following.locals.get(pid) != local:
            report.add("local-state", f"local state of p{pid} differs from the replayed one", rnd, f"p{pid}")
    if dict(following.pending_ops) != pending:
        report.add("state-mismatch", "pending operations differ from the replayed ones", rnd)


def _check_fifo(r: Run, report: ValidationReport):
    """Each dispatcher propagates its process's writes in the order they were issued."""
    written: Dict[int, List] = {i: [] for i in r.universe.pids}
    propagated: Dict[int, List] = {i: [] for i in r.universe.pids}
    for _, event in r.action_nodes():
        if event.kind is EventKind.W:
            written[event.agent.pid].append(event.tag)
        elif event.kind is EventKind.PROP:
            propagated[event.agent.pid].append(event.tag)
    for pid in r.universe.pids:
        if propagated[pid] != written[pid][:len(propagated[pid])]:
            report.add("fifo", f"d{pid} propagates out of write order", agent=f"d{pid}")
