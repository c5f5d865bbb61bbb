"""
Constructions built from the delaying transform: isolating an operation so it
runs solo, and keeping one of its writes in the buffer until it returns.
"""

import logging
from typing import Optional

from ..causality.chains import operation_feedback_loop
from ..causality.graph import ObGraph
from ..causality.past import past_plus
from ..core.types import Agent, EventKind, Node, Tag
from ..exceptions import (
    FeedbackLoopPresentError,
    InternalReplayDivergenceError,
    PreconditionViolatedError,
)
from ..runtime.history import Operation, locate_operation, operation_events, runs_solo
from ..runtime.run import Run, pad
from ..utils.logging_utils import log_analysis_action
from .transform import dtf_transform

logger = logging.getLogger(__name__)


def _padded_past(r: Run, time: int) -> Run:
    """r extended with null rounds so that its horizon exceeds `time`."""
    return pad(r, max(0, time + 1 - r.horizon))


def solo_transform(r: Run, op: Operation, graph: Optional[ObGraph] = None) -> Run:
    """
    Return a run locally equivalent to r in which op runs solo.

    Two delays are applied. The first keeps in place the past of X.e and of
    every agent's node just before X starts, and delays the rest by the length
    of X plus one; the second, on the result, releases the nodes of i and d_i
    from time X.s - 1 on, so X itself slides past everyone else's delayed work.

    Raises:
        PreconditionViolatedError: op is still pending
        FeedbackLoopPresentError: some other agent lies on a chain from X.s to X.e
    """
    if not op.complete:
        raise PreconditionViolatedError(f"{op.op_id} has not completed", clause="complete")
    if operation_feedback_loop(r, op, graph) is not None:
        raise FeedbackLoopPresentError(f"{op.op_id} contains a feedback loop")

    t1, t2 = op.start.time, op.end.time
    delta = t2 - t1 + 1
    padded = _padded_past(r, t2)
    padded_graph = ObGraph.build(padded)

    first = past_plus(padded, {op.end}, padded_graph)
    if t1 >= 1:
        first |= past_plus(padded, {Node(b, t1 - 1) for b in r.universe.agents}, padded_graph)
    stage_one = dtf_transform(padded, first, delta, padded_graph)

    own = set(op.agents)
    second = {n for n in first if not (n.agent in own and n.time >= t1 - 1)}
    stage_two = dtf_transform(stage_one, second, delta)

    moved = locate_operation(stage_two, op)
    if not runs_solo(stage_two, moved):
        raise InternalReplayDivergenceError(
            f"{op.op_id} still overlaps other agents after isolation", error_code="not_solo",
        )
    log_analysis_action(logger, r.label(), "solo_transform", {
        "op": op.op_id, "window": (moved.start.time, moved.end.time), "delta": delta,
    })
    return stage_two


def unpropagated_transform(r: Run, op: Operation, kappa: Tag) -> Run:
    """
    Return a run locally equivalent to r in which the write tagged kappa,
    issued during op, reaches memory no earlier than op's end.

    Raises:
        PreconditionViolatedError: clause "writes" when op does not write kappa,
            "fence" or "rmw" when op synchronizes, "feedback" when it contains a
            feedback loop, "complete" when it is pending
    """
    if not op.complete:
        raise PreconditionViolatedError(f"{op.op_id} has not completed", clause="complete")
    events = list(operation_events(r, op))
    if not any(e.kind is EventKind.W and e.tag == kappa for _, e in events):
        raise PreconditionViolatedError(f"{op.op_id} does not write {kappa}", clause="writes")
    if any(e.kind is EventKind.F for _, e in events):
        raise PreconditionViolatedError(f"{op.op_id} performs a fence", clause="fence")
    if any(e.kind is EventKind.RMW for _, e in events):
        raise PreconditionViolatedError(f"{op.op_id} performs an RMW", clause="rmw")
    if operation_feedback_loop(r, op) is not None:
        raise PreconditionViolatedError(f"{op.op_id} contains a feedback loop", clause="feedback")

    solo = solo_transform(r, op)
    moved = locate_operation(solo, op)
    t_s, t_e = moved.start.time, moved.end.time
    padded = _padded_past(solo, t_e)
    anchors = {moved.end} | {Node(b, t_s) for b in r.universe.agents}
    result = dtf_transform(padded, anchors, t_e - t_s)

    final = locate_operation(result, op)
    dispatcher = Agent.dispatcher(op.process)
    for node, event in result.action_nodes():
        if node.agent == dispatcher and event.kind is EventKind.PROP and event.tag == kappa \
                and node.time < final.end.time:
            raise InternalReplayDivergenceError(
                f"{kappa} still reaches memory at {node}, before {op.op_id} returns",
                error_code="propagated_early",
            )
    log_analysis_action(logger, r.label(), "unpropagated_transform", {"op": op.op_id, "tag": str(kappa)})
    return result
