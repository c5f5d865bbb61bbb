"""
Delaying the future.

Given a run r, a node set S and a delay Δ, build the run r' in which every
action outside Past⁺(S) happens exactly Δ rounds later while every process
passes through the same local states. The new run is obtained by re-executing
r round by round under a derived schedule:

- agent b acts as in r up to its threshold m̂_b, then idles for Δ rounds,
  then replays its remaining r-actions;
- a dispatcher propagates when its counterpart round of r propagated;
- a process replays its r-action when its local state matches the one it had
  before that action in r;
- environment invokes follow their process's node.

Every round is applied strictly; a failure means the construction diverged
from r, which the ordering claims rule out for valid inputs.
"""

import logging
from typing import Iterable, Optional

from ..causality.graph import ObGraph
from ..causality.past import Thresholds, thresholds
from ..core.types import Agent, Node
from ..exceptions import (
    HorizonExhaustedError,
    InternalReplayDivergenceError,
    NotFoundError,
    TsoCausalException,
)
from ..runtime.run import JointAction, RoundRecord, Run, joint_apply
from ..utils.logging_utils import log_analysis_action
from .shift import source_round

logger = logging.getLogger(__name__)


def _check_nodes(r: Run, nodes: Iterable[Node]):
    for node in nodes:
        if node.time < 0 or node.time > r.horizon or node.agent.pid not in r.universe.pids:
            raise NotFoundError(f"node {node} lies outside {r.label()}", error_code="unknown_node")


def dtf_transform(
    r: Run,
    S: Iterable[Node],
    delta: int,
    graph: Optional[ObGraph] = None,
    allow_exhausted: bool = False,
) -> Run:
    """
    Delay every action outside Past⁺(S) by `delta` rounds.

    Args:
        r: A valid run
        S: Nodes whose past is kept in place
        delta: Number of rounds to delay by
        graph: Occurs-before graph of r, when the caller already built one
        allow_exhausted: Accept agents whose nodes all lie in Past⁺(S); they
            replay all of r and then stay idle

    Raises:
        HorizonExhaustedError: some agent has every node in Past⁺(S); pad or
            quiesce r and retry
        InternalReplayDivergenceError: the re-execution departed from r
    """
    if delta < 0:
        raise ValueError("delta must be non-negative")
    S = frozenset(S)
    _check_nodes(r, S)
    graph = graph or ObGraph.build(r)
    th = thresholds(r, S, graph)

    if th.exhausted and not allow_exhausted:
        names = ", ".join(str(b) for b in sorted(th.exhausted))
        raise HorizonExhaustedError(
            f"{names} lie entirely in the past of S within horizon {r.horizon}",
            agents=tuple(sorted(th.exhausted)),
        )

    states = [r.states[0]]
    rounds = []
    for k in range(1, r.horizon + delta + 1):
        joint = _joint_for_round(r, states[-1], k, th, delta)
        try:
            g, events = joint_apply(states[-1], joint, r.universe)
        except TsoCausalException as e:
            raise InternalReplayDivergenceError(
                f"round {k} of the delayed run cannot be applied: {e.message}",
                error_code="replay_divergence",
                details={"round": k},
            ) from e
        states.append(g)
        rounds.append(RoundRecord(joint, events))

    result = Run(r.universe, r.protocol_name, tuple(states), tuple(rounds), r.seed)
    log_analysis_action(logger, r.label(), "dtf_transform", {
        "delta": delta, "S": sorted(str(n) for n in S), "thresholds": th.as_labels(),
    })
    return result


def _joint_for_round(r: Run, g, k: int, th: Thresholds, delta: int) -> JointAction:
    moves = {}
    props = set()
    invokes = {}

    for pid in r.universe.pids:
        m = source_round(k, th[Agent.process(pid)], delta)
        if m is None or m > r.horizon:
            continue
        original = r.rounds[m - 1].joint
        if pid in original.invokes:
            invokes[pid] = original.invokes[pid]
        action = original.processes.get(pid)
        if action is None:
            continue
        if g.locals[pid] != r.states[m - 1].locals[pid]:
            raise InternalReplayDivergenceError(
                f"p{pid} reaches round {k} in a local state it did not have before round {m} of r",
                error_code="replay_divergence",
                details={"round": k, "process": pid},
            )
        moves[pid] = action

    for pid in r.universe.pids:
        m = source_round(k, th[Agent.dispatcher(pid)], delta)
        if m is None or m > r.horizon:
            continue
        if pid in r.rounds[m - 1].joint.props:
            if not g.tso.buffer(pid):
                raise InternalReplayDivergenceError(
                    f"d{pid} should replay the prop of round {m} in round {k} but its buffer is empty",
                    error_code="replay_divergence",
                    details={"round": k, "dispatcher": pid},
                )
            props.add(pid)

    return JointAction(moves, frozenset(props), invokes)
