"""
Chain-level queries: feedback loops, {i,j}-only chains, operation-level
occurs-before, and consistency checks of the relation on a run.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..core.machine import conflicts
from ..core.types import Agent, EventKind, Node, ProcId
from ..exceptions import NoIjOnlyChainError, PreconditionViolatedError
from ..runtime.history import Operation
from ..runtime.run import Run
from ..schemas.reports import Report
from .graph import ObGraph, WitnessChain

logger = logging.getLogger(__name__)

SYNC_KINDS = (EventKind.F, EventKind.RMW)
LANDING_KINDS = (EventKind.F, EventKind.RMW, EventKind.RFM)


def feedback_loop(r: Run, a: Node, b: Node, graph: Optional[ObGraph] = None) -> Optional[Node]:
    """
    A node of an agent other than i and d_i lying on some chain a ~> b, where
    both a and b belong to process i. None when no such node exists.

    Raises:
        PreconditionViolatedError: a and b are not nodes of one process
    """
    if a.agent != b.agent or not a.agent.is_process:
        raise PreconditionViolatedError(
            f"{a} and {b} are not nodes of one process", clause="same-process", error_code="bad_endpoints",
        )
    graph = graph or ObGraph.build(r)
    if a == b:
        return None
    own = {a.agent, a.agent.counterpart()}
    between = [
        node for node in graph.descendants(a)
        if node.agent not in own and graph.reaches(node, b)
    ]
    if not between:
        return None
    return min(between, key=lambda n: (n.time, n.agent.sort_key()))


def operation_feedback_loop(r: Run, op: Operation, graph: Optional[ObGraph] = None) -> Optional[Node]:
    """Operation variant: X contains a feedback loop iff there is one between X.s and X.e."""
    if op.end is None:
        return None
    return feedback_loop(r, op.start, op.end, graph)


def ob_operations(graph: ObGraph, x: Operation, y: Operation) -> bool:
    """X occurs before Y: X.s ~> Y.e."""
    if y.end is None:
        return False
    return graph.reaches(x.start, y.end)


@dataclass(frozen=True)
class IjOnlyClassification:
    """
    Which of the three {i,j}-only chain patterns a run exhibits, each with the
    witness times it was found at:

        1: (t, t')       RMW at <i,t>, then F/RMW/RfM at <j,t'>
        2: (t, t', t'')  W/RfB (or RfM) at <i,t>, prop at <d_i,t'>, then RfM/F/RMW at <j,t''>
        3: (t, t')       RfM at <i,t>, then F/RMW at <j,t'>
    """

    chain: WitnessChain
    cases: Dict[int, Tuple[int, ...]] = field(default_factory=dict)

    @property
    def case_numbers(self) -> List[int]:
        return sorted(self.cases)


def ij_only_classify(
    r: Run, a: Node, b: Node, i: ProcId, j: ProcId, graph: Optional[ObGraph] = None,
) -> IjOnlyClassification:
    """
    Classify an {i,j}-only chain from a = <i, t1> to b = <j, t2>.

    Raises:
        NoIjOnlyChainError: no chain a ~> b stays within i, d_i, j and d_j
    """
    graph = graph or ObGraph.build(r)
    p_i, d_i, p_j = Agent.process(i), Agent.dispatcher(i), Agent.process(j)
    allowed = {p_i, d_i, p_j, Agent.dispatcher(j)}
    chain = graph.witness(a, b, allowed=allowed) if i != j else None
    if chain is None:
        raise NoIjOnlyChainError(f"no {{p{i},p{j}}}-only chain from {a} to {b}")

    t1, t2 = a.time, b.time

    def kinds_of(agent: Agent, lo: int, hi: int, kinds) -> List[int]:
        return [
            t for t in range(max(lo, 0), min(hi, r.horizon - 1) + 1)
            if (e := r.rounds[t].event_of(agent)) is not None and e.kind in kinds
        ]

    cases: Dict[int, Tuple[int, ...]] = {}
    for t in kinds_of(p_i, t1, t2 - 1, (EventKind.RMW,)):
        later = kinds_of(p_j, t + 1, t2, LANDING_KINDS)
        if later:
            cases[1] = (t, later[0])
            break

    for t in kinds_of(p_i, t1, t2 - 1, (EventKind.W, EventKind.RFB, EventKind.RFM)):
        found = None
        for t_prop in kinds_of(d_i, t + 1, t2 - 1, (EventKind.PROP,)):
            later = kinds_of(p_j, t_prop + 1, t2, LANDING_KINDS)
            if later:
                found = (t, t_prop, later[0])
                break
        if found:
            cases[2] = found
            break

    for t in kinds_of(p_i, t1, t2 - 1, (EventKind.RFM,)):
        later = kinds_of(p_j, t + 1, t2, SYNC_KINDS)
        if later:
            cases[3] = (t, later[0])
            break

    logger.debug(f"{{p{i},p{j}}}-only chain {chain}: cases {sorted(cases)}")
    return IjOnlyClassification(chain, cases)


def check_observations(r: Run, graph: Optional[ObGraph] = None) -> Report:
    """
    Structural facts every occurs-before graph satisfies: base edges go forward
    in time, every edge from d_i into i lands on a fence or RMW, and events
    that conflict are ordered.
    """
    graph = graph or ObGraph.build(r)
    report = Report()

    for edge in graph.edges():
        if edge.source.time >= edge.target.time:
            report.add("temporal", f"edge {edge} does not go forward in time")
        if (edge.source.agent.is_dispatcher and edge.target.agent.is_process
                and edge.source.agent.pid == edge.target.agent.pid):
            event = r.event_at(edge.target)
            if event is None or event.kind not in SYNC_KINDS:
                report.add("dispatcher-into-process", f"edge {edge} lands on {event}")

    accesses = [(n, e) for n, e in r.action_nodes()]
    for n1, e1 in accesses:
        for n2, e2 in accesses:
            if n1.time < n2.time and conflicts(e1, e2) and not graph.reaches(n1, n2):
                report.add("conflict-unordered", f"{e1} at {n1} and {e2} at {n2} conflict but are unordered")

    return report
