"""
Independent checks of delayed runs.

Nothing here trusts the transform's bookkeeping: thresholds are recomputed
from the occurs-before graph of the original run and both runs are compared
event by event.
"""

import logging
from collections import defaultdict
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from ..causality.graph import ObGraph
from ..causality.past import Thresholds, thresholds
from ..core.machine import clashes, conflicts
from ..core.types import Agent, Event, EventKind, Node
from ..runtime.protocol import LocalState, Protocol
from ..runtime.run import Run
from ..runtime.validation import validate_run
from ..schemas.reports import ClaimsReport, DtfReport, EquivalenceReport
from ..utils.logging_utils import log_analysis_action
from .shift import shift, shifted_node

logger = logging.getLogger(__name__)


def _appearing_states(r: Run, pid: int) -> FrozenSet[LocalState]:
    return frozenset(g.locals[pid] for g in r.states)


def local_equivalence(r1: Run, r2: Run) -> EquivalenceReport:
    """
    r1 ≈ r2: every process goes through the same local states in both runs.
    Reads from buffer and from memory are both recorded as R(x, v), so they
    compare equal.
    """
    report = EquivalenceReport()
    if r1.universe.n != r2.universe.n:
        report.add("universe", f"{r1.universe.n} processes against {r2.universe.n}")
        return report

    for pid in r1.universe.pids:
        if _appearing_states(r1, pid) == _appearing_states(r2, pid):
            continue
        final1, final2 = r1.final.locals[pid], r2.final.locals[pid]
        position = next(
            (k for k, (a, b) in enumerate(zip(final1, final2)) if a != b),
            min(len(final1), len(final2)),
        )
        left = str(final1[position]) if position < len(final1) else "<end>"
        right = str(final2[position]) if position < len(final2) else "<end>"
        detail = f"record {position}: {left} vs {right}"
        report.first_difference[pid] = detail
        report.add("equivalence", f"p{pid} diverges at {detail}", agent=f"p{pid}")
    return report


def _action_key(event: Event) -> Tuple:
    kind = "R" if event.is_read else event.kind.value
    action = event.action if event.kind is EventKind.INTERNAL else None
    return (kind, event.var, event.value, event.expected, action)


def _events_by_agent(r: Run) -> Dict[Agent, List[Tuple[int, Event]]]:
    per_agent: Dict[Agent, List[Tuple[int, Event]]] = defaultdict(list)
    for node, event in r.action_nodes():
        per_agent[node.agent].append((node.time, event))
    return per_agent


def verify_dtf(
    r: Run,
    r_prime: Run,
    S: Iterable[Node],
    delta: int,
    protocol: Optional[Protocol] = None,
    graph: Optional[ObGraph] = None,
) -> DtfReport:
    """
    Check that r_prime is r with the future of S delayed by delta: same actions
    in the same order per agent, actions outside Past⁺(S) exactly delta rounds
    later, same local states at corresponding times, same tags, no clashing
    events within a round, and r ≈ r_prime. With a protocol, r_prime is also
    validated as a run of it.
    """
    S = frozenset(S)
    th = thresholds(r, S, graph or ObGraph.build(r))
    report = DtfReport(delta=delta, thresholds=th.as_labels())

    if r_prime.horizon != r.horizon + delta:
        report.add("horizon", f"delayed run has horizon {r_prime.horizon}, expected {r.horizon + delta}")

    _compare_events(r, r_prime, th, delta, report)
    _compare_local_states(r, r_prime, th, delta, report)

    for t, record in enumerate(r_prime.rounds):
        for a_idx, e1 in enumerate(record.events):
            for e2 in record.events[a_idx + 1:]:
                if clashes(e1, e2):
                    report.add("conflict", f"{e1} and {e2} share round {t + 1}", round=t + 1)

    equivalence = local_equivalence(r, r_prime)
    report.equivalent = equivalence.equivalent
    report.violations.extend(equivalence.violations)

    if protocol is not None:
        report.violations.extend(validate_run(r_prime, protocol).violations)

    log_analysis_action(logger, r.label(), "verify_dtf", {"delta": delta, "violations": len(report.violations)})
    return report


def _compare_events(r: Run, rp: Run, th: Thresholds, delta: int, report: DtfReport):
    original, delayed = _events_by_agent(r), _events_by_agent(rp)
    for agent in r.universe.agents:
        before, after = original.get(agent, []), delayed.get(agent, [])
        if len(before) != len(after):
            report.add("actions", f"{agent} performs {len(before)} actions in r and {len(after)} in r'",
                       agent=str(agent))
        for (t, e), (t2, e2) in zip(before, after):
            if _action_key(e) != _action_key(e2):
                report.add("actions", f"{agent}: {e} at {t} corresponds to {e2} at {t2}", agent=str(agent))
                continue
            if e.tag != e2.tag or e.read_tag != e2.read_tag:
                report.add("tags", f"{agent}: {e} at {t} carries {e2.tag} in r'", round=t2 + 1, agent=str(agent))
            expected = t if t < th[agent] else t + delta
            if t2 != expected:
                report.add("timing", f"{agent}: {e} moved from {t} to {t2}, expected {expected}",
                           round=t2 + 1, agent=str(agent))


def _compare_local_states(r: Run, rp: Run, th: Thresholds, delta: int, report: DtfReport):
    for pid in r.universe.pids:
        agent = Agent.process(pid)
        for t in range(r.horizon + 1):
            t2 = t if t < th[agent] else t + delta
            if t2 > rp.horizon:
                report.add("local-state", f"p{pid}: time {t2} is beyond the delayed run", agent=str(agent))
                break
            if rp.local(pid, t2) != r.local(pid, t):
                report.add("local-state", f"p{pid}: state at {t} in r differs from state at {t2} in r'",
                           round=t2, agent=str(agent))


def _reclassified_reads(r: Run, r_prime: Run, images: Dict[Node, Node]) -> List[Node]:
    """Reads of r whose counterpart in r_prime reads from the other place."""
    found = []
    for node, event in r.action_nodes():
        image = images[node]
        if not event.is_read or image.time >= r_prime.horizon:
            continue
        counterpart = r_prime.rounds[image.time].event_of(node.agent)
        if counterpart is not None and counterpart.is_read and counterpart.kind is not event.kind:
            found.append(node)
    return found


def check_shift_claims(
    r: Run,
    r_prime: Run,
    S: Iterable[Node],
    delta: int,
    graph: Optional[ObGraph] = None,
) -> ClaimsReport:
    """
    The ordering facts that make the delaying construction work, checked on a
    concrete pair of runs: base edges keep their order after shifting, shifted
    rounds stay valid, occurs-before is preserved both ways (away from reads that
    switch between buffer and memory), every prop happens
    at its shifted round, and every fence or RMW still finds an empty buffer
    (and the expected memory value) at its shifted round.
    """
    S = frozenset(S)
    graph = graph or ObGraph.build(r)
    th = thresholds(r, S, graph)
    report = ClaimsReport()

    def shifted_round(agent: Agent, m: int) -> int:
        return shift(m, th[agent], delta)

    for edge in graph.edges():
        report.checked_edges += 1
        a, b = edge.source, edge.target
        if not shifted_round(a.agent, a.time + 1) < shifted_round(b.agent, b.time + 1):
            report.add("order", f"edge {edge} is reordered by the shift")

    for node in r.nodes():
        if shifted_round(node.agent, node.time + 1) - 1 < 0:
            report.add("non-negative", f"{node} shifts before time 0")

    action_nodes = [n for n, _ in r.action_nodes()]
    images = {n: shifted_node(n, th, delta) for n in action_nodes}
    missing = [n for n in action_nodes if images[n].time >= r_prime.horizon]
    for node in missing:
        report.add("ob-preservation", f"{node} has no counterpart in r'")

    reclassified = _reclassified_reads(r, r_prime, images)
    report.reclassified_reads = len(reclassified)
    # a read that switches between buffer and memory gains or loses its
    # buffer-flow and same-var edges; compare the runs without them
    ob = graph.detached(reclassified)
    ob_prime = ObGraph.build(r_prime).detached(images[n] for n in reclassified)
    present = [n for n in action_nodes if n not in missing]
    for n1 in present:
        for n2 in present:
            if n1 == n2:
                continue
            report.checked_pairs += 1
            s1, s2 = images[n1], images[n2]
            if ob.reaches(n1, n2) != ob_prime.reaches(s1, s2):
                report.add("ob-preservation", f"{n1} ~> {n2} is not preserved as {s1} ~> {s2}")

    props_r = 0
    for node, event in r.action_nodes():
        m = node.time + 1
        m2 = shifted_round(node.agent, m)
        if m2 > r_prime.horizon:
            report.add("propagation", f"{node} shifts beyond the delayed run")
            continue
        counterpart = r_prime.rounds[m2 - 1].event_of(node.agent)

        if event.kind is EventKind.PROP:
            props_r += 1
            if counterpart is None or counterpart.kind is not EventKind.PROP or counterpart.tag != event.tag:
                report.add("propagation", f"{event.tag} propagated in round {m} is not propagated in round {m2}",
                           round=m2, agent=str(node.agent))

        if event.is_read and (counterpart is None or counterpart.tag != event.tag):
            report.add("read-tag", f"read at {node} returns {event.tag} but not in round {m2}",
                       round=m2, agent=str(node.agent))

        if event.kind in (EventKind.F, EventKind.RMW):
            before = r_prime.states[m2 - 1].tso
            if before.buffer(node.agent.pid):
                report.add("sync-enabled", f"{event} at {node} faces a nonempty buffer in round {m2}",
                           round=m2, agent=str(node.agent))
            if event.kind is EventKind.RMW and before.value_of(event.var) != event.expected:
                report.add("rmw-value", f"{event} at {node} finds {before.value_of(event.var)} in round {m2}",
                           round=m2, agent=str(node.agent))

    props_prime = sum(1 for _, e in r_prime.action_nodes() if e.kind is EventKind.PROP)
    if props_prime != props_r:
        report.add("propagation", f"{props_r} props in r against {props_prime} in r'")

    return report
