"""
Executable checks of what linearizable registers and snapshots demand of
occurs-before and of synchronization under TSO.

The `check_*` functions scan a run for operation pairs the statements cover
and report every pair lacking the required chain. The `sync_necessity_*`
functions build the scenario from the corresponding proof: keep X in place,
push everything after X out of the way, then start a follow-up operation at
another process and let it run alone until it returns.
"""

import logging
import random
from typing import Callable, Optional

from ..causality.chains import ij_only_classify
from ..causality.graph import ObGraph
from ..config import get_completion_bound, get_default_seed
from ..core.types import Node, OpCall, Tag
from ..dtf.transform import dtf_transform
from ..exceptions import FixtureDivergedError, NoIjOnlyChainError, PreconditionViolatedError
from ..fixtures import Fixture, protocol_for_run
from ..runtime.executor import step
from ..runtime.history import (
    History,
    Operation,
    contains_sync,
    extract_history,
    locate_operation,
    operation_events,
    precedes,
    runs_in_isolation,
    runs_solo,
)
from ..runtime.protocol import Protocol, RoundPlan
from ..runtime.run import JointAction, Run, advance, pad, truncate
from ..schemas.reports import ScenarioReport, TheoremReport
from ..utils.logging_utils import log_analysis_action
from .specs import value_of

logger = logging.getLogger(__name__)


def require_unique_values(h: History):
    """Each register value is written at most once per run."""
    written = [op.arg for op in h.operations if op.name == "Write"]
    if len(written) != len(set(written)):
        raise PreconditionViolatedError("a value is written more than once", clause="unique-values")


def check_register_ob_necessity(r: Run, graph: Optional[ObGraph] = None) -> TheoremReport:
    """
    For every X^a <_r Y^b with a != b and Y complete and isolated, X must
    occur before Y (X.s ~> Y.e).
    """
    h = extract_history(r)
    require_unique_values(h)
    graph = graph or ObGraph.build(r)
    report = TheoremReport(theorem="register-ob")

    for y in h.complete:
        if not runs_in_isolation(h, y):
            continue
        for x in h.complete:
            if x.op_id == y.op_id or not precedes(x, y) or value_of(x) == value_of(y):
                continue
            report.checked += 1
            if not graph.reaches(x.start, y.end):
                report.add("ob-chain", f"{x} precedes {y} without an occurs-before chain",
                           agent=f"p{y.process}")

    log_analysis_action(logger, r.label(), "check_register_ob_necessity", {
        "checked": report.checked, "violations": len(report.violations),
    })
    return report


def _update_tag(h: History, pid: int, value) -> Optional[Tag]:
    for op in h.of_process(pid):
        if op.name == "Update" and op.arg == value:
            return op.op_tag
    return None


def check_snapshot_ob(r: Run, graph: Optional[ObGraph] = None) -> TheoremReport:
    """
    Updates preceding a scan occur before it and are reflected in its vector;
    scans preceding an update occur before it and do not reflect it.
    """
    h = extract_history(r)
    graph = graph or ObGraph.build(r)
    report = TheoremReport(theorem="snapshot-ob")
    scans = [op for op in h.complete if op.name == "Scan"]
    updates = [op for op in h.complete if op.name == "Update"]

    for scan in scans:
        for update in updates:
            i = update.process
            if precedes(update, scan):
                report.checked += 1
                if not graph.reaches(update.start, scan.end):
                    report.add("ob-chain", f"{update} precedes {scan} without an occurs-before chain")
                seen = scan.result[i - 1]
                seen_tag = _update_tag(h, i, seen) if seen is not None else None
                if seen is not None and seen_tag is None:
                    report.add("unknown-value", f"{scan} returns {seen} for p{i}, which p{i} never wrote")
                elif seen_tag is None or seen_tag < update.op_tag:
                    report.add("spec-fact", f"{scan} misses {update}: component {i} is {seen}")

            if precedes(scan, update):
                report.checked += 1
                if not graph.reaches(scan.start, update.end):
                    report.add("ob-chain", f"{scan} precedes {update} without an occurs-before chain")
                seen = scan.result[i - 1]
                seen_tag = _update_tag(h, i, seen) if seen is not None else None
                if seen_tag is not None and not seen_tag < update.op_tag:
                    report.add("spec-fact", f"{scan} already reflects the later {update}")

    log_analysis_action(logger, r.label(), "check_snapshot_ob", {
        "checked": report.checked, "violations": len(report.violations),
    })
    return report


def _fresh_value(r: Run, exclude=()) -> object:
    used = {op.arg for op in extract_history(r).operations if op.arg is not None}
    used |= set(exclude)
    for value in r.universe.values:
        if value != r.universe.default and value not in used:
            return value
    raise PreconditionViolatedError("no unused value left for the follow-up operation", clause="values")


def _scenario(
    scenario: str,
    r: Run,
    op: Operation,
    follow_up: Callable[[Run, int], OpCall],
    protocol: Optional[Protocol],
    completion_bound: Optional[int],
) -> ScenarioReport:
    if not op.complete:
        raise PreconditionViolatedError(f"{op.op_id} has not completed", clause="complete")
    if contains_sync(r, op):
        raise PreconditionViolatedError(f"{op.op_id} performs a fence or RMW", clause="sync")
    if not runs_solo(r, op):
        raise PreconditionViolatedError(f"{op.op_id} does not run solo", clause="solo")
    h = extract_history(r)
    if not runs_in_isolation(h, op):
        raise PreconditionViolatedError(f"{op.op_id} does not run in isolation", clause="isolation")

    protocol = protocol or protocol_for_run(r)
    bound = completion_bound or get_completion_bound()
    i, t_s, t_e = op.process, op.start.time, op.end.time

    padded = pad(r, max(0, t_e + 1 - r.horizon))
    anchors = {op.end} | {Node(b, t_s) for b in r.universe.agents}
    delta = t_e - t_s + 2
    prefix = truncate(dtf_transform(padded, anchors, delta), t_e)

    idle = [j for j in r.universe.pids if j != i and prefix.final.pending_ops[j] is None]
    if not idle:
        raise PreconditionViolatedError("every other process has an operation pending", clause="idle-process")
    j = idle[0]
    call = follow_up(prefix, j)

    extended = advance(advance(prefix, JointAction()), JointAction(invokes={j: call}))
    solo_plan = RoundPlan(moves={j: 0}, props=frozenset({j}))
    for _ in range(bound):
        if extended.final.pending_ops[j] is None:
            break
        extended = step(extended, solo_plan, protocol)
    if extended.final.pending_ops[j] is not None:
        raise FixtureDivergedError(
            f"p{j} did not complete {call} within {bound} solo rounds", error_code="not_obstruction_free",
        )

    x = locate_operation(extended, op)
    y = extract_history(extended).of_process(j)[-1]
    sync_events = [
        f"{node}:{event.kind.value}" for node, event in operation_events(extended, y)
        if event.kind.value in ("F", "RMW")
    ]
    graph = ObGraph.build(extended)
    try:
        cases = ij_only_classify(extended, x.start, y.end, i, j, graph).case_numbers
    except NoIjOnlyChainError:
        cases = []

    report = ScenarioReport(
        scenario=scenario,
        operation=str(op),
        process=i,
        follow_up=str(y),
        follow_up_process=j,
        follow_up_sync=bool(sync_events),
        sync_events=sync_events,
        indistinguishable=all(extended.local(i, t) == r.local(i, t) for t in range(t_e + 1)),
        ob_chain=graph.reaches(x.start, y.end),
        lemma_cases=cases,
        delta=delta,
        horizon=extended.horizon,
    )
    log_analysis_action(logger, r.label(), scenario, report.model_dump())
    return report


def sync_necessity_register(
    r: Run,
    op: Operation,
    protocol: Optional[Protocol] = None,
    completion_bound: Optional[int] = None,
) -> ScenarioReport:
    """Follow a solo, isolated, fence-free register operation by a Write of a fresh value elsewhere."""
    def follow_up(prefix: Run, j: int) -> OpCall:
        return OpCall("Write", _fresh_value(prefix, exclude=(value_of(op),)))

    return _scenario("register-sync", r, op, follow_up, protocol, completion_bound)


def sync_necessity_snapshot(
    r: Run,
    op: Operation,
    protocol: Optional[Protocol] = None,
    completion_bound: Optional[int] = None,
) -> ScenarioReport:
    """Follow a solo update by a scan elsewhere, or a solo scan by an update elsewhere."""
    def follow_up(prefix: Run, j: int) -> OpCall:
        if op.name == "Update":
            return OpCall("Scan")
        mine = [u.arg for u in extract_history(prefix).of_process(j)]
        value = next(v for v in prefix.universe.values if v is not None and v not in mine)
        return OpCall("Update", value)

    return _scenario("snapshot-sync", r, op, follow_up, protocol, completion_bound)


def search_writemustsync(
    fixture: Fixture,
    m: int,
    budget: int,
    n: int = 2,
    seed: Optional[int] = None,
    completion_bound: Optional[int] = None,
) -> Optional[Run]:
    """
    Look for a run of m Writes by alternating writers, each running alone with
    its dispatcher's props randomly suppressed, in which every Write performs a
    fence or RMW. None means nothing was found within `budget` attempts, which
    proves nothing.
    """
    if m <= 0:
        raise PreconditionViolatedError("the number of writes must be positive", clause="m")
    rng = random.Random(get_default_seed() if seed is None else seed)
    protocol = fixture.protocol(n)
    bound = completion_bound or get_completion_bound()

    for attempt in range(budget):
        prop_prob = 1.0 if attempt == 0 else rng.uniform(0.1, 1.0)
        r = Run.empty(protocol.universe, protocol.name, seed)
        try:
            for k in range(m):
                writer = (k % n) + 1 if attempt == 0 else rng.randint(1, n)
                r = advance(r, JointAction(invokes={writer: OpCall("Write", _fresh_value(r))}))
                for _ in range(bound):
                    if r.final.pending_ops[writer] is None:
                        break
                    props = frozenset({writer}) if rng.random() < prop_prob else frozenset()
                    r = step(r, RoundPlan(moves={writer: 0}, props=props), protocol)
                if r.final.pending_ops[writer] is not None:
                    raise FixtureDivergedError(f"p{writer} did not complete its write")
        except (FixtureDivergedError, PreconditionViolatedError) as e:
            logger.debug(f"attempt {attempt} abandoned: {e.message}")
            continue

        writes = [op for op in extract_history(r).operations if op.name == "Write"]
        if len(writes) == m and all(contains_sync(r, w) for w in writes):
            log_analysis_action(logger, r.label(), "search_writemustsync", {"m": m, "attempt": attempt})
            return r
    return None
