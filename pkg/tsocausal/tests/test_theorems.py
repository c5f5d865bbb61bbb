"""
Tests for the occurs-before and synchronization requirements of registers and snapshots
"""

import pytest

from tsocausal.causality.graph import ob_query
from tsocausal.core.types import Agent, Node, OpCall
from tsocausal.exceptions import PreconditionViolatedError
from tsocausal.fixtures import get_fixture
from tsocausal.linearizability import (
    check_register_ob_necessity,
    check_snapshot_ob,
    extract_history,
    require_unique_values,
    search_writemustsync,
    sync_necessity_register,
    sync_necessity_snapshot,
)
from tsocausal.runtime.executor import RandomScheduler, execute
from tsocausal.runtime.history import History, Operation, contains_sync
from tsocausal.runtime.protocol import RoundPlan

P1, P2 = Agent.process(1), Agent.process(2)
D1, D2 = Agent.dispatcher(1), Agent.dispatcher(2)


def simulated_run(fixture_name, seed, rounds=16):
    fixture = get_fixture(fixture_name)
    protocol = fixture.protocol(2)
    scheduler = RandomScheduler(protocol, seed=seed, workload=fixture.workload(protocol.universe))
    return execute(protocol, scheduler, rounds)


@pytest.fixture
def snapshot_update_then_scan(drive):
    """snapshot-fenced: p1 updates s1 to 1 and fences, then p2 scans (1, None)."""
    protocol = get_fixture("snapshot-fenced").protocol(2)
    return drive(protocol, [
        RoundPlan(invokes={1: OpCall("Update", 1)}),
        RoundPlan(moves={1: 0}),
        RoundPlan(props=frozenset({1})),
        RoundPlan(moves={1: 0}),
        RoundPlan(moves={1: 0}),
        RoundPlan(),
        RoundPlan(invokes={2: OpCall("Scan")}),
    ] + [RoundPlan(moves={2: 0})] * 5)


@pytest.fixture
def fenced_writes_run(drive):
    """
    register-fenced: p1 writes 1, then p2 writes 2, each W, prop, F, return.
    Write(1) spans p1@0..p1@5, Write(2) spans p2@6..p2@11.
    """
    protocol = get_fixture("register-fenced").protocol(2)
    return drive(protocol, [
        RoundPlan(invokes={1: OpCall("Write", 1)}),
        RoundPlan(moves={1: 0}),
        RoundPlan(props=frozenset({1})),
        RoundPlan(moves={1: 0}),
        RoundPlan(moves={1: 0}),
        RoundPlan(),
        RoundPlan(invokes={2: OpCall("Write", 2)}),
        RoundPlan(moves={2: 0}),
        RoundPlan(props=frozenset({2})),
        RoundPlan(moves={2: 0}),
        RoundPlan(moves={2: 0}),
    ])


@pytest.fixture
def lone_scan_run(drive):
    """snapshot-fenced: a lone Scan at p1, two collects without a fence, returning (None, None)."""
    protocol = get_fixture("snapshot-fenced").protocol(2)
    return drive(protocol, [RoundPlan(invokes={1: OpCall("Scan")})] + [RoundPlan(moves={1: 0})] * 5)


@pytest.fixture
def unfenced_update_run(drive):
    """snapshot-unfenced: a lone Update(1) at p1 that returns with s1 buffered."""
    protocol = get_fixture("snapshot-unfenced").protocol(2)
    return drive(protocol, [
        RoundPlan(invokes={1: OpCall("Update", 1)}),
        RoundPlan(moves={1: 0}),
        RoundPlan(moves={1: 0}),
    ])


@pytest.mark.unit
@pytest.mark.lin
class TestObNecessity:
    """Operation pairs that need an occurs-before chain"""

    def test_unfenced_register_lacks_chain(self, unfenced_violation_run):
        report = check_register_ob_necessity(unfenced_violation_run)
        assert report.kinds() == ["ob-chain"]
        assert report.checked == 1

    def test_fenced_writes_have_chain(self, fenced_writes_run):
        report = check_register_ob_necessity(fenced_writes_run)
        assert report.ok
        assert report.checked == 1
        chain = ob_query(fenced_writes_run, Node(P1, 0), Node(P2, 11))
        assert chain.nodes() == [
            Node(P1, 0), Node(P1, 1), Node(D1, 2), Node(D2, 8), Node(P2, 9), Node(P2, 10), Node(P2, 11),
        ]

    def test_pairs_with_equal_values_skipped(self, fenced_register_run):
        # Write(1) followed by a Read returning 1
        report = check_register_ob_necessity(fenced_register_run)
        assert report.ok
        assert report.checked == 0

    def test_repeated_values_refused(self):
        agent = Agent.process(1)
        ops = tuple(
            Operation(f"p1#{k}", 1, k, OpCall("Write", 5), Node(agent, 3 * k), Node(agent, 3 * k + 2))
            for k in (1, 2)
        )
        with pytest.raises(PreconditionViolatedError) as exc:
            require_unique_values(History(ops, horizon=10))
        assert exc.value.clause == "unique-values"

    def test_snapshot_scan_reflects_update(self, snapshot_update_then_scan):
        scan = extract_history(snapshot_update_then_scan).by_id("p2#1")
        assert scan.result == (1, None)
        report = check_snapshot_ob(snapshot_update_then_scan)
        assert report.ok
        assert report.checked == 1

    @pytest.mark.slow
    @pytest.mark.integration
    @pytest.mark.parametrize("fixture_name, check", [
        ("register-fenced", check_register_ob_necessity),
        ("snapshot-fenced", check_snapshot_ob),
        ("snapshot-rmw", check_snapshot_ob),
    ])
    def test_random_synchronizing_runs(self, fixture_name, check):
        checked = 0
        for seed in range(200):
            report = check(simulated_run(fixture_name, seed, rounds=24))
            assert report.ok, (seed, report.violations)
            checked += report.checked
        assert checked > 0


@pytest.mark.unit
@pytest.mark.lin
class TestSyncNecessity:
    """Follow-up operations forced to synchronize"""

    def test_register_read_followed_by_write(self, fenced_register_run):
        read = extract_history(fenced_register_run).by_id("p2#1")
        report = sync_necessity_register(fenced_register_run, read)
        assert report.ok
        assert report.follow_up_process == 1
        assert report.follow_up_sync
        assert report.indistinguishable
        assert 3 in report.lemma_cases

    def test_synchronizing_operation_refused(self, fenced_register_run):
        write = extract_history(fenced_register_run).by_id("p1#1")
        with pytest.raises(PreconditionViolatedError) as exc:
            sync_necessity_register(fenced_register_run, write)
        assert exc.value.clause == "sync"

    def test_overlapping_operation_refused(self, concurrent_register_run):
        write = extract_history(concurrent_register_run).by_id("p1#1")
        with pytest.raises(PreconditionViolatedError) as exc:
            sync_necessity_register(concurrent_register_run, write)
        assert exc.value.clause == "solo"

    def test_snapshot_update_followed_by_scan(self, unfenced_update_run):
        update = extract_history(unfenced_update_run).by_id("p1#1")
        report = sync_necessity_snapshot(unfenced_update_run, update)
        assert report.ok
        assert report.follow_up.startswith("p2#1:Scan")
        assert report.sync_events

    def test_snapshot_scan_followed_by_update(self, lone_scan_run):
        scan = extract_history(lone_scan_run).by_id("p1#1")
        assert scan.complete and not contains_sync(lone_scan_run, scan)
        report = sync_necessity_snapshot(lone_scan_run, scan)
        assert report.ok
        assert report.follow_up_process == 2
        assert report.follow_up.startswith("p2#1:Update")
        assert report.follow_up_sync
        assert report.indistinguishable
        assert 3 in report.lemma_cases


@pytest.mark.unit
@pytest.mark.lin
class TestWriteSearch:
    """Searching for runs whose writes all synchronize"""

    def test_fenced_writes_found(self):
        r = search_writemustsync(get_fixture("register-fenced"), 2, budget=5, seed=1)
        assert r is not None
        writes = [op for op in extract_history(r).operations if op.name == "Write"]
        assert len(writes) == 2
        assert all(contains_sync(r, w) for w in writes)

    def test_unfenced_writes_never_sync(self):
        assert search_writemustsync(get_fixture("register-unfenced"), 1, budget=3, seed=1) is None

    def test_positive_write_count(self):
        with pytest.raises(PreconditionViolatedError) as exc:
            search_writemustsync(get_fixture("register-fenced"), 0, budget=1)
        assert exc.value.clause == "m"
