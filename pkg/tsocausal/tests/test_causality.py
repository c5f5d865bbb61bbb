"""
Tests for occurs-before, pasts, thresholds and chain classification
"""

import itertools

import networkx as nx
import pytest

from tsocausal.causality.chains import (
    check_observations,
    feedback_loop,
    ij_only_classify,
    ob_operations,
    operation_feedback_loop,
)
from tsocausal.causality.graph import EdgeKind, ObGraph, base_edges, ob_query
from tsocausal.causality.past import m_hat, past, past_plus, thresholds
from tsocausal.core.types import Agent, Fence, Node, Read, Rmw, Universe, Write
from tsocausal.exceptions import NoIjOnlyChainError, NotFoundError, PreconditionViolatedError
from tsocausal.runtime.executor import enumerate_runs
from tsocausal.runtime.history import extract_history
from tsocausal.runtime.protocol import Protocol, straight_line
from tsocausal.runtime.run import JointAction

P1, P2 = Agent.process(1), Agent.process(2)
D1, D2 = Agent.dispatcher(1), Agent.dispatcher(2)


def warshall(r):
    """Transitive closure of the base edges, computed the slow way."""
    nodes = list(r.nodes())
    index = {n: k for k, n in enumerate(nodes)}
    reach = [[False] * len(nodes) for _ in nodes]
    for edge in base_edges(r):
        reach[index[edge.source]][index[edge.target]] = True
    for k in range(len(nodes)):
        for a in range(len(nodes)):
            if reach[a][k]:
                for b in range(len(nodes)):
                    if reach[k][b]:
                        reach[a][b] = True
    return nodes, index, reach


def agrees_with_oracle(r):
    graph = ObGraph.build(r)
    nodes, index, reach = warshall(r)
    for a, b in itertools.product(nodes, nodes):
        if graph.reaches(a, b) != reach[index[a]][index[b]]:
            return False
        if graph.reaches(a, b) and not a.time < b.time:
            return False
    return nx.is_directed_acyclic_graph(graph.graph) and check_observations(r, graph).ok


@pytest.fixture
def tiny_protocol():
    universe = Universe(n=2, variables=("x",), values=(0, 1), default=0)
    actions = (Read("x"), Write("x", 1), Fence(), Rmw("x", 0, 1))

    def component(local):
        return actions

    return Protocol("tiny", universe, {pid: component for pid in universe.pids})


PROGRAM_PAIRS = [
    ([Write("x", 1), Read("x")], [Read("x")]),
    ([Write("x", 1), Fence()], [Rmw("x", 0, 1)]),
    ([Read("x"), Write("x", 1)], [Write("x", 1)]),
]


def program_protocol(first, second):
    universe = Universe(n=2, variables=("x",), values=(0, 1), default=0)
    return Protocol("programs", universe, {1: straight_line(first), 2: straight_line(second)})


@pytest.fixture
def ij_run(chaos_protocol, build_run):
    """p1 reads x from memory, p2 writes x, d2 propagates, p2 fences."""
    return build_run(chaos_protocol, [
        JointAction({1: Read("x"), 2: Write("x", 1)}),
        JointAction(props=frozenset({2})),
        JointAction({2: Fence()}),
    ])


@pytest.mark.unit
@pytest.mark.causality
class TestObGraph:
    """Base edges and reachability on the store-buffering run"""

    def test_buffer_flow_edge(self, sb_run):
        graph = ObGraph.build(sb_run)
        assert graph.edge_kinds(Node(P1, 0), Node(D1, 2)) == [EdgeKind.BUFFER_FLOW]

    def test_memory_read_before_foreign_prop(self, sb_run):
        graph = ObGraph.build(sb_run)
        assert graph.reaches(Node(P2, 1), Node(D1, 2))
        assert graph.reaches(Node(P1, 1), Node(D2, 2))

    def test_no_chain_between_processes(self, sb_run):
        assert ob_query(sb_run, Node(P1, 0), Node(P2, 3)) is None
        assert ob_query(sb_run, Node(P2, 0), Node(P1, 3)) is None

    def test_witness_chain(self, sb_run):
        chain = ob_query(sb_run, Node(P2, 1), Node(D1, 3))
        assert str(chain) == "p2@1 -[same-var]-> d1@2 -[locality]-> d1@3"
        assert chain.nodes() == [Node(P2, 1), Node(D1, 2), Node(D1, 3)]

    def test_irreflexive(self, sb_run):
        graph = ObGraph.build(sb_run)
        assert not graph.reaches(Node(P1, 1), Node(P1, 1))
        assert graph.reaches(Node(P1, 1), Node(P1, 2))

    def test_node_outside_run(self, sb_run):
        graph = ObGraph.build(sb_run)
        with pytest.raises(NotFoundError):
            graph.reaches(Node(P1, 0), Node(P1, 10))

    def test_observations_hold(self, sb_run, feedback_run):
        assert check_observations(sb_run).ok
        assert check_observations(feedback_run).ok


@pytest.mark.unit
@pytest.mark.causality
class TestPast:
    """Pasts and delay thresholds"""

    def test_past_of_prop(self, sb_run):
        expected = {Node(P1, 0), Node(D1, 0), Node(D1, 1), Node(P2, 0), Node(P2, 1)}
        assert past(sb_run, {Node(D1, 2)}) == expected
        assert past_plus(sb_run, {Node(D1, 2)}) == expected | {Node(D1, 2)}

    def test_thresholds(self, sb_run):
        th = thresholds(sb_run, {Node(D1, 2)})
        assert th.as_labels() == {"p1": 1, "p2": 2, "d1": 3, "d2": 0}
        assert not th.exhausted
        assert m_hat(sb_run, {Node(D1, 2)}, D2) == 0

    def test_exhausted_agents(self, sb_run):
        final = {Node(b, 3) for b in sb_run.universe.agents}
        assert thresholds(sb_run, final).exhausted == frozenset(sb_run.universe.agents)

    def test_empty_set_has_empty_past(self, sb_run):
        assert past(sb_run, set()) == frozenset()
        assert set(thresholds(sb_run, set()).as_labels().values()) == {0}


@pytest.mark.unit
@pytest.mark.causality
class TestChains:
    """Feedback loops, operation order and {i,j}-only chains"""

    def test_feedback_loop_found(self, feedback_run):
        assert feedback_loop(feedback_run, Node(P1, 0), Node(P1, 6)) == Node(P2, 3)
        op = extract_history(feedback_run).by_id("p1#1")
        assert operation_feedback_loop(feedback_run, op) == Node(P2, 3)

    def test_no_feedback_loop(self, ij_run):
        assert feedback_loop(ij_run, Node(P2, 0), Node(P2, 3)) is None

    def test_feedback_loop_needs_one_process(self, ij_run):
        for a, b in ((Node(P1, 0), Node(P2, 3)), (Node(D2, 0), Node(D2, 3))):
            with pytest.raises(PreconditionViolatedError) as exc:
                feedback_loop(ij_run, a, b)
            assert exc.value.clause == "same-process"

    def test_operation_order(self, fenced_register_run, unfenced_violation_run):
        graph = ObGraph.build(fenced_register_run)
        write, read = extract_history(fenced_register_run).operations
        assert ob_operations(graph, write, read)
        graph = ObGraph.build(unfenced_violation_run)
        write, read = extract_history(unfenced_violation_run).operations
        assert not ob_operations(graph, write, read)

    def test_read_then_remote_fence(self, ij_run):
        result = ij_only_classify(ij_run, Node(P1, 0), Node(P2, 3), 1, 2)
        assert result.case_numbers == [3]
        assert result.cases[3] == (0, 2)

    def test_write_prop_then_remote_read(self, chaos_protocol, build_run):
        r = build_run(chaos_protocol, [
            JointAction({1: Write("x", 1)}),
            JointAction(props=frozenset({1})),
            JointAction({2: Read("x")}),
        ])
        result = ij_only_classify(r, Node(P1, 0), Node(P2, 3), 1, 2)
        assert result.case_numbers == [2]
        assert result.cases[2] == (0, 1, 2)

    def test_no_chain(self, ij_run):
        with pytest.raises(NoIjOnlyChainError):
            ij_only_classify(ij_run, Node(P2, 0), Node(P1, 3), 2, 1)
        with pytest.raises(NoIjOnlyChainError):
            ij_only_classify(ij_run, Node(P1, 0), Node(P1, 3), 1, 1)


@pytest.mark.causality
@pytest.mark.integration
class TestExhaustiveOracle:
    """Occurs-before against a naive closure on every small run"""

    def test_all_runs_up_to_two_rounds(self, tiny_protocol):
        count = 0
        for r in itertools.chain(enumerate_runs(tiny_protocol, 1), enumerate_runs(tiny_protocol, 2)):
            assert agrees_with_oracle(r), [record.events for record in r.rounds]
            count += 1
        assert count > 0

    @pytest.mark.slow
    def test_all_runs_up_to_four_rounds(self, tiny_protocol):
        for horizon in (3, 4):
            for r in enumerate_runs(tiny_protocol, horizon):
                assert agrees_with_oracle(r), [record.events for record in r.rounds]

    def test_ij_classification_complete_on_small_runs(self, tiny_protocol):
        for r in enumerate_runs(tiny_protocol, 2):
            graph = ObGraph.build(r)
            for t1, t2 in itertools.product(range(r.horizon + 1), repeat=2):
                a, b = Node(P1, t1), Node(P2, t2)
                if graph.witness(a, b, allowed=set(r.universe.agents)) is None:
                    continue
                assert ij_only_classify(r, a, b, 1, 2, graph).case_numbers, (a, b)

    @pytest.mark.slow
    @pytest.mark.parametrize("first, second", PROGRAM_PAIRS)
    def test_short_programs_up_to_six_rounds(self, first, second):
        protocol = program_protocol(first, second)
        count = 0
        for horizon in range(1, 7):
            for r in enumerate_runs(protocol, horizon):
                assert agrees_with_oracle(r), [record.events for record in r.rounds]
                count += 1
        assert count > 0

    @pytest.mark.slow
    @pytest.mark.parametrize("first, second", PROGRAM_PAIRS)
    def test_ij_classification_complete_up_to_six_rounds(self, first, second):
        for r in enumerate_runs(program_protocol(first, second), 6):
            graph = ObGraph.build(r)
            for t1, t2 in itertools.product(range(r.horizon + 1), repeat=2):
                a, b = Node(P1, t1), Node(P2, t2)
                if not graph.reaches(a, b):
                    continue
                assert ij_only_classify(r, a, b, 1, 2, graph).case_numbers, (a, b)
