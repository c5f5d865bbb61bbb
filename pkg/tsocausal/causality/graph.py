"""
The occurs-before graph of a run.

Nodes are <agent, time> points; base edges come from four sources:

    locality         <b, t> -> <b, t+1>
    buffer-flow      a W or RfB of tag k at process i -> d_i's later prop of k
    same-var         two memory accesses to x at t < t', except when both are
                     RfM, or when a prop at d_i is followed by an RfM at i
    prop-to-sync     a prop at d_i -> a later fence or RMW of process i

Occurs-before is reachability in this graph.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from ..core.machine import memory_access_var
from ..core.types import Event, EventKind, Node
from ..exceptions import NotFoundError
from ..runtime.run import Run

logger = logging.getLogger(__name__)


class EdgeKind(str, Enum):
    LOCALITY = "locality"
    BUFFER_FLOW = "buffer-flow"
    SAME_VAR = "same-var"
    PROP_TO_SYNC = "prop-to-sync"


@dataclass(frozen=True)
class ObEdge:
    source: Node
    target: Node
    kind: EdgeKind

    def __str__(self) -> str:
        return f"{self.source} -[{self.kind.value}]-> {self.target}"


@dataclass(frozen=True)
class WitnessChain:
    """A path of base edges establishing occurs-before between its endpoints."""

    edges: Tuple[ObEdge, ...]

    @property
    def source(self) -> Node:
        return self.edges[0].source

    @property
    def target(self) -> Node:
        return self.edges[-1].target

    def nodes(self) -> List[Node]:
        return [self.edges[0].source] + [e.target for e in self.edges]

    def __len__(self) -> int:
        return len(self.edges)

    def __str__(self) -> str:
        parts = [str(self.edges[0].source)]
        for edge in self.edges:
            parts.append(f"-[{edge.kind.value}]-> {edge.target}")
        return " ".join(parts)


def _same_var_excepted(first: Event, second: Event) -> bool:
    if first.kind is EventKind.RFM and second.kind is EventKind.RFM:
        return True
    return (first.kind is EventKind.PROP and second.kind is EventKind.RFM
            and first.agent.pid == second.agent.pid)


def base_edges(r: Run) -> Set[ObEdge]:
    edges: Set[ObEdge] = set()

    for agent in r.universe.agents:
        for t in range(r.horizon):
            edges.add(ObEdge(Node(agent, t), Node(agent, t + 1), EdgeKind.LOCALITY))

    accesses: Dict[str, List[Tuple[Node, Event]]] = defaultdict(list)
    buffered: Dict[object, List[Node]] = defaultdict(list)
    props: List[Tuple[Node, Event]] = []
    syncs: Dict[int, List[Node]] = defaultdict(list)

    for node, event in r.action_nodes():
        var = memory_access_var(event)
        if var is not None:
            accesses[var].append((node, event))
        if event.kind in (EventKind.W, EventKind.RFB):
            buffered[(event.agent.pid, event.tag)].append(node)
        if event.kind is EventKind.PROP:
            props.append((node, event))
        if event.kind in (EventKind.F, EventKind.RMW):
            syncs[event.agent.pid].append(node)

    for node, event in props:
        for source in buffered.get((event.agent.pid, event.tag), ()):
            if source.time < node.time:
                edges.add(ObEdge(source, node, EdgeKind.BUFFER_FLOW))
        for sync in syncs.get(event.agent.pid, ()):
            if node.time < sync.time:
                edges.add(ObEdge(node, sync, EdgeKind.PROP_TO_SYNC))

    for items in accesses.values():
        for n1, e1 in items:
            for n2, e2 in items:
                if n1.time < n2.time and not _same_var_excepted(e1, e2):
                    edges.add(ObEdge(n1, n2, EdgeKind.SAME_VAR))

    return edges


class ObGraph:
    """
    Occurs-before over a fixed run, backed by a networkx DiGraph.

    Each graph edge carries a `kinds` list, since one pair of nodes can be
    related by more than one base-edge source.
    """

    def __init__(self, horizon: int, nodes: Iterable[Node], edges: Iterable[ObEdge]):
        self.horizon = horizon
        self.graph = nx.DiGraph()
        self.graph.add_nodes_from(nodes)
        for edge in edges:
            if self.graph.has_edge(edge.source, edge.target):
                self.graph[edge.source][edge.target]["kinds"].append(edge.kind)
            else:
                self.graph.add_edge(edge.source, edge.target, kinds=[edge.kind])
        self._descendants: Dict[Node, FrozenSet[Node]] = {}
        self._ancestors: Dict[Node, FrozenSet[Node]] = {}

    @classmethod
    def build(cls, r: Run) -> "ObGraph":
        edges = base_edges(r)
        logger.debug(f"occurs-before graph of {r.label()}: {len(edges)} base edges")
        return cls(r.horizon, r.nodes(), edges)

    def _require(self, node: Node):
        if node not in self.graph:
            raise NotFoundError(f"node {node} is outside the run (horizon {self.horizon})",
                                error_code="unknown_node")

    def descendants(self, node: Node) -> FrozenSet[Node]:
        self._require(node)
        if node not in self._descendants:
            self._descendants[node] = frozenset(nx.descendants(self.graph, node))
        return self._descendants[node]

    def ancestors(self, node: Node) -> FrozenSet[Node]:
        self._require(node)
        if node not in self._ancestors:
            self._ancestors[node] = frozenset(nx.ancestors(self.graph, node))
        return self._ancestors[node]

    def reaches(self, a: Node, b: Node) -> bool:
        """a occurs before b. Irreflexive."""
        self._require(b)
        return a != b and b in self.descendants(a)

    def detached(self, nodes: Iterable[Node]) -> "ObGraph":
        """A copy in which `nodes` keep only their locality edges."""
        nodes = frozenset(nodes)
        kept = [
            edge for edge in self.edges()
            if edge.kind is EdgeKind.LOCALITY or not ({edge.source, edge.target} & nodes)
        ]
        return ObGraph(self.horizon, self.graph.nodes, kept)

    def edge_kinds(self, a: Node, b: Node) -> List[EdgeKind]:
        return list(self.graph[a][b]["kinds"])

    def edges(self) -> Set[ObEdge]:
        return {
            ObEdge(a, b, kind)
            for a, b, data in self.graph.edges(data=True)
            for kind in data["kinds"]
        }

    def witness(self, a: Node, b: Node, allowed: Optional[Set] = None) -> Optional[WitnessChain]:
        """A shortest chain of base edges from a to b, optionally through agents in `allowed` only."""
        self._require(a)
        self._require(b)
        if a == b:
            return None
        graph = self.graph
        if allowed is not None:
            graph = self.graph.subgraph(n for n in self.graph if n.agent in allowed)
            if a not in graph or b not in graph:
                return None
        try:
            path = nx.shortest_path(graph, a, b)
        except nx.NetworkXNoPath:
            return None
        return WitnessChain(tuple(
            ObEdge(u, v, self.graph[u][v]["kinds"][0]) for u, v in zip(path, path[1:])
        ))


def ob_query(r: Run, a: Node, b: Node, graph: Optional[ObGraph] = None) -> Optional[WitnessChain]:
    """A witness chain for a occurs-before b, or None when it does not hold."""
    graph = graph or ObGraph.build(r)
    return graph.witness(a, b)
