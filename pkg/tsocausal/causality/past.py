"""
Pasts of node sets and the per-agent thresholds derived from them.
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Optional

from ..core.types import Agent, Node
from ..runtime.run import Run
from .graph import ObGraph


def past(r: Run, nodes: Iterable[Node], graph: Optional[ObGraph] = None) -> FrozenSet[Node]:
    """Every node occurring before some node of `nodes`."""
    graph = graph or ObGraph.build(r)
    result = set()
    for node in nodes:
        result |= graph.ancestors(node)
    return frozenset(result)


def past_plus(r: Run, nodes: Iterable[Node], graph: Optional[ObGraph] = None) -> FrozenSet[Node]:
    nodes = frozenset(nodes)
    return past(r, nodes, graph) | nodes


@dataclass(frozen=True)
class Thresholds:
    """
    m̂_b for every agent: the first time of b outside Past⁺(S). Past⁺ is closed
    under locality, so b's nodes inside it always form a prefix 0 .. m̂_b - 1.
    """

    values: Dict[Agent, int]
    horizon: int

    def __getitem__(self, agent: Agent) -> int:
        return self.values[agent]

    @property
    def exhausted(self) -> FrozenSet[Agent]:
        """Agents with every node in Past⁺(S), so m̂_b = T + 1."""
        return frozenset(b for b, m in self.values.items() if m > self.horizon)

    def as_labels(self) -> Dict[str, int]:
        return {str(b): m for b, m in sorted(self.values.items())}


def thresholds_of(r: Run, plus: FrozenSet[Node]) -> Thresholds:
    values = {}
    for agent in r.universe.agents:
        times = [n.time for n in plus if n.agent == agent]
        values[agent] = max(times) + 1 if times else 0
    return Thresholds(values, r.horizon)


def thresholds(r: Run, nodes: Iterable[Node], graph: Optional[ObGraph] = None) -> Thresholds:
    return thresholds_of(r, past_plus(r, nodes, graph))


def m_hat(r: Run, nodes: Iterable[Node], b: Agent, graph: Optional[ObGraph] = None) -> int:
    """The first time of agent b not in Past⁺(nodes); T + 1 when all of b's nodes are in it."""
    return thresholds(r, nodes, graph)[b]
