from typing import Optional

from ..causality.past import Thresholds
from ..core.types import Node


def shift(t: int, k: int, delta: int) -> int:
    """Times up to k stay put; later times move delta rounds into the future."""
    if t < 0 or k < 0 or delta < 0:
        raise ValueError(f"shift needs non-negative arguments, got t={t} k={k} delta={delta}")
    return t if t <= k else t + delta


def source_round(k: int, threshold: int, delta: int) -> Optional[int]:
    """
    The round of the original run whose action an agent with threshold m̂
    replays in round k of the delayed run. None inside the gap of null rounds.
    """
    if k <= threshold:
        return k
    if k <= threshold + delta:
        return None
    return k - delta


def shifted_node(node: Node, th: Thresholds, delta: int) -> Node:
    """The node of the delayed run performing the action `node` performs."""
    return Node(node.agent, shift(node.time + 1, th[node.agent], delta) - 1)
