"""
The occurs-before relation on TSO runs.
"""

from ..core.types import Node
from .graph import EdgeKind, ObEdge, ObGraph, WitnessChain, base_edges, ob_query
from .past import Thresholds, m_hat, past, past_plus, thresholds, thresholds_of
from .chains import (
    IjOnlyClassification,
    check_observations,
    feedback_loop,
    ij_only_classify,
    ob_operations,
    operation_feedback_loop,
)

__all__ = [
    'Node', 'EdgeKind', 'ObEdge', 'ObGraph', 'WitnessChain', 'base_edges', 'ob_query',
    'Thresholds', 'm_hat', 'past', 'past_plus', 'thresholds', 'thresholds_of',
    'IjOnlyClassification', 'check_observations', 'feedback_loop', 'ij_only_classify',
    'ob_operations', 'operation_feedback_loop',
]
