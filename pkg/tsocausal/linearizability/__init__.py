"""
Histories, sequential specifications, linearizability checking and the
occurs-before and synchronization requirements of registers and snapshots.
"""

from ..runtime.history import History, Operation, extract_history, precedes
from .specs import RegisterSpec, SequentialSpec, SnapshotSpec, spec_for, value_of
from .checker import (
    LinWitness,
    check_linearizable,
    check_linearizable_exhaustive,
    is_legal_linearization,
    minimal_violation,
)
from .theorems import (
    check_register_ob_necessity,
    check_snapshot_ob,
    require_unique_values,
    search_writemustsync,
    sync_necessity_register,
    sync_necessity_snapshot,
)

__all__ = [
    'History', 'Operation', 'extract_history', 'precedes',
    'RegisterSpec', 'SequentialSpec', 'SnapshotSpec', 'spec_for', 'value_of',
    'LinWitness', 'check_linearizable', 'check_linearizable_exhaustive',
    'is_legal_linearization', 'minimal_violation',
    'check_register_ob_necessity', 'check_snapshot_ob', 'require_unique_values',
    'search_writemustsync', 'sync_necessity_register', 'sync_necessity_snapshot',
]
