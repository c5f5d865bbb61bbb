"""
Protocols, runs, execution and histories over the TSO machine.
"""

from .protocol import (
    LocalRecord,
    LocalState,
    Protocol,
    RecordKind,
    RoundPlan,
    Schedule,
    current_operation,
    straight_line,
)
from .run import (
    GlobalState,
    JointAction,
    RoundRecord,
    Run,
    advance,
    joint_apply,
    pad,
    quiesce,
    schedule_of,
    truncate,
)
from .executor import RandomScheduler, enumerate_runs, execute, resolve_plan, step
from .validation import validate_run
from .history import (
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

__all__ = [
    'LocalRecord', 'LocalState', 'Protocol', 'RecordKind', 'RoundPlan', 'Schedule',
    'current_operation', 'straight_line',
    'GlobalState', 'JointAction', 'RoundRecord', 'Run', 'advance', 'joint_apply', 'pad',
    'quiesce', 'schedule_of', 'truncate',
    'RandomScheduler', 'enumerate_runs', 'execute', 'resolve_plan', 'step',
    'validate_run',
    'History', 'Operation', 'contains_sync', 'extract_history', 'locate_operation',
    'operation_events', 'precedes', 'runs_in_isolation', 'runs_solo',
]
