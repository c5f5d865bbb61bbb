"""
The TSO machine: states, actions, events, enabledness and transitions.
"""

from .types import (
    Action,
    Agent,
    AgentKind,
    BufferEntry,
    Event,
    EventKind,
    Fence,
    INITIAL_TAG,
    Internal,
    Invoke,
    MemoryCell,
    NULL,
    Node,
    Null,
    OpCall,
    Prop,
    Read,
    Return,
    Rmw,
    Tag,
    TsoState,
    Universe,
    Write,
    all_agents,
)
from .machine import (
    apply,
    clashes,
    conflicts,
    consumes_write_counter,
    enabled,
    memory_access_var,
    same_round_buffer_flow,
)

__all__ = [
    'Action', 'Agent', 'AgentKind', 'BufferEntry', 'Event', 'EventKind', 'Fence',
    'INITIAL_TAG', 'Internal', 'Invoke', 'MemoryCell', 'NULL', 'Node', 'Null', 'OpCall',
    'Prop', 'Read', 'Return', 'Rmw', 'Tag', 'TsoState', 'Universe', 'Write', 'all_agents',
    'apply', 'clashes', 'conflicts', 'consumes_write_counter', 'enabled',
    'memory_access_var', 'same_round_buffer_flow',
]
