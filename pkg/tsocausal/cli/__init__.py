"""
Command-line surface: trace files, simulation and analysis commands.
"""

from .trace_format import (
    emit_trace,
    format_node,
    load_run,
    parse_node,
    parse_nodes,
    parse_tag,
    parse_trace,
    read_trace,
    run_to_trace,
    trace_to_run,
    write_trace,
)
from .commands import cmd_analyze, cmd_search, cmd_simulate, scenario_config, simulate
from .main import build_parser, main

__all__ = [
    'emit_trace', 'format_node', 'load_run', 'parse_node', 'parse_nodes', 'parse_tag',
    'parse_trace', 'read_trace', 'run_to_trace', 'trace_to_run', 'write_trace',
    'cmd_analyze', 'cmd_search', 'cmd_simulate', 'scenario_config', 'simulate',
    'build_parser', 'main',
]
