"""
tsocausal command line.

    tsocausal simulate --fixture sb --rounds 6 --seed 1 --out sb.trace
    tsocausal analyze sb.trace ob --from p1@0 --to p2@3
    tsocausal analyze sb.trace transform --nodes p1@2 --delta 3 --out delayed.trace
"""

import argparse
import sys
from typing import List, Optional

from ..config import get_log_level
from ..fixtures import fixture_names
from ..utils.logging_utils import configure_logging
from .commands import cmd_analyze, cmd_search, cmd_simulate
from .trace_format import parse_node, parse_nodes, parse_tag


def _add_simulate(sub):
    p = sub.add_parser("simulate", help="run a fixture under a seeded random schedule and write its trace")
    p.add_argument("--fixture", required=True, help=f"one of: {', '.join(fixture_names())}")
    p.add_argument("--rounds", type=int)
    p.add_argument("--seed", type=int, help="defaults to TSOCAUSAL_SEED, else 0")
    p.add_argument("--n", type=int, help="number of processes")
    p.add_argument("--move-prob", dest="move_prob", type=float)
    p.add_argument("--prop-prob", dest="prop_prob", type=float)
    p.add_argument("--invoke-prob", dest="invoke_prob", type=float)
    p.add_argument("--write-ratio", dest="write_ratio", type=float,
                   help="share of writes or updates among invoked operations")
    p.add_argument("--quiesce", action="store_true", default=None,
                   help="drain every buffer after the last round")
    p.add_argument("--no-validate", dest="validate_trace", action="store_false", default=None)
    p.add_argument("--out", help="trace file; stdout when omitted")
    p.set_defaults(handler=cmd_simulate)


def _add_search(sub):
    p = sub.add_parser("search", help="look for a run in which every write fences or uses RMW")
    p.add_argument("--fixture", required=True)
    p.add_argument("--writes", type=int, required=True)
    p.add_argument("--budget", type=int, default=50)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_search)


def _add_analyze(sub):
    p = sub.add_parser("analyze", help="query a recorded trace")
    p.add_argument("trace")
    p.add_argument("--skip-validation", action="store_true",
                   help="accept traces of protocols that are not shipped fixtures")
    p.set_defaults(handler=cmd_analyze)
    queries = p.add_subparsers(dest="query", required=True)

    q = queries.add_parser("ob", help="witness chain between two nodes, or 'none'")
    q.add_argument("--from", dest="source", type=parse_node, required=True)
    q.add_argument("--to", dest="target", type=parse_node, required=True)

    q = queries.add_parser("past", help="past of a node set and the delay thresholds it induces")
    q.add_argument("--nodes", type=parse_nodes, required=True, help="comma separated, e.g. p1@3,d2@4")

    q = queries.add_parser("transform", help="delay everything outside the past of --nodes")
    q.add_argument("--nodes", type=parse_nodes, required=True)
    q.add_argument("--delta", type=int, required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--allow-exhausted", action="store_true",
                   help="accept agents whose whole timeline lies in the past of --nodes")

    q = queries.add_parser("solo", help="move an operation into a window where only its process acts")
    q.add_argument("--op", required=True, help="operation id, e.g. p1#2")
    q.add_argument("--out")

    q = queries.add_parser("unpropagated", help="keep one write of an operation buffered until it returns")
    q.add_argument("--op", required=True)
    q.add_argument("--tag", type=parse_tag, required=True, help="writer:seq")
    q.add_argument("--out")

    q = queries.add_parser("check-lin", help="linearizability of the trace's history")
    q.add_argument("--spec", choices=("register", "snapshot"))
    q.add_argument("--lin-bound", dest="lin_bound", type=int)

    q = queries.add_parser("sync", help="follow a solo operation by one at another process")
    q.add_argument("--op", required=True)
    q.add_argument("--spec", choices=("register", "snapshot"))
    q.add_argument("--completion-bound", dest="completion_bound", type=int)

    q = queries.add_parser("necessity", help="operation pairs lacking the occurs-before chain they need")
    q.add_argument("--spec", choices=("register", "snapshot"))

    queries.add_parser("observations", help="structural facts every occurs-before graph satisfies")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tsocausal", description="Causality tooling for TSO runs")
    parser.add_argument("--log-level", dest="log_level", help="defaults to TSOCAUSAL_LOG_LEVEL, else WARNING")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_simulate(sub)
    _add_search(sub)
    _add_analyze(sub)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or get_log_level())
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
