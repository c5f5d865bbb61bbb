"""
Command implementations behind the `tsocausal` entry point.

Each `cmd_*` function takes parsed arguments, prints its report and returns
the process exit code: 0 when the report is clean, 1 when it lists
violations. Errors are turned into exit codes by `handle_exceptions`.
"""

import argparse
import sys
from typing import Callable, Dict, Optional, Tuple

from pydantic import ValidationError

from ..causality.chains import check_observations
from ..causality.graph import ObGraph, ob_query
from ..causality.past import past, past_plus, thresholds
from ..dtf.constructions import solo_transform, unpropagated_transform
from ..dtf.transform import dtf_transform
from ..dtf.verify import check_shift_claims, local_equivalence, verify_dtf
from ..exceptions import ConfigurationError, TraceFormatError
from ..fixtures import get_fixture, protocol_for_run
from ..linearizability.checker import check_linearizable, minimal_violation
from ..linearizability.specs import spec_for
from ..linearizability.theorems import (
    check_register_ob_necessity,
    check_snapshot_ob,
    search_writemustsync,
    sync_necessity_register,
    sync_necessity_snapshot,
)
from ..runtime.executor import RandomScheduler, execute
from ..runtime.history import extract_history, locate_operation, runs_solo
from ..runtime.run import Run, quiesce
from ..runtime.validation import validate_run
from ..schemas.reports import LinearizabilityReport, Report, ValidationReport
from ..schemas.scenario import ScenarioConfig
from ..utils.error_handlers import EXIT_OK, EXIT_VIOLATIONS, handle_exceptions
from ..utils.logging_utils import get_logger, log_function_call
from .trace_format import emit_trace, format_node, load_run, run_to_trace, write_trace

logger = get_logger(__name__)


def _print(text: str):
    print(text, file=sys.stdout)


def _emit_report(report) -> None:
    _print(report.model_dump_json(indent=2))


def _exit_code(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_VIOLATIONS


# ─────────────────────────
# simulate
# ─────────────────────────

def scenario_config(args: argparse.Namespace) -> ScenarioConfig:
    """Build a ScenarioConfig from CLI flags, leaving unset ones to the model's defaults."""
    fields = {
        name: getattr(args, name)
        for name in ScenarioConfig.model_fields
        if getattr(args, name, None) is not None
    }
    try:
        return ScenarioConfig(**fields)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        raise ConfigurationError(f"{where}: {first.get('msg')}", error_code="bad_config")


def simulate(config: ScenarioConfig) -> Tuple[Run, ValidationReport]:
    """Produce a seeded run of the configured fixture and validate it."""
    fixture = get_fixture(config.fixture)
    protocol = fixture.protocol(config.n)
    scheduler = RandomScheduler(
        protocol,
        seed=config.seed,
        workload=fixture.workload(protocol.universe, config.write_ratio),
        move_prob=config.move_prob,
        prop_prob=config.prop_prob,
        invoke_prob=config.invoke_prob,
    )
    r = execute(protocol, scheduler, config.rounds, config.seed)
    if config.quiesce:
        r = quiesce(r, protocol)
    if config.validate_trace:
        report = validate_run(r, protocol)
    else:
        report = ValidationReport(horizon=r.horizon, protocol=protocol.name)
    return r, report


@handle_exceptions
@log_function_call(logger)
def cmd_simulate(args: argparse.Namespace) -> int:
    config = scenario_config(args)
    r, report = simulate(config)
    trace = run_to_trace(r)
    if args.out:
        write_trace(args.out, trace)
        _emit_report(report)
    else:
        sys.stdout.write(emit_trace(trace))
        if not report.ok:
            print(report.model_dump_json(indent=2), file=sys.stderr)
    return _exit_code(report.ok)


# ─────────────────────────
# search
# ─────────────────────────

@handle_exceptions
@log_function_call(logger)
def cmd_search(args: argparse.Namespace) -> int:
    """Look for a run where every write synchronizes; exit 1 when none turns up."""
    found = search_writemustsync(
        get_fixture(args.fixture), args.writes, args.budget, n=args.n or 2, seed=args.seed,
    )
    if found is None:
        _print(f"no run found within {args.budget} attempts")
        return EXIT_VIOLATIONS
    _print(f"every write synchronizes in a run of {found.horizon} rounds")
    if args.out:
        write_trace(args.out, run_to_trace(found))
    return EXIT_OK


# ─────────────────────────
# analyze
# ─────────────────────────

def _object_kind(r: Run, override: Optional[str]) -> str:
    if override:
        return override
    kind = get_fixture(r.protocol_name).object_kind
    if kind is None:
        raise ConfigurationError(
            f"fixture {r.protocol_name} implements no object; pass --spec", error_code="no_object",
        )
    return kind


def _query_ob(r: Run, args: argparse.Namespace) -> int:
    chain = ob_query(r, args.source, args.target)
    _print(str(chain) if chain is not None else "none")
    return EXIT_OK


def _query_past(r: Run, args: argparse.Namespace) -> int:
    graph = ObGraph.build(r)
    nodes = args.nodes
    th = thresholds(r, nodes, graph)
    _print(f"past: {' '.join(format_node(n) for n in sorted(past(r, nodes, graph)))}")
    _print(f"past+: {' '.join(format_node(n) for n in sorted(past_plus(r, nodes, graph)))}")
    _print(f"thresholds: {' '.join(f'{a}={m}' for a, m in th.as_labels().items())}")
    if th.exhausted:
        _print(f"exhausted: {' '.join(str(b) for b in sorted(th.exhausted))}")
    return EXIT_OK


def _query_transform(r: Run, args: argparse.Namespace) -> int:
    graph = ObGraph.build(r)
    delayed = dtf_transform(r, args.nodes, args.delta, graph, allow_exhausted=args.allow_exhausted)
    write_trace(args.out, run_to_trace(delayed))
    report = verify_dtf(r, delayed, args.nodes, args.delta, protocol_for_run(r), graph)
    claims = check_shift_claims(r, delayed, args.nodes, args.delta, graph)
    report.violations.extend(claims.violations)
    _emit_report(report)
    return _exit_code(report.ok)


def _query_solo(r: Run, args: argparse.Namespace) -> int:
    op = extract_history(r).by_id(args.op)
    moved_run = solo_transform(r, op)
    report = Report()
    report.violations.extend(local_equivalence(r, moved_run).violations)
    report.violations.extend(validate_run(moved_run, protocol_for_run(r)).violations)
    moved = locate_operation(moved_run, op)
    if not runs_solo(moved_run, moved):
        report.add("solo", f"{op.op_id} still overlaps other agents")
    _print(f"{op.op_id} runs solo in rounds {moved.start.time + 1}..{moved.end.time}")
    if args.out:
        write_trace(args.out, run_to_trace(moved_run))
    _emit_report(report)
    return _exit_code(report.ok)


def _query_unpropagated(r: Run, args: argparse.Namespace) -> int:
    op = extract_history(r).by_id(args.op)
    result = unpropagated_transform(r, op, args.tag)
    moved = locate_operation(result, op)
    _print(f"{args.tag} stays buffered until {format_node(moved.end)}")
    if args.out:
        write_trace(args.out, run_to_trace(result))
    report = local_equivalence(r, result)
    _emit_report(report)
    return _exit_code(report.ok)


def _query_check_lin(r: Run, args: argparse.Namespace) -> int:
    h = extract_history(r)
    spec = spec_for(_object_kind(r, args.spec), r.universe)
    witness = check_linearizable(h, spec, args.lin_bound)
    if witness is not None:
        report = LinearizabilityReport(
            linearizable=True,
            order=list(witness.order),
            dropped=list(witness.dropped),
            operations=len(h),
        )
        _print("linearizable")
    else:
        core = minimal_violation(h, spec) or ()
        report = LinearizabilityReport(linearizable=False, minimal_violation=list(core), operations=len(h))
        described = ", ".join(str(h.by_id(op_id)) for op_id in core)
        _print(f"NOT linearizable: {described}")
    _emit_report(report)
    return _exit_code(report.linearizable)


def _query_sync(r: Run, args: argparse.Namespace) -> int:
    op = extract_history(r).by_id(args.op)
    scenario = sync_necessity_register if _object_kind(r, args.spec) == "register" else sync_necessity_snapshot
    report = scenario(r, op, completion_bound=args.completion_bound)
    _emit_report(report)
    return _exit_code(report.ok)


def _query_necessity(r: Run, args: argparse.Namespace) -> int:
    check = check_register_ob_necessity if _object_kind(r, args.spec) == "register" else check_snapshot_ob
    report = check(r)
    _emit_report(report)
    return _exit_code(report.ok)


def _query_observations(r: Run, args: argparse.Namespace) -> int:
    report = check_observations(r)
    _emit_report(report)
    return _exit_code(report.ok)


QUERIES: Dict[str, Callable[[Run, argparse.Namespace], int]] = {
    "ob": _query_ob,
    "past": _query_past,
    "transform": _query_transform,
    "solo": _query_solo,
    "unpropagated": _query_unpropagated,
    "check-lin": _query_check_lin,
    "sync": _query_sync,
    "necessity": _query_necessity,
    "observations": _query_observations,
}


def _require_valid(r: Run):
    report = validate_run(r, protocol_for_run(r))
    if not report.ok:
        first = report.violations[0]
        line = first.round + 1 if first.round is not None else 1
        raise TraceFormatError(f"{first.kind}: {first.message}", line=line, error_code="invalid_trace")


@handle_exceptions
@log_function_call(logger)
def cmd_analyze(args: argparse.Namespace) -> int:
    r = load_run(args.trace)
    if not args.skip_validation:
        _require_valid(r)
    return QUERIES[args.query](r, args)

