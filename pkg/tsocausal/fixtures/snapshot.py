"""
Single-writer snapshot implementations. Process i owns component s_i;
scans are double collects that return once two consecutive collects agree.

    fenced    Update(v) = W(s_i,v); F; return
    rmw       Update(v) = RMW(s_i, previous, v); return
    unfenced  Update(v) = W(s_i,v); return; Scan begins with a fence
"""

from ..core.types import Fence, OpCall, Read, Return, Rmw, Universe, Write
from ..runtime.protocol import RecordKind
from .base import Fixture, SnapshotWorkload, operation_component


def component_var(pid: int) -> str:
    return f"s{pid}"


def _universe(n: int) -> Universe:
    return Universe(
        n=n,
        variables=tuple(component_var(i) for i in range(1, n + 1)),
        values=(None,) + tuple(range(1, 10)),
        default=None,
    )


def _scan_step(n: int, call: OpCall, since):
    reads = [rec.value for rec in since if rec.kind is RecordKind.R]
    if len(reads) >= 2 * n and len(reads) % n == 0:
        last, previous = reads[-n:], reads[-2 * n:-n]
        if last == previous:
            return Return(call, tuple(last))
    return Read(component_var(len(reads) % n + 1))


def _previous_update(local) -> object:
    """The argument of this process's last update before the pending one."""
    invokes = [rec.op for rec in local if rec.kind is RecordKind.INVOKE and rec.op.name == "Update"]
    return invokes[-2].arg if len(invokes) >= 2 else None


def _fenced(universe: Universe):
    def step(pid, call, since, local):
        if call.name == "Scan":
            return _scan_step(universe.n, call, since)
        if not since:
            return Write(component_var(pid), call.arg)
        if since[-1].kind is RecordKind.W:
            return Fence()
        return Return(call)

    return {pid: operation_component(pid, step) for pid in universe.pids}


def _rmw(universe: Universe):
    def step(pid, call, since, local):
        if call.name == "Scan":
            return _scan_step(universe.n, call, since)
        if not since:
            return Rmw(component_var(pid), _previous_update(local), call.arg)
        return Return(call)

    return {pid: operation_component(pid, step) for pid in universe.pids}


def _unfenced(universe: Universe):
    def step(pid, call, since, local):
        if call.name == "Scan":
            if not since:
                return Fence()
            return _scan_step(universe.n, call, since[1:])
        if not since:
            return Write(component_var(pid), call.arg)
        return Return(call)

    return {pid: operation_component(pid, step) for pid in universe.pids}


SNAPSHOT_FENCED = Fixture(
    name="snapshot-fenced",
    description="snapshot with fenced updates and double-collect scans",
    make_universe=_universe,
    make_components=_fenced,
    make_workload=SnapshotWorkload,
    object_kind="snapshot",
)

SNAPSHOT_RMW = Fixture(
    name="snapshot-rmw",
    description="snapshot whose updates install their value with an RMW",
    make_universe=_universe,
    make_components=_rmw,
    make_workload=SnapshotWorkload,
    object_kind="snapshot",
)

SNAPSHOT_UNFENCED = Fixture(
    name="snapshot-unfenced",
    description="snapshot with unfenced updates and scans that fence first",
    make_universe=_universe,
    make_components=_unfenced,
    make_workload=SnapshotWorkload,
    object_kind="snapshot",
)
