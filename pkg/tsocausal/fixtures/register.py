"""
Single-register implementations over one shared variable x.

    fenced       Write(v) = W(x,v); F; return    Read = R(x); return
    unfenced     Write(v) = W(x,v); return       (not linearizable)
    alternating  fences the even-numbered writes of each process only
"""

from ..core.types import Fence, OpCall, Read, Return, Universe, Write
from ..runtime.protocol import RecordKind
from .base import Fixture, RegisterWorkload, operation_component

REGISTER_VAR = "x"


def _universe(n: int) -> Universe:
    return Universe(n=n, variables=(REGISTER_VAR,), values=tuple(range(10)), default=0)


def _read_step(call: OpCall, since):
    if not since:
        return Read(REGISTER_VAR)
    return Return(call, since[-1].value)


def _write_step(call: OpCall, since, fence: bool):
    if not since:
        return Write(REGISTER_VAR, call.arg)
    if fence and since[-1].kind is RecordKind.W:
        return Fence()
    return Return(call)


def _writes_so_far(local) -> int:
    return sum(1 for rec in local if rec.kind is RecordKind.INVOKE and rec.op.name == "Write")


def _make(fence_policy):
    def components(universe: Universe):
        def step(pid, call, since, local):
            if call.name == "Read":
                return _read_step(call, since)
            return _write_step(call, since, fence_policy(local))

        return {pid: operation_component(pid, step) for pid in universe.pids}

    return components


REGISTER_FENCED = Fixture(
    name="register-fenced",
    description="register whose writes fence before returning",
    make_universe=_universe,
    make_components=_make(lambda local: True),
    make_workload=RegisterWorkload,
    object_kind="register",
)

REGISTER_UNFENCED = Fixture(
    name="register-unfenced",
    description="register whose writes return with the value still buffered",
    make_universe=_universe,
    make_components=_make(lambda local: False),
    make_workload=RegisterWorkload,
    object_kind="register",
)

REGISTER_ALTERNATING = Fixture(
    name="register-alternating",
    description="register fencing only every second write of each process",
    make_universe=_universe,
    make_components=_make(lambda local: _writes_so_far(local) % 2 == 0),
    make_workload=RegisterWorkload,
    object_kind="register",
)
