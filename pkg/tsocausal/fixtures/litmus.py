"""
Litmus programs and a random nondeterministic protocol.

sb: store buffering, p1: W(x,1); R(y)   p2: W(y,1); R(x)
mp: message passing, p1: W(x,1); W(y,1) p2: R(y); R(x)
"""

from ..core.types import Fence, NULL, Read, Rmw, Universe, Write
from ..runtime.protocol import straight_line
from .base import Fixture


def _two_vars(n: int) -> Universe:
    return Universe(n=n, variables=("x", "y"), values=(0, 1), default=0)


def _sb_components(universe: Universe):
    programs = {
        1: [Write("x", 1), Read("y")],
        2: [Write("y", 1), Read("x")],
    }
    return {pid: straight_line(programs.get(pid, [])) for pid in universe.pids}


def _mp_components(universe: Universe):
    programs = {
        1: [Write("x", 1), Write("y", 1)],
        2: [Read("y"), Read("x")],
    }
    return {pid: straight_line(programs.get(pid, [])) for pid in universe.pids}


def _chaos_universe(n: int) -> Universe:
    return Universe(n=n, variables=("x", "y"), values=(0, 1, 2), default=0)


def _chaos_components(universe: Universe):
    actions = [NULL, Fence()]
    for x in universe.variables:
        actions.append(Read(x))
        actions.extend(Write(x, v) for v in universe.values)
        actions.extend(
            Rmw(x, a, b) for a in universe.values for b in universe.values if a != b
        )
    actions = tuple(actions)

    def component(local):
        return actions

    return {pid: component for pid in universe.pids}


SB = Fixture(
    name="sb",
    description="store buffering litmus test",
    make_universe=_two_vars,
    make_components=_sb_components,
)

MP = Fixture(
    name="mp",
    description="message passing litmus test",
    make_universe=_two_vars,
    make_components=_mp_components,
)

CHAOS = Fixture(
    name="chaos",
    description="every process may read, write, fence or RMW anything at any time",
    make_universe=_chaos_universe,
    make_components=_chaos_components,
)
