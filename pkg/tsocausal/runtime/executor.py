"""
Execution of protocols under schedules.

Plans are resolved leniently: an action that is disabled or that would clash
with an earlier component of the same round degrades to null. The resolved
joint action is then applied strictly, so every run produced here is valid.
"""

from __future__ import annotations

import itertools
import logging
import random
from typing import Dict, Iterator, List, Optional, Protocol as TypingProtocol

from ..core.machine import apply, clashes, consumes_write_counter, enabled
from ..core.types import Action, Agent, Null, OpCall, ProcId, Prop
from ..exceptions import ScheduleInvalidError, TsoCausalException
from ..utils.logging_utils import log_analysis_action
from .protocol import Choice, Protocol, RoundPlan
from .run import GlobalState, JointAction, Run, advance, joint_apply

logger = logging.getLogger(__name__)


class Scheduler(TypingProtocol):
    def plan_round(self, state: GlobalState, t: int) -> RoundPlan:
        ...


class Workload(TypingProtocol):
    def next_call(self, rng: random.Random, pid: ProcId, state: GlobalState) -> Optional[OpCall]:
        ...


def _choose(protocol: Protocol, pid: ProcId, state: GlobalState, choice: Choice) -> Action:
    candidates = protocol.candidates(pid, state.locals[pid])
    if isinstance(choice, int):
        if not 0 <= choice < len(candidates):
            raise ScheduleInvalidError(
                f"process {pid} has {len(candidates)} candidates, index {choice} chosen",
                error_code="bad_choice",
            )
        return candidates[choice]
    if choice not in candidates:
        raise ScheduleInvalidError(
            f"{choice} is not among the candidates of process {pid}: "
            f"{', '.join(str(c) for c in candidates)}",
            error_code="bad_choice",
        )
    return choice


def resolve_plan(state: GlobalState, plan: RoundPlan, protocol: Protocol) -> JointAction:
    """Turn a plan into the joint action that actually runs in `state`."""
    tso = state.tso
    counters = dict(state.write_counters)
    events = []
    moves: Dict[ProcId, Action] = {}
    props = set()

    def attempt(agent: Agent, action: Action) -> bool:
        nonlocal tso
        if not enabled(tso, agent, action):
            logger.debug(f"{agent} blocked on {action}")
            return False
        next_tso, event = apply(tso, agent, action, counters[agent.pid] + 1, protocol.universe.values)
        if any(clashes(other, event) for other in events):
            logger.debug(f"{agent} dropped {action}: clashes within the round")
            return False
        tso = next_tso
        if consumes_write_counter(event):
            counters[agent.pid] += 1
        events.append(event)
        return True

    for pid in sorted(plan.moves):
        action = _choose(protocol, pid, state, plan.moves[pid])
        if not isinstance(action, Null) and attempt(Agent.process(pid), action):
            moves[pid] = action

    for pid in sorted(plan.props):
        if attempt(Agent.dispatcher(pid), Prop()):
            props.add(pid)

    invokes = {pid: op for pid, op in plan.invokes.items() if state.pending_ops.get(pid) is None}
    return JointAction(moves, frozenset(props), invokes)


def step(r: Run, plan: RoundPlan, protocol: Protocol) -> Run:
    return advance(r, resolve_plan(r.final, plan, protocol))


def execute(protocol: Protocol, scheduler: Scheduler, horizon: int, seed: Optional[int] = None) -> Run:
    """
    Run `protocol` for `horizon` rounds.

    The rounds of the returned run record the realized schedule, so
    `schedule_of(run)` replays it exactly.
    """
    if seed is None:
        seed = getattr(scheduler, "seed", None)
    r = Run.empty(protocol.universe, protocol.name, seed)
    for t in range(horizon):
        r = step(r, scheduler.plan_round(r.final, t), protocol)
    log_analysis_action(logger, r.label(), "execute", {"seed": seed})
    return r


class RandomScheduler:
    """
    Seeded adversarial scheduler.

    Each round every process moves with probability `move_prob` (choosing a
    candidate uniformly), every dispatcher with a nonempty buffer propagates with
    probability `prop_prob`, and idle processes receive an invoke from the
    workload with probability `invoke_prob`.
    """

    def __init__(
        self,
        protocol: Protocol,
        seed: int = 0,
        workload: Optional[Workload] = None,
        move_prob: float = 0.7,
        prop_prob: float = 0.4,
        invoke_prob: float = 0.3,
    ):
        self.protocol = protocol
        self.seed = seed
        self.workload = workload
        self.move_prob = move_prob
        self.prop_prob = prop_prob
        self.invoke_prob = invoke_prob
        self.rng = random.Random(seed)

    def plan_round(self, state: GlobalState, t: int) -> RoundPlan:
        moves = {}
        for pid in self.protocol.universe.pids:
            if self.rng.random() < self.move_prob:
                candidates = self.protocol.candidates(pid, state.locals[pid])
                moves[pid] = self.rng.randrange(len(candidates))

        props = frozenset(
            pid for pid in self.protocol.universe.pids
            if state.tso.buffer(pid) and self.rng.random() < self.prop_prob
        )

        invokes = {}
        if self.workload is not None:
            for pid in self.protocol.universe.pids:
                if state.pending_ops[pid] is None and self.rng.random() < self.invoke_prob:
                    call = self.workload.next_call(self.rng, pid, state)
                    if call is not None:
                        invokes[pid] = call

        return RoundPlan(moves, props, invokes)


def _joint_options(protocol: Protocol, state: GlobalState) -> Iterator[JointAction]:
    per_process: List[List[Action]] = []
    pids = list(protocol.universe.pids)
    for pid in pids:
        options = [a for a in protocol.candidates(pid, state.locals[pid]) if not isinstance(a, Null)]
        per_process.append([None] + options)
    prop_options = [[False, True] if state.tso.buffer(pid) else [False] for pid in pids]

    for moves in itertools.product(*per_process):
        for props in itertools.product(*prop_options):
            yield JointAction(
                {pid: a for pid, a in zip(pids, moves) if a is not None},
                frozenset(pid for pid, p in zip(pids, props) if p),
            )


def enumerate_runs(protocol: Protocol, horizon: int) -> Iterator[Run]:
    """
    Every run of `protocol` up to `horizon` without invokes, each joint action
    taken only when it applies strictly. Exponential; meant for tiny systems.
    """
    def extend(r: Run) -> Iterator[Run]:
        if r.horizon == horizon:
            yield r
            return
        for joint in _joint_options(protocol, r.final):
            try:
                joint_apply(r.final, joint, protocol.universe)
            except TsoCausalException:
                continue
            yield from extend(advance(r, joint))

    yield from extend(Run.empty(protocol.universe, protocol.name))
