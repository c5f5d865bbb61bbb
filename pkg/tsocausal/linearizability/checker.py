"""
Brute-force linearizability checking for small histories.

The search places operations one at a time, always choosing among those whose
real-time predecessors are already placed, and memoizes (placed set, abstract
state) pairs that lead nowhere. Pending operations may be placed, taking
effect, or left out entirely.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from ..config import get_lin_bound
from ..exceptions import BoundExceededError
from ..runtime.history import History, Operation, precedes
from .specs import SequentialSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinWitness:
    order: Tuple[str, ...]
    dropped: Tuple[str, ...] = ()


def _advance(spec: SequentialSpec, state, op: Operation):
    return spec.step(state, op) if op.complete else spec.step_pending(state, op)


def check_linearizable(h: History, spec: SequentialSpec, bound: Optional[int] = None) -> Optional[LinWitness]:
    """
    A legal sequential order of h extending real-time order, or None.

    Raises:
        BoundExceededError: h has more complete operations than `bound`
    """
    bound = bound if bound is not None else get_lin_bound()
    if len(h.complete) > bound:
        raise BoundExceededError(
            f"history has {len(h.complete)} complete operations, bound is {bound}",
            error_code="lin_bound",
        )

    ops = list(h.operations)
    required = frozenset(op.op_id for op in h.complete)
    preds: Dict[str, FrozenSet[str]] = {
        op.op_id: frozenset(o.op_id for o in h.complete if precedes(o, op)) for op in ops
    }
    dead: Set[Tuple[FrozenSet[str], object]] = set()

    def search(placed: FrozenSet[str], state, order: List[str]) -> Optional[List[str]]:
        if required <= placed:
            return order
        key = (placed, state)
        if key in dead:
            return None
        for op in ops:
            if op.op_id in placed or not preds[op.op_id] <= placed:
                continue
            following = _advance(spec, state, op)
            if following is None:
                continue
            found = search(placed | {op.op_id}, following, order + [op.op_id])
            if found is not None:
                return found
        dead.add(key)
        return None

    order = search(frozenset(), spec.initial(), [])
    if order is None:
        logger.debug(f"no linearization for {len(ops)} operations")
        return None
    dropped = tuple(op.op_id for op in h.pending if op.op_id not in order)
    return LinWitness(tuple(order), dropped)


def is_legal_linearization(h: History, spec: SequentialSpec, witness: LinWitness) -> bool:
    """The witness respects real-time order and replays through the spec."""
    placed = [h.by_id(op_id) for op_id in witness.order]
    if {op.op_id for op in h.complete} - set(witness.order):
        return False
    for a_idx, later in enumerate(placed):
        for earlier in placed[a_idx + 1:]:
            if precedes(earlier, later):
                return False
    state = spec.initial()
    for op in placed:
        state = _advance(spec, state, op)
        if state is None:
            return False
    return True


def check_linearizable_exhaustive(h: History, spec: SequentialSpec) -> Optional[LinWitness]:
    """The unpruned oracle: every subset of pending operations, every permutation."""
    pending = list(h.pending)
    for size in range(len(pending) + 1):
        for chosen in itertools.combinations(pending, size):
            ops = list(h.complete) + list(chosen)
            for perm in itertools.permutations(ops):
                if any(precedes(perm[b], perm[a]) for a in range(len(perm)) for b in range(a + 1, len(perm))):
                    continue
                state = spec.initial()
                for op in perm:
                    state = _advance(spec, state, op)
                    if state is None:
                        break
                else:
                    dropped = tuple(op.op_id for op in pending if op not in chosen)
                    return LinWitness(tuple(op.op_id for op in perm), dropped)
    return None


def minimal_violation(h: History, spec: SequentialSpec, max_size: int = 3) -> Optional[Tuple[str, ...]]:
    """
    The smallest set of complete operations which, together with the
    operations whose values they mention, is not linearizable. None when h
    itself is linearizable; all of h when no small core exists.
    """
    if check_linearizable(h, spec) is not None:
        return None
    complete = list(h.complete)
    for size in range(1, min(max_size, len(complete)) + 1):
        for combo in itertools.combinations(complete, size):
            members = {op.op_id: op for op in combo}
            for op in combo:
                for dep in spec.dependencies(op, h):
                    members.setdefault(dep.op_id, dep)
            sub = h.restricted(members.values())
            if check_linearizable(sub, spec) is None:
                return tuple(op.op_id for op in sub.operations)
    return tuple(op.op_id for op in h.operations)
