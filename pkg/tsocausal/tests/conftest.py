"""
Pytest configuration and shared fixtures for all tests
"""

import os
import sys
from unittest.mock import patch

import pytest

# Add the repository root to the path so `tsocausal` imports as a package
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from tsocausal.core.types import OpCall, Read, Return, Rmw, Write  # noqa: E402
from tsocausal.fixtures import get_fixture  # noqa: E402
from tsocausal.runtime.executor import step  # noqa: E402
from tsocausal.runtime.protocol import RoundPlan  # noqa: E402
from tsocausal.runtime.run import JointAction, Run, advance  # noqa: E402


@pytest.fixture(autouse=True)
def setup_test_environment():
    """Run every test without TSOCAUSAL_* overrides from the caller's shell"""
    cleared = {k: v for k, v in os.environ.items() if not k.startswith("TSOCAUSAL_")}
    with patch.dict(os.environ, cleared, clear=True):
        yield


@pytest.fixture
def build_run():
    """Apply explicit joint actions strictly, starting from the initial state"""
    def build(protocol, joints, seed=None):
        r = Run.empty(protocol.universe, protocol.name, seed)
        for joint in joints:
            r = advance(r, joint)
        return r
    return build


@pytest.fixture
def drive():
    """Run round plans through the lenient executor"""
    def run(protocol, plans, seed=None):
        r = Run.empty(protocol.universe, protocol.name, seed)
        for plan in plans:
            r = step(r, plan, protocol)
        return r
    return run


@pytest.fixture
def sb_protocol():
    return get_fixture("sb").protocol(2)


@pytest.fixture
def chaos_protocol():
    return get_fixture("chaos").protocol(2)


@pytest.fixture
def sb_run(sb_protocol, build_run):
    """
    Store buffering where both reads return 0:
        round 1  p1: W(x,1)  p2: W(y,1)
        round 2  p1: R(y)=0  p2: R(x)=0
        round 3  d1, d2 propagate
    """
    return build_run(sb_protocol, [
        JointAction({1: Write("x", 1), 2: Write("y", 1)}),
        JointAction({1: Read("y"), 2: Read("x")}),
        JointAction(props=frozenset({1, 2})),
    ])


@pytest.fixture
def unfenced_violation_run(drive):
    """
    register-unfenced: p1's Write(1) returns with 1 still buffered, then p2
    reads 0 after it. Write occupies nodes p1@0..p1@3, Read p2@4..p2@7.
    """
    protocol = get_fixture("register-unfenced").protocol(2)
    return drive(protocol, [
        RoundPlan(invokes={1: OpCall("Write", 1)}),
        RoundPlan(moves={1: 0}),
        RoundPlan(moves={1: 0}),
        RoundPlan(),
        RoundPlan(invokes={2: OpCall("Read")}),
        RoundPlan(moves={2: 0}),
        RoundPlan(moves={2: 0}),
    ])


@pytest.fixture
def fenced_register_run(drive):
    """
    register-fenced: p1 writes 1 (W, prop, F, return), one idle round, then
    p2 reads 1. Write spans p1@0..p1@5, Read p2@6..p2@9.
    """
    protocol = get_fixture("register-fenced").protocol(2)
    return drive(protocol, [
        RoundPlan(invokes={1: OpCall("Write", 1)}),
        RoundPlan(moves={1: 0}),
        RoundPlan(props=frozenset({1})),
        RoundPlan(moves={1: 0}),
        RoundPlan(moves={1: 0}),
        RoundPlan(),
        RoundPlan(invokes={2: OpCall("Read")}),
        RoundPlan(moves={2: 0}),
        RoundPlan(moves={2: 0}),
    ])


@pytest.fixture
def concurrent_register_run(drive):
    """register-unfenced: a Write(1) at p1 and a Read at p2 sharing rounds 1..3."""
    protocol = get_fixture("register-unfenced").protocol(2)
    return drive(protocol, [
        RoundPlan(invokes={1: OpCall("Write", 1), 2: OpCall("Read")}),
        RoundPlan(moves={1: 0, 2: 0}),
        RoundPlan(moves={1: 0, 2: 0}),
    ])


@pytest.fixture
def feedback_run(chaos_protocol, build_run):
    """
    An operation of p1 whose write reaches p2's RMW, which p1 then reads:
    p1@1 -> d1@2 -> p2@3 -> p1@4.
    """
    op = OpCall("Op")
    return build_run(chaos_protocol, [
        JointAction(invokes={1: op}),
        JointAction({1: Write("x", 1)}),
        JointAction(props=frozenset({1})),
        JointAction({2: Rmw("x", 1, 2)}),
        JointAction({1: Read("x")}),
        JointAction({1: Return(op, 2)}),
    ])
