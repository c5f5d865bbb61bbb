"""
Named protocols the tools can simulate and analyse.
"""

from typing import Dict, List

from ..exceptions import NotFoundError
from ..runtime.protocol import Protocol
from ..runtime.run import Run
from .base import Fixture, RegisterWorkload, SnapshotWorkload, operation_component
from .litmus import CHAOS, MP, SB
from .register import REGISTER_ALTERNATING, REGISTER_FENCED, REGISTER_UNFENCED
from .snapshot import SNAPSHOT_FENCED, SNAPSHOT_RMW, SNAPSHOT_UNFENCED, component_var

FIXTURES: Dict[str, Fixture] = {
    f.name: f for f in (
        SB, MP, CHAOS,
        REGISTER_FENCED, REGISTER_UNFENCED, REGISTER_ALTERNATING,
        SNAPSHOT_FENCED, SNAPSHOT_RMW, SNAPSHOT_UNFENCED,
    )
}


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise NotFoundError(
            f"unknown fixture {name!r}; choose one of {', '.join(sorted(FIXTURES))}",
            error_code="unknown_fixture",
        )


def fixture_names() -> List[str]:
    return sorted(FIXTURES)


def protocol_for_run(r: Run) -> Protocol:
    """The fixture protocol a run was produced by, sized to the run's universe."""
    return get_fixture(r.protocol_name).protocol(r.universe.n)


__all__ = [
    'Fixture', 'RegisterWorkload', 'SnapshotWorkload', 'operation_component', 'component_var',
    'CHAOS', 'MP', 'SB', 'REGISTER_ALTERNATING', 'REGISTER_FENCED', 'REGISTER_UNFENCED',
    'SNAPSHOT_FENCED', 'SNAPSHOT_RMW', 'SNAPSHOT_UNFENCED',
    'FIXTURES', 'fixture_names', 'get_fixture', 'protocol_for_run',
]
