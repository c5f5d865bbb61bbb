from pydantic import BaseModel, Field
from typing import Dict, List, Optional


class Violation(BaseModel):
    kind: str
    message: str
    round: Optional[int] = None
    agent: Optional[str] = None


class Report(BaseModel):
    """Base for every checker result: a list of violations, empty when clean."""

    violations: List[Violation] = []

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, message: str, round: Optional[int] = None, agent: Optional[str] = None):
        self.violations.append(Violation(kind=kind, message=message, round=round, agent=agent))

    def kinds(self) -> List[str]:
        return sorted({v.kind for v in self.violations})


class ValidationReport(Report):
    horizon: int = 0
    protocol: str = ""


class EquivalenceReport(Report):
    """Per-process comparison of the local states two runs pass through."""

    first_difference: Dict[int, str] = {}

    @property
    def equivalent(self) -> bool:
        return self.ok


class DtfReport(Report):
    delta: int = 0
    thresholds: Dict[str, int] = {}
    equivalent: bool = True


class ClaimsReport(Report):
    checked_edges: int = 0
    checked_pairs: int = 0
    reclassified_reads: int = 0


class TheoremReport(Report):
    theorem: str
    checked: int = 0


class LinearizabilityReport(BaseModel):
    linearizable: bool
    order: List[str] = []
    dropped: List[str] = []
    minimal_violation: List[str] = []
    operations: int = 0


class ScenarioReport(BaseModel):
    scenario: str
    operation: str
    process: int
    follow_up: Optional[str] = None
    follow_up_process: Optional[int] = None
    follow_up_sync: bool = False
    sync_events: List[str] = []
    indistinguishable: bool = False
    ob_chain: bool = False
    lemma_cases: List[int] = []
    delta: int = 0
    horizon: int = 0
    notes: List[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.follow_up_sync and self.indistinguishable
