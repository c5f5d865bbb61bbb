# Schemas package

from .reports import (
    ClaimsReport,
    DtfReport,
    EquivalenceReport,
    LinearizabilityReport,
    Report,
    ScenarioReport,
    TheoremReport,
    ValidationReport,
    Violation,
)
from .scenario import ScenarioConfig
from .trace import (
    TRACE_VERSION,
    ActionModel,
    BufferEntryModel,
    EventModel,
    MemoryCellModel,
    OpCallModel,
    RoundLine,
    TagModel,
    TraceFile,
    TraceFooter,
    TraceHeader,
)
