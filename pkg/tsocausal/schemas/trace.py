from pydantic import BaseModel, Field
from typing import Any, Dict, List, Literal, Optional

TRACE_VERSION = 1


class OpCallModel(BaseModel):
    name: str
    arg: Any = None


class TagModel(BaseModel):
    writer: int
    seq: int


class ActionModel(BaseModel):
    kind: Literal["R", "W", "F", "RMW", "internal", "return"]
    var: Optional[str] = None
    value: Any = None
    expected: Any = None
    label: Optional[str] = None
    op: Optional[OpCallModel] = None
    result: Any = None


class EventModel(BaseModel):
    agent: str = Field(..., pattern=r"^[pd][0-9]+$")
    kind: str
    var: Optional[str] = None
    value: Any = None
    expected: Any = None
    tag: Optional[TagModel] = None
    read_tag: Optional[TagModel] = None


class TraceHeader(BaseModel):
    type: Literal["header"] = "header"
    version: int = TRACE_VERSION
    fixture: str
    n: int = Field(..., ge=1)
    variables: List[str]
    values: List[Any]
    default: Any = None
    horizon: int = Field(..., ge=0)
    seed: Optional[int] = None


class RoundLine(BaseModel):
    type: Literal["round"] = "round"
    round: int = Field(..., ge=1)
    actions: Dict[str, ActionModel] = {}
    props: List[int] = []
    invokes: Dict[str, OpCallModel] = {}
    events: List[EventModel] = []


class MemoryCellModel(BaseModel):
    value: Any = None
    tag: TagModel


class BufferEntryModel(BaseModel):
    var: str
    value: Any = None
    tag: TagModel


class TraceFooter(BaseModel):
    type: Literal["footer"] = "footer"
    memory: Dict[str, MemoryCellModel]
    buffers: Dict[str, List[BufferEntryModel]]


class TraceFile(BaseModel):
    header: TraceHeader
    rounds: List[RoundLine] = []
    footer: TraceFooter
