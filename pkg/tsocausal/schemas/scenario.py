from pydantic import BaseModel, Field, constr
from typing import Optional

from ..config import get_completion_bound, get_default_seed, get_lin_bound


class ScenarioConfig(BaseModel):
    """Everything `simulate` needs to produce a reproducible run."""

    fixture: constr(strip_whitespace=True, min_length=1)
    rounds: int = Field(default=20, ge=0)
    seed: int = Field(default_factory=get_default_seed, ge=0)
    n: Optional[int] = Field(default=None, ge=1, description="process count; the fixture's default when omitted")
    move_prob: float = Field(default=0.7, ge=0, le=1)
    prop_prob: float = Field(default=0.4, ge=0, le=1)
    invoke_prob: float = Field(default=0.3, ge=0, le=1)
    write_ratio: float = Field(default=0.5, ge=0, le=1, description="share of writes/updates among invoked operations")
    quiesce: bool = False
    validate_trace: bool = True
    lin_bound: int = Field(default_factory=get_lin_bound, gt=0)
    completion_bound: int = Field(default_factory=get_completion_bound, gt=0)
