"""
lapbound - Verification Schemas

Suite names and the outcome of a randomized property suite.
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field


class SuiteName(str, Enum):
    """Property suites runnable from the command line."""

    HODGE = "hodge"
    LEMMA21 = "lemma21"
    PQ = "pq"
    COMPOUND = "compound"
    MAIN1 = "main1"
    MAIN2 = "main2"
    EQ3 = "eq3"
    ORDER = "order"


class SuiteFailure(BaseModel):
    """A failed case with the input needed to reproduce it."""

    trial: int
    seed: int
    message: str
    k: Optional[int] = None
    counterexample: Optional[str] = Field(
        None, description="Complex in the input file format, or a matrix as a JSON array"
    )
    subcomplex: Optional[str] = None


class SuiteReport(BaseModel):
    suite: SuiteName
    trials: int = Field(..., ge=1)
    seed: int
    max_vertices: int
    checks: int = 0
    failures: List[SuiteFailure] = Field(default_factory=list)
    wall_clock_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures
