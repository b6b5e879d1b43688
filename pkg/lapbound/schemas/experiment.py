"""
lapbound - Experiment Schemas

Configuration, per-trial rows and the aggregate report of the random
neighborhood-complex experiments.
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

MAX_SEED = 2**64 - 1


class ExperimentMode(str, Enum):
    """Experiment mode enumeration."""

    EXPECTATION_CHECK = "expectation-check"
    ORDER_CHECK = "order-check"
    MAIN3 = "main3"
    CONJECTURE1_EVIDENCE = "conjecture1-evidence"
    CONJECTURE2_EVIDENCE = "conjecture2-evidence"


class GnpConfig(BaseModel):
    """G(n, p) experiment configuration with mode-dependent validation."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2, description="Vertex count")
    p: float = Field(..., gt=0.0, lt=1.0, description="Edge probability")
    seed: int = Field(default=0, ge=0, le=MAX_SEED, description="64-bit master seed")
    trials: int = Field(default=1, ge=1)
    k: int = Field(default=1, ge=0, description="Target dimension")
    s: int = Field(default=0, ge=0, description="Gap parameter")
    mode: ExperimentMode = ExperimentMode.ORDER_CHECK
    face_budget: Optional[int] = Field(
        None, ge=1, description="Cap on materialized faces per trial (default FACE_BUDGET)"
    )

    @model_validator(mode="after")
    def validate_mode_parameters(self):
        """Check the dimension constraints each mode relies on."""
        if self.mode is ExperimentMode.EXPECTATION_CHECK and self.k > self.n - 1:
            raise ValueError("expectation-check needs k <= n - 1")
        if self.mode is ExperimentMode.ORDER_CHECK and self.k + 2 > self.n:
            raise ValueError("order-check needs k + 2 <= n")
        if self.mode in (ExperimentMode.MAIN3, ExperimentMode.CONJECTURE1_EVIDENCE):
            if not self.k >= self.s >= 1:
                raise ValueError(f"{self.mode.value} needs k >= s >= 1")
        if self.mode is ExperimentMode.CONJECTURE2_EVIDENCE and self.s != 0:
            raise ValueError("conjecture2-evidence is the s = 0 case")
        return self

    @property
    def betti_top(self) -> Optional[int]:
        """Largest j with b_j recorded, or None when the mode records no Betti numbers."""
        if self.mode in (
            ExperimentMode.MAIN3,
            ExperimentMode.CONJECTURE1_EVIDENCE,
            ExperimentMode.CONJECTURE2_EVIDENCE,
        ):
            return self.k - self.s + 1
        return None


class TrialResult(BaseModel):
    """One sampled neighborhood complex. Fields a mode does not compute stay None."""

    trial: int = Field(..., ge=0)
    seed: int = Field(..., ge=0, le=MAX_SEED)
    n: int
    p: float
    k: int
    s: int
    edges: int = Field(0, ge=0)
    missing_counts: List[int] = Field(
        default_factory=list, description="|X(j) missing| for j = 0..k+1"
    )
    betti: List[int] = Field(default_factory=list)
    delta_k: Optional[int] = Field(None, ge=0)
    graph_complete: Optional[bool] = None
    order_ok: Optional[bool] = None
    delta_chain_ok: Optional[bool] = None
    skipped: bool = False
    skip_reason: Optional[str] = None

    @property
    def missing_k(self) -> Optional[int]:
        return self.missing_counts[self.k] if len(self.missing_counts) > self.k else None

    @property
    def missing_k1(self) -> Optional[int]:
        return self.missing_counts[self.k + 1] if len(self.missing_counts) > self.k + 1 else None


class ExperimentSummary(BaseModel):
    """Aggregates recomputable from the per-trial rows."""

    config: GnpConfig
    trials_run: int = 0
    trials_skipped: int = 0
    aggregates: Dict[str, Any] = Field(default_factory=dict)
    conventions: Dict[str, Any] = Field(default_factory=dict)
    scope_note: str = ""
    wall_clock_seconds: float = 0.0


class ExperimentReport(BaseModel):
    """Per-trial rows plus the summary sidecar."""

    config: GnpConfig
    trials: List[TrialResult] = Field(default_factory=list)
    summary: ExperimentSummary

    @property
    def deterministic_failures(self) -> List[int]:
        """Trials where the per-sample counting inequality failed."""
        return [t.trial for t in self.trials if t.order_ok is False]
