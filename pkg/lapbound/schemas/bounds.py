"""
lapbound - Bound Report Schemas

Per-index eigenvalue bounds with slack, cohomology-dimension bounds and the
verdict records of the vanishing criterion and the correction comparison.
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field


class BoundKind(str, Enum):
    """Which eigenvalue bound a report carries."""

    MAIN = "main1"
    SUBCOMPLEX = "main2"


class IndexBound(BaseModel):
    """One row of a per-index bound table."""

    i: int = Field(..., ge=1, description="1-based eigenvalue index")
    lower_bound: float
    actual: float
    slack: float = Field(..., description="actual - lower_bound")


class BoundReport(BaseModel):
    """Eigenvalue lower bounds for L_k together with the computed spectrum."""

    kind: BoundKind
    k: int = Field(..., ge=0)
    n: int = Field(..., ge=0, description="Vertex count of the ambient complex")
    per_index: List[IndexBound] = Field(default_factory=list)
    correction: float = Field(
        0.0, description="Amount subtracted from the spectral term (kn + Delta(k), or (k+2) * defect)"
    )
    delta: Optional[int] = Field(None, description="Delta(k) or the maximal degree defect")
    vacuous: bool = False
    tolerance: float = Field(0.0, ge=0.0, description="Absolute slack tolerance")
    flag_bound: Optional[List[float]] = Field(
        None, description="S_{k+1,i}(L(G)+J) - kn, the bound with the correction dropped"
    )

    @property
    def violations(self) -> List[IndexBound]:
        return [row for row in self.per_index if row.slack < -self.tolerance]

    @property
    def holds(self) -> bool:
        return not self.violations

    @property
    def min_slack(self) -> Optional[float]:
        return min((row.slack for row in self.per_index), default=None)


class CohomologyBound(BaseModel):
    """Upper bound on dim H^k(X; R) compared with the exact Betti number."""

    k: int = Field(..., ge=0)
    threshold: float = Field(..., description="kn + Delta(k)")
    bound: int = Field(..., ge=0)
    betti: int = Field(..., ge=0)
    near_ties: int = Field(
        0, ge=0, description="Counted sums within the numeric cushion of the threshold"
    )

    @property
    def holds(self) -> bool:
        return self.bound >= self.betti


class VanishingVerdict(str, Enum):
    VANISHES = "vanishes"
    INCONCLUSIVE = "inconclusive"
    INAPPLICABLE = "inapplicable"


class SYVerdict(BaseModel):
    """Outcome of the algebraic-connectivity vanishing criterion."""

    k: int = Field(..., ge=1)
    verdict: VanishingVerdict
    reason: Optional[str] = None
    lambda_2: Optional[float] = None
    threshold: Optional[float] = None
    d_k: Optional[int] = Field(None, description="D_k(X, k+1)")
    betti: Optional[int] = Field(None, description="Exact b_k, recorded when the criterion fires")


class RemarkComparison(BaseModel):
    """Delta(k) against the coarser correction (k+2) * max_sigma sum_j |sigma[j]|."""

    k: int = Field(..., ge=0)
    delta: int = Field(..., ge=0)
    max_sigma_total: int = Field(..., ge=0)
    faces_checked: int = Field(
        0, ge=0, description="k-faces on which the degree-gap identity was checked"
    )
    alternative: int = Field(..., ge=0, description="(k+2) * max_sigma_total")
    chained_bounds: List[float] = Field(
        default_factory=list,
        description="Per-index bound obtained through the flag complex of G_X",
    )
    main_bounds: List[float] = Field(default_factory=list)

    @property
    def slack(self) -> int:
        return self.alternative - self.delta

    @property
    def holds(self) -> bool:
        return self.delta <= self.alternative

    @property
    def chained_dominated(self) -> bool:
        """Whether every chained bound is at most the matching main bound."""
        return all(c <= m + 1e-9 * max(1.0, abs(m)) for c, m in zip(self.chained_bounds, self.main_bounds))
