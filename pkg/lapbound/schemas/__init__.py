"""Pydantic schemas for files and reports."""

from lapbound.schemas.bounds import (
    BoundKind,
    BoundReport,
    CohomologyBound,
    IndexBound,
    RemarkComparison,
    SYVerdict,
    VanishingVerdict,
)
from lapbound.schemas.complex import ComplexFile
from lapbound.schemas.experiment import (
    ExperimentMode,
    ExperimentReport,
    ExperimentSummary,
    GnpConfig,
    TrialResult,
)
from lapbound.schemas.verification import SuiteFailure, SuiteName, SuiteReport

__all__ = [
    "BoundKind",
    "BoundReport",
    "CohomologyBound",
    "ComplexFile",
    "ExperimentMode",
    "ExperimentReport",
    "ExperimentSummary",
    "GnpConfig",
    "IndexBound",
    "RemarkComparison",
    "SYVerdict",
    "SuiteFailure",
    "SuiteName",
    "SuiteReport",
    "TrialResult",
    "VanishingVerdict",
]
