"""
Custom exception handling for lapbound.

Every error carries a machine-readable code and a details mapping so the
command line can map it to a stable exit status.
"""

import logging
from typing import Any, Dict, Optional

logger = logging.getLogger("lapbound.exceptions")


class LapboundError(Exception):
    """
    Base application exception.

    Implements structured error information with logging integration.
    """

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        """
        Initialize application error with context.

        Args:
            message: Human-readable error message
            error_code: Machine-readable error code
            details: Additional error context
        """
        super().__init__(message)
        self.message = message
        self.error_code = error_code or "LAPBOUND_ERROR"
        self.details = details or {}

        logger.debug(
            f"Application error: {self.error_code} - {message}",
            extra={"error_code": self.error_code, "details": self.details},
        )


class ValidationError(LapboundError):
    """Exception for malformed input files and invalid parameters."""

    def __init__(
        self,
        message: str,
        field: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        error_details = details or {}
        if field:
            error_details["field"] = field
        super().__init__(message, "VALIDATION_ERROR", error_details)


class FaceNotFoundError(LapboundError):
    """Exception raised when a simplex is not a face of the complex."""

    def __init__(self, sigma: Any, details: Optional[Dict[str, Any]] = None):
        message = f"simplex {list(sigma)} is not a face of the complex"
        super().__init__(message, "FACE_NOT_FOUND", details)


class VacuousError(LapboundError):
    """Raised when a dimension has no faces, so every bound is vacuous."""

    def __init__(self, k: int, details: Optional[Dict[str, Any]] = None):
        error_details = details or {}
        error_details["k"] = k
        super().__init__(f"vacuous: no faces of dimension {k}", "VACUOUS", error_details)
        self.k = k


class NotASubcomplexError(LapboundError):
    """Raised when the subcomplex hypothesis fails face-by-face."""

    def __init__(self, face: Any, details: Optional[Dict[str, Any]] = None):
        message = f"not a subcomplex: face {list(face)} is missing from the ambient complex"
        super().__init__(message, "NOT_A_SUBCOMPLEX", details)


class CapacityExceededError(LapboundError):
    """Raised when a dense object would exceed a configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(
            f"{what} of size {size} exceeds the configured cap {cap}",
            "CAPACITY_EXCEEDED",
            {"what": what, "size": size, "cap": cap},
        )


class NumericalError(LapboundError):
    """Raised for non-finite input or an eigen-residual above tolerance."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, "NUMERICAL_ERROR", details)


class IdentityViolationError(LapboundError):
    """An exact identity failed; this always indicates an implementation bug."""

    def __init__(self, identity: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(f"identity violated: {identity}", "IDENTITY_VIOLATION", details)


def format_error_message(error: Exception, context: str = "") -> str:
    """
    Format error messages for the command line.

    Args:
        error: The exception to format
        context: Additional context about where the error occurred

    Returns:
        Formatted error message string
    """
    base_message = f"{context} failed" if context else "error"
    code = getattr(error, "error_code", type(error).__name__)
    return base_message + f" [{code}]: {error}"
