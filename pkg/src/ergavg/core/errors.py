"""Exception hierarchy and error context tracking for ergavg."""

from __future__ import annotations

import traceback
from contextlib import contextmanager
from datetime import datetime
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional

import structlog
from pydantic import BaseModel, Field

logger = structlog.get_logger(__name__)


class ErgavgError(Exception):
    """Base class for all ergavg failures."""


class DomainError(ErgavgError, ValueError):
    """An argument lies outside the domain of an operation."""


class AliasingError(DomainError):
    """A frequency grid is too small for the support it must represent."""


class CutoffScaleError(DomainError):
    """A cutoff scale exceeds 1/2 and would wrap around the torus."""


class CostGuardError(ErgavgError):
    """An input is too large for an exact but expensive computation."""


class ConvergenceError(ErgavgError, ArithmeticError):
    """A quadrature did not reach its tolerance within the panel budget."""


class RefinementError(ErgavgError):
    """A grid or table failed its refinement comparison."""


class StorageError(ErgavgError):
    """The result store could not be read or written."""


class ErrorSeverity(Enum):
    """Error severity levels."""

    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class ErrorCategory(Enum):
    """Error categories for classification."""

    SYSTEM = "system"
    VALIDATION = "validation"
    NUMERICAL = "numerical"
    CONVERGENCE = "convergence"
    RESOURCE = "resource"
    STORAGE = "storage"


class ErrorContext(BaseModel):
    """Context information for errors."""

    error_id: str = Field(
        default_factory=lambda: f"err-{datetime.now().strftime('%Y%m%d-%H%M%S-%f')}"
    )
    timestamp: str = Field(default_factory=lambda: datetime.now().isoformat())
    severity: ErrorSeverity
    category: ErrorCategory
    component: str
    operation: str
    error_type: str
    message: str
    details: Dict[str, Any] = Field(default_factory=dict)
    stack_trace: Optional[str] = None


def classify_severity(error: BaseException) -> ErrorSeverity:
    """Classify error severity."""
    if isinstance(error, (MemoryError, KeyboardInterrupt, SystemExit)):
        return ErrorSeverity.CRITICAL
    if isinstance(error, (ConvergenceError, RefinementError, StorageError, OSError)):
        return ErrorSeverity.HIGH
    if isinstance(error, (CostGuardError, DomainError)):
        return ErrorSeverity.MEDIUM
    return ErrorSeverity.LOW


def classify_category(error: BaseException) -> ErrorCategory:
    """Classify an error into a category."""
    if isinstance(error, ConvergenceError):
        return ErrorCategory.CONVERGENCE
    if isinstance(error, (RefinementError, ArithmeticError)):
        return ErrorCategory.NUMERICAL
    if isinstance(error, CostGuardError) or isinstance(error, MemoryError):
        return ErrorCategory.RESOURCE
    if isinstance(error, StorageError):
        return ErrorCategory.STORAGE
    if isinstance(error, ValueError):
        return ErrorCategory.VALIDATION
    return ErrorCategory.SYSTEM


def describe_error(
    error: BaseException,
    component: str,
    operation: str,
    details: Optional[Dict[str, Any]] = None,
) -> ErrorContext:
    """Build an ErrorContext for an exception.

    Args:
        error: The exception being described
        component: Component in which it was raised
        operation: Operation that was running
        details: Extra key/value context

    Returns:
        The populated error context

    """
    return ErrorContext(
        severity=classify_severity(error),
        category=classify_category(error),
        component=component,
        operation=operation,
        error_type=type(error).__name__,
        message=str(error),
        details=details or {},
        stack_trace="".join(
            traceback.format_exception(type(error), error, error.__traceback__)
        ),
    )


class ErrorLog:
    """Collects error contexts seen during a run."""

    def __init__(self) -> None:
        self.errors: List[ErrorContext] = []

    def record(
        self,
        error: BaseException,
        component: str,
        operation: str,
        details: Optional[Dict[str, Any]] = None,
    ) -> ErrorContext:
        """Describe, log and keep an error."""
        context = describe_error(error, component, operation, details)
        self.errors.append(context)
        logger.error(
            "operation_failed",
            component=component,
            operation=operation,
            error_type=context.error_type,
            severity=context.severity.value,
            category=context.category.value,
            message=context.message,
            **context.details,
        )
        return context

    def summary(self) -> Dict[str, Any]:
        """Count recorded errors by severity and category."""
        by_severity = {s.value: 0 for s in ErrorSeverity}
        by_category = {c.value: 0 for c in ErrorCategory}
        for context in self.errors:
            by_severity[context.severity.value] += 1
            by_category[context.category.value] += 1
        return {
            "total_errors": len(self.errors),
            "by_severity": by_severity,
            "by_category": by_category,
        }


@contextmanager
def error_handler(
    component: str,
    operation: str,
    context: Optional[Dict[str, Any]] = None,
    error_log: Optional[ErrorLog] = None,
) -> Iterator[ErrorLog]:
    """Context manager that records a failure and re-raises it."""
    log = error_log if error_log is not None else ErrorLog()
    try:
        yield log
    except Exception as e:
        log.record(e, component, operation, context)
        raise
