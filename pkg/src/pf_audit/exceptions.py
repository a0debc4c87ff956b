"""Domain-specific exceptions for Picard-Fuchs audit workflows.

Every class carries the process exit code the CLI reports for it.
"""

from __future__ import annotations


class PfAuditError(Exception):
    """Base class for all errors raised by pf-audit."""

    exit_code = 1


class ValidationError(PfAuditError, ValueError):
    """Raised when input data or configuration is incomplete or invalid."""

    exit_code = 2


class ParseError(ValidationError):
    """Raised when polynomial or operator text cannot be parsed."""

    def __init__(
        self,
        message: str,
        position: int | None = None,
        line: int | None = None,
        column: int | None = None,
    ) -> None:
        self.message = message
        self.position = position
        self.line = line
        self.column = column
        super().__init__(self._render())

    def _render(self) -> str:
        if self.line is not None:
            return f"{self.message} (line {self.line}, column {self.column})"
        if self.position is not None:
            return f"{self.message} (position {self.position})"
        return self.message

    def at_line(self, line: int, column_offset: int) -> ParseError:
        """Re-anchor a position-level error inside a multi-line file."""
        column = column_offset + (self.position or 0) + 1
        return ParseError(self.message, self.position, line=line, column=column)


class AlgebraError(PfAuditError, ArithmeticError):
    """Raised on exact-arithmetic misuse: zero denominators, shape mismatches."""

    exit_code = 2


class SingularFamilyError(PfAuditError):
    """Raised when the generic fiber of a family is not smooth."""

    exit_code = 3


class ReductionError(PfAuditError, RuntimeError):
    """Raised when a pole-order reduction step breaks its defining identity."""


class OrderBoundExceededError(PfAuditError):
    """Raised when no Gauss-Manin dependency exists up to the order bound."""

    exit_code = 4

    def __init__(self, max_order: int, achieved_rank: int) -> None:
        self.max_order = max_order
        self.achieved_rank = achieved_rank
        super().__init__(
            f"No dependency among derivatives up to order {max_order}; "
            f"achieved rank {achieved_rank}."
        )


class VerificationError(PfAuditError):
    """Raised when a computed certificate or series check fails."""

    exit_code = 5


class AdmissibilityError(PfAuditError):
    """Raised when a numeric request is too close to a branch point or out of range."""

    exit_code = 6


class FitError(PfAuditError):
    """Raised when a least-squares fit is underdetermined or rank deficient."""

    exit_code = 6


class LocalAnalysisError(PfAuditError):
    """Raised when local solutions cannot be built at a singular point."""
