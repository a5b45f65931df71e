"""Exception hierarchy shared by the kernel, the checker and the CLI."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Optional, Tuple

if TYPE_CHECKING:  # pragma: no cover
    from core.terms import Term


class TypeErrorKind(str, enum.Enum):
    """Primary failure class of a typing operation."""

    UNBOUND_VARIABLE = "UnboundVariable"
    NOT_A_SORT = "NotASort"
    NOT_A_PRODUCT = "NotAProduct"
    MISMATCH = "Mismatch"
    NO_AXIOM = "NoAxiom"
    NO_RULE = "NoRule"
    CYCLIC_CONTEXT_DEPENDENCY = "CyclicContextDependency"
    CONVERSION_UNDECIDED = "ConversionUndecided"
    DUPLICATE_VARIABLE = "DuplicateVariable"
    NOT_WELL_FORMED = "NotWellFormed"


@dataclass(frozen=True)
class SourceSpan:
    """Location of a piece of surface syntax: 1-based (line, column) pairs."""

    file: str
    start: Tuple[int, int]
    end: Tuple[int, int]

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"SourceSpan start {self.start} is after end {self.end}")

    def render(self) -> str:
        line, column = self.start
        return f"{self.file}:{line}:{column}"


class PtsError(RuntimeError):
    """Base class for every failure raised by the kernel."""


class UnknownSortError(PtsError):
    """Raised when a sort is looked up in a spec that does not declare it."""

    def __init__(self, sort: str, spec_name: str) -> None:
        super().__init__(f"Sort {sort!r} is not declared in spec {spec_name!r}")
        self.sort = sort
        self.spec_name = spec_name


class SpecValidationError(PtsError):
    """Raised when a spec violates functionality or mentions undeclared sorts."""

    def __init__(self, report: Any) -> None:
        violations = "; ".join(v.message for v in report.violations)
        super().__init__(f"Invalid PTS spec {report.spec_name!r}: {violations}")
        self.report = report


class FuelExhausted(PtsError):
    """Raised when reduction runs out of beta-steps; carries the last reduct."""

    def __init__(self, last: "Term", steps: int) -> None:
        super().__init__(f"Reduction fuel exhausted after {steps} beta-steps")
        self.last = last
        self.steps = steps


class ParseError(PtsError):
    """Raised on malformed surface syntax."""

    def __init__(self, message: str, span: Optional[SourceSpan] = None) -> None:
        location = f"{span.render()}: " if span is not None else ""
        super().__init__(f"{location}{message}")
        self.span = span
        self.reason = message


class ContextPreconditionError(PtsError):
    """Raised when a context-algebra operation is called outside its precondition."""


class IncompatibleContextsError(PtsError):
    """Raised when two contexts give different types to the same variable."""

    def __init__(self, variable: str, detail: str) -> None:
        super().__init__(f"Contexts are incompatible on {variable!r}: {detail}")
        self.variable = variable


class InternalInvariantError(PtsError):
    """Raised when a kernel invariant is broken; always a bug, never bad input."""


class PtsTypeError(PtsError):
    """A typing failure: exactly one primary kind, a term path and a detail."""

    def __init__(
        self,
        kind: TypeErrorKind,
        detail: str,
        location: Tuple[str, ...] = (),
        span: Optional[SourceSpan] = None,
    ) -> None:
        where = "/".join(location) if location else "<root>"
        super().__init__(f"[{kind.value}] at {where}: {detail}")
        self.kind = kind
        self.detail = detail
        self.location = tuple(location)
        self.span = span


class DuplicateVariableError(PtsTypeError):
    """Raised when a context would declare the same variable twice."""

    def __init__(self, variable: str, span: Optional[SourceSpan] = None) -> None:
        super().__init__(
            TypeErrorKind.DUPLICATE_VARIABLE,
            f"variable {variable!r} is already declared",
            span=span,
        )
        self.variable = variable


class NotWellFormedError(PtsTypeError):
    """Raised by T-mode checking when the context is not well-formed."""

    def __init__(self, report: Any) -> None:
        super().__init__(
            TypeErrorKind.NOT_WELL_FORMED,
            f"context is not well-formed: declaration #{report.failing_index} "
            f"({report.failing_variable}) fails: {report.reason}",
            ("ctx", str(report.failing_variable)),
        )
        self.report = report


__all__ = [
    "ContextPreconditionError",
    "DuplicateVariableError",
    "FuelExhausted",
    "IncompatibleContextsError",
    "InternalInvariantError",
    "NotWellFormedError",
    "ParseError",
    "PtsError",
    "PtsTypeError",
    "SourceSpan",
    "SpecValidationError",
    "TypeErrorKind",
    "UnknownSortError",
]
