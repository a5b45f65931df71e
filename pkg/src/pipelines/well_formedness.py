"""Well-formedness of contexts and the typed half of the context algebra.

A context is well-formed when every declared type has a sort over the
declarations before it. On a well-formed prefix T and T′ derive the same
judgements, so each prefix is checked with the T′ engine.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from core.contexts import Context, merge_declarations, reorder_declarations
from core.errors import NotWellFormedError, PtsTypeError, TypeErrorKind
from core.pts_spec import PtsSpec
from core.reduction import Fuel
from core.terms import Term
from pipelines.typing_engine import infer_sort_tprime

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WellFormednessReport:
    """Result of wf_check; ``failing_index`` is the 0-based position of the first bad declaration."""

    well_formed: bool
    failing_index: Optional[int] = None
    failing_variable: Optional[str] = None
    reason: Optional[str] = None
    error_kind: Optional[TypeErrorKind] = None
    sorts: Tuple[str, ...] = ()

    def describe(self) -> str:
        if self.well_formed:
            return "well-formed"
        return (
            f"not well-formed: declaration #{self.failing_index} ({self.failing_variable}) "
            f"fails with {self.error_kind.value}: {self.reason}"
        )


def wf_check(spec: PtsSpec, ctx: Context, fuel: Optional[Fuel] = None) -> WellFormednessReport:
    """Check each prefix ``x1:A1, ..., xi:Ai ⊢ A(i+1) : s`` and report the first failure."""
    sorts = []
    for index, decl in enumerate(ctx):
        try:
            sort, _ = infer_sort_tprime(spec, ctx.prefix(index), decl.type_, fuel)
        except PtsTypeError as exc:
            logger.debug(f"Context fails at #{index} ({decl.var}): {exc}")
            return WellFormednessReport(
                False, index, decl.var, exc.detail, exc.kind, tuple(sorts)
            )
        if decl.sort_class is not None and decl.sort_class != sort:
            return WellFormednessReport(
                False,
                index,
                decl.var,
                f"{decl.var} is tagged with sort {decl.sort_class}, but its type has sort {sort}",
                TypeErrorKind.MISMATCH,
                tuple(sorts),
            )
        sorts.append(sort)
    return WellFormednessReport(True, sorts=tuple(sorts))


def ensure_well_formed(spec: PtsSpec, ctx: Context, fuel: Optional[Fuel] = None) -> WellFormednessReport:
    report = wf_check(spec, ctx, fuel)
    if not report.well_formed:
        raise NotWellFormedError(report)
    return report


def merge(
    spec: PtsSpec,
    g1: Context,
    g2: Context,
    fuel: Optional[Fuel] = None,
    assume_well_formed: bool = False,
) -> Context:
    """Merge two well-formed compatible contexts.

    ``g2``'s declarations are folded left to right onto ``g1``; those already
    present are skipped. The result contains both inputs and is contained in
    their concatenation.
    """
    if not assume_well_formed:
        ensure_well_formed(spec, g1, fuel)
        ensure_well_formed(spec, g2, fuel)
    merged = merge_declarations(g1, g2)
    logger.debug(f"Merged contexts of sizes {len(g1)} and {len(g2)} into {len(merged)}")
    return merged


def reorder(
    spec: PtsSpec,
    gprime: Context,
    x: str,
    c: Term,
    fuel: Optional[Fuel] = None,
    assume_well_formed: bool = False,
) -> Context:
    """A well-formed ``G''`` such that ``G'', x:c`` is a context containing ``gprime``."""
    if not assume_well_formed:
        ensure_well_formed(spec, gprime, fuel)
    return reorder_declarations(gprime, x, c)


__all__ = [
    "WellFormednessReport",
    "ensure_well_formed",
    "merge",
    "reorder",
    "wf_check",
]
