"""Contexts: ordered declarations with set-like inclusion and compatibility.

This module holds the structural part of the context algebra. Operations that
need typing (well-formedness, checked merging) live in
``pipelines.well_formedness``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from core.errors import (
    ContextPreconditionError,
    DuplicateVariableError,
    IncompatibleContextsError,
    PtsTypeError,
    TypeErrorKind,
)
from core.terms import Term, alpha_eq, free_vars

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Declaration:
    var: str
    type_: Term
    # Optional V_s tag, as in ``x@* : nat``; never part of inclusion checks.
    sort_class: Optional[str] = None

    def same_as(self, other: "Declaration") -> bool:
        return self.var == other.var and alpha_eq(self.type_, other.type_)


@dataclass(frozen=True)
class Context:
    decls: Tuple[Declaration, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "decls", tuple(self.decls))
        seen = set()
        for decl in self.decls:
            if decl.var in seen:
                raise DuplicateVariableError(decl.var)
            seen.add(decl.var)

    @classmethod
    def of(cls, *pairs: Tuple[str, Term]) -> "Context":
        return cls(tuple(Declaration(name, type_) for name, type_ in pairs))

    def __len__(self) -> int:
        return len(self.decls)

    def __iter__(self) -> Iterator[Declaration]:
        return iter(self.decls)

    def names(self) -> Tuple[str, ...]:
        return tuple(decl.var for decl in self.decls)

    def declaration(self, x: str) -> Optional[Declaration]:
        for decl in self.decls:
            if decl.var == x:
                return decl
        return None

    def index(self, x: str) -> int:
        for i, decl in enumerate(self.decls):
            if decl.var == x:
                return i
        raise KeyError(x)

    def prefix(self, length: int) -> "Context":
        return Context(self.decls[:length])

    def free_vars(self) -> FrozenSet[str]:
        """Free variables of all declared types."""
        result: FrozenSet[str] = frozenset()
        for decl in self.decls:
            result |= free_vars(decl.type_)
        return result

    def occurring_names(self) -> FrozenSet[str]:
        """Declared names together with names occurring free in declared types."""
        return frozenset(self.names()) | self.free_vars()

    def with_declaration(self, decl: Declaration) -> "Context":
        return Context(self.decls + (decl,))


EMPTY_CONTEXT = Context()


def lookup(ctx: Context, x: str) -> Optional[Term]:
    """The type declared for ``x`` in ``ctx``, or None."""
    decl = ctx.declaration(x)
    return decl.type_ if decl is not None else None


def extend(ctx: Context, x: str, a: Term, sort_class: Optional[str] = None) -> Context:
    """``ctx, x:a``; the caller must freshen ``x`` first."""
    if ctx.declaration(x) is not None:
        raise DuplicateVariableError(x)
    return ctx.with_declaration(Declaration(x, a, sort_class))


def contains_declaration(ctx: Context, decl: Declaration) -> bool:
    found = ctx.declaration(decl.var)
    return found is not None and alpha_eq(found.type_, decl.type_)


def is_subset(g1: Context, g2: Context) -> bool:
    """Every ``x:A`` of ``g1`` is also in ``g2`` (order ignored, types up to alpha)."""
    return all(contains_declaration(g2, decl) for decl in g1)


def compatible(g1: Context, g2: Context) -> bool:
    """Shared variables carry alpha-equivalent types."""
    return _first_incompatibility(g1, g2) is None


def _first_incompatibility(g1: Context, g2: Context) -> Optional[str]:
    for decl in g1:
        other = g2.declaration(decl.var)
        if other is not None and not alpha_eq(other.type_, decl.type_):
            return decl.var
    return None


def concat(g1: Context, g2: Context) -> Context:
    return Context(g1.decls + g2.decls)


def strengthen_context(g1: Context, x: str, g2: Context) -> Context:
    """Drop ``x`` from ``g1, x:A, g2``; requires ``x`` not free in any type of ``g2``."""
    for decl in g2:
        if x in free_vars(decl.type_):
            raise ContextPreconditionError(
                f"Cannot strengthen away {x!r}: it occurs in the type of {decl.var!r}"
            )
    return concat(g1, g2)


def merge_declarations(g1: Context, g2: Context) -> Context:
    """Fold ``g2``'s declarations onto ``g1``, appending those not already present.

    Structural half of merging: no well-formedness is checked here.
    """
    incompatible = _first_incompatibility(g1, g2)
    if incompatible is not None:
        raise IncompatibleContextsError(
            incompatible, "the same variable is declared with different types"
        )
    merged = g1
    for decl in g2:
        if merged.declaration(decl.var) is None:
            merged = merged.with_declaration(decl)
    return merged


def reorder_declarations(gprime: Context, x: str, c: Term) -> Context:
    """Structural reordering: drop ``x:c`` from ``gprime`` so that ``result, x:c`` is a context.

    If ``x:c`` is in ``gprime`` it is removed (its tail may not mention ``x``);
    otherwise ``gprime`` is returned unchanged.
    """
    decl = gprime.declaration(x)
    if decl is None:
        return gprime
    if not alpha_eq(decl.type_, c):
        raise ContextPreconditionError(
            f"{x!r} is declared with a different type than the one being reordered around"
        )
    position = gprime.index(x)
    head = gprime.prefix(position)
    tail = Context(gprime.decls[position + 1:])
    try:
        return strengthen_context(head, x, tail)
    except ContextPreconditionError as exc:
        raise ContextPreconditionError(
            f"Cannot reorder around {x!r}: a later declaration mentions it"
        ) from exc


def dependency_order(ctx: Context) -> Context:
    """Topologically sort ``ctx`` so types only mention variables declared earlier.

    Kahn's algorithm over the "type of y mentions x" graph; ties keep the
    original order. Variables that are not declared at all are ignored.
    """
    declared = {decl.var: i for i, decl in enumerate(ctx.decls)}
    depends_on: Dict[str, set] = {
        decl.var: {y for y in free_vars(decl.type_) if y in declared} for decl in ctx.decls
    }
    ordered: List[Declaration] = []
    placed: set = set()
    remaining = list(ctx.decls)
    while remaining:
        ready = next(
            (decl for decl in remaining if depends_on[decl.var] <= placed),
            None,
        )
        if ready is None:
            cycle = ", ".join(decl.var for decl in remaining)
            raise PtsTypeError(
                TypeErrorKind.CYCLIC_CONTEXT_DEPENDENCY,
                f"declarations depend on each other cyclically: {cycle}",
                ("ctx", remaining[0].var),
            )
        ordered.append(ready)
        placed.add(ready.var)
        remaining.remove(ready)
    return Context(tuple(ordered))


__all__ = [
    "Context",
    "Declaration",
    "EMPTY_CONTEXT",
    "compatible",
    "concat",
    "contains_declaration",
    "dependency_order",
    "extend",
    "is_subset",
    "lookup",
    "merge_declarations",
    "reorder_declarations",
    "strengthen_context",
]
