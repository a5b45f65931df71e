"""From T′ to T: the key-lemma elaboration and the T-mode checker built on it.

On a well-formed context every T′ derivation has a T counterpart:

* sort′ becomes (sort) over the empty context followed by a (weak) chain;
* var′ becomes (start) over the declaration's prefix followed by (weak);
* prod, abs, app and conv are kept and their premises elaborated.

The second premise of every (weak) step is the derivation of a declared type
over its prefix; those are built once per context and shared.
"""

from __future__ import annotations

import logging
from typing import Dict, List, Optional, Tuple

from core.contexts import EMPTY_CONTEXT, Context, strengthen_context
from core.derivations import DerivationTree, Judgement, RuleName
from core.errors import (
    ContextPreconditionError,
    InternalInvariantError,
    NotWellFormedError,
    PtsTypeError,
    SpecValidationError,
    TypeErrorKind,
)
from core.pts_spec import PtsSpec, SpecValidationReport, SpecViolation, ensure_valid_spec
from core.reduction import Fuel
from core.terms import Sort, Term, Var, free_vars
from pipelines.typing_engine import check_tprime, infer_sort_tprime, infer_tprime
from pipelines.well_formedness import WellFormednessReport, ensure_well_formed

logger = logging.getLogger(__name__)

DeclarationEntry = Tuple[str, DerivationTree]


class _Elaborator:
    def __init__(self, spec: PtsSpec, fuel: Optional[Fuel]) -> None:
        self.spec = spec
        self.fuel = fuel
        self._declarations: Dict[Context, Tuple[DeclarationEntry, ...]] = {EMPTY_CONTEXT: ()}
        # Keyed by id(); the source tree is stored too so its id stays unique.
        self._elaborated: Dict[int, Tuple[DerivationTree, DerivationTree]] = {}

    def declarations(self, ctx: Context) -> Tuple[DeclarationEntry, ...]:
        """``(s, T derivation of prefix ⊢ A : s)`` for every declaration ``x:A`` of ``ctx``."""
        cached = self._declarations.get(ctx)
        if cached is not None:
            return cached
        last_index = len(ctx) - 1
        prefix = ctx.prefix(last_index)
        earlier = self.declarations(prefix)
        last = ctx.decls[last_index]
        try:
            sort, tprime_tree = infer_sort_tprime(self.spec, prefix, last.type_, self.fuel)
        except PtsTypeError as exc:
            raise NotWellFormedError(
                WellFormednessReport(False, last_index, last.var, exc.detail, exc.kind)
            ) from exc
        if last.sort_class is not None and last.sort_class != sort:
            raise NotWellFormedError(
                WellFormednessReport(
                    False,
                    last_index,
                    last.var,
                    f"{last.var} is tagged with sort {last.sort_class}, but its type has sort {sort}",
                    TypeErrorKind.MISMATCH,
                )
            )
        entries = earlier + ((sort, self.elaborate(tprime_tree)),)
        self._declarations[ctx] = entries
        return entries

    def weaken(self, tree: DerivationTree, ctx: Context, start: int) -> DerivationTree:
        """Extend ``tree`` (over ``ctx.prefix(start)``) to ``ctx`` with one (weak) per declaration."""
        entries = self.declarations(ctx)
        judgement = tree.conclusion
        for index in range(start, len(ctx)):
            sort, declaration_tree = entries[index]
            tree = DerivationTree(
                RuleName.WEAK,
                Judgement(ctx.prefix(index + 1), judgement.subject, judgement.type_),
                (tree, declaration_tree),
                {"sort": sort},
            )
        return tree

    def elaborate(self, tree: DerivationTree) -> DerivationTree:
        cached = self._elaborated.get(id(tree))
        if cached is not None and cached[0] is tree:
            return cached[1]
        result = self._elaborate(tree)
        self._elaborated[id(tree)] = (tree, result)
        return result

    def _elaborate(self, tree: DerivationTree) -> DerivationTree:
        judgement = tree.conclusion
        ctx = judgement.ctx
        if tree.rule is RuleName.SORT_PRIME:
            s1, s2 = judgement.subject, judgement.type_
            base = DerivationTree(
                RuleName.SORT, Judgement(EMPTY_CONTEXT, s1, s2), (), {"axiom": (s1.s, s2.s)}
            )
            return self.weaken(base, ctx, 0)
        if tree.rule is RuleName.VAR_PRIME:
            subject = judgement.subject
            if not isinstance(subject, Var):
                raise InternalInvariantError(f"var' node types a non-variable: {subject!r}")
            index = ctx.index(subject.name)
            sort, type_tree = self.declarations(ctx)[index]
            start = DerivationTree(
                RuleName.START,
                Judgement(ctx.prefix(index + 1), subject, judgement.type_),
                (type_tree,),
                {"sort": sort},
            )
            return self.weaken(start, ctx, index + 1)
        if tree.rule in (RuleName.PROD, RuleName.ABS, RuleName.APP, RuleName.CONV):
            premises = tuple(self.elaborate(premise) for premise in tree.premises)
            return DerivationTree(tree.rule, judgement, premises, dict(tree.side))
        raise InternalInvariantError(f"({tree.rule.value}) is not a T' rule")


def elaborate_key_lemma(
    spec: PtsSpec, deriv: DerivationTree, fuel: Optional[Fuel] = None
) -> DerivationTree:
    """T derivation with the same conclusion as the T′ derivation ``deriv``.

    The context of ``deriv`` must be well-formed; NotWellFormedError otherwise.
    """
    ensure_valid_spec(spec)
    elaborated = _Elaborator(spec, fuel).elaborate(deriv)
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(f"Elaborated {deriv.size()} T' nodes into {elaborated.size()} T nodes")
    return elaborated


def declaration_derivations(
    spec: PtsSpec, ctx: Context, fuel: Optional[Fuel] = None
) -> List[DerivationTree]:
    """T derivations of ``x1:A1, ..., xi:Ai ⊢ A(i+1) : s`` for every declaration of ``ctx``."""
    ensure_valid_spec(spec)
    return [tree for _, tree in _Elaborator(spec, fuel).declarations(ctx)]


def well_formed_witness(spec: PtsSpec, ctx: Context, fuel: Optional[Fuel] = None) -> DerivationTree:
    """T derivation of ``ctx ⊢ s1 : s2`` for the first axiom, by (sort) and (weak)."""
    ensure_valid_spec(spec)
    if not spec.axioms:
        raise SpecValidationError(
            SpecValidationReport(
                spec.name, (SpecViolation("missing-axiom", f"{spec.name} declares no axiom"),)
            )
        )
    s1, s2 = spec.axioms[0]
    base = DerivationTree(
        RuleName.SORT, Judgement(EMPTY_CONTEXT, Sort(s1), Sort(s2)), (), {"axiom": (s1, s2)}
    )
    return _Elaborator(spec, fuel).weaken(base, ctx, 0)


def check_t(
    spec: PtsSpec, ctx: Context, t: Term, a: Term, fuel: Optional[Fuel] = None
) -> DerivationTree:
    """Decide ``ctx ⊢ t : a`` in T: well-formedness plus T′ checking, then elaboration."""
    ensure_well_formed(spec, ctx, fuel)
    return elaborate_key_lemma(spec, check_tprime(spec, ctx, t, a, fuel), fuel)


def infer_t(
    spec: PtsSpec, ctx: Context, t: Term, fuel: Optional[Fuel] = None
) -> Tuple[Term, DerivationTree]:
    ensure_well_formed(spec, ctx, fuel)
    type_, tree = infer_tprime(spec, ctx, t, fuel)
    return type_, elaborate_key_lemma(spec, tree, fuel)


def strengthen_judgement(
    spec: PtsSpec, ctx: Context, x: str, t: Term, fuel: Optional[Fuel] = None
) -> Tuple[Term, DerivationTree]:
    """Drop the unused declaration of ``x`` and re-derive ``t`` in T over the rest.

    Requires ``x`` not to occur in the later declarations, in ``t`` or in its type.
    """
    if ctx.declaration(x) is None:
        raise ContextPreconditionError(f"{x!r} is not declared in the context")
    position = ctx.index(x)
    head, tail = ctx.prefix(position), Context(ctx.decls[position + 1:])
    strengthened = strengthen_context(head, x, tail)
    if x in free_vars(t):
        raise ContextPreconditionError(f"Cannot strengthen away {x!r}: it occurs in the term")
    type_, _ = infer_tprime(spec, ctx, t, fuel)
    if x in free_vars(type_):
        raise ContextPreconditionError(f"Cannot strengthen away {x!r}: it occurs in the type")
    return type_, check_t(spec, strengthened, t, type_, fuel)


__all__ = [
    "check_t",
    "declaration_derivations",
    "elaborate_key_lemma",
    "infer_t",
    "strengthen_judgement",
    "well_formed_witness",
]
