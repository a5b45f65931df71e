"""Syntax-directed type inference for T′ (arbitrary contexts).

Every successful call returns the inferred type together with an explicit T′
derivation. Uses of (conv) that the algorithm needs (exposing a sort or a
product head, equating an argument type with a domain) are emitted as
explicit conv nodes carrying the premise ``ctx ⊢ B : s``.

The T-mode checker builds on this module, see ``pipelines.elaboration``.
"""

from __future__ import annotations

import logging
from typing import Dict, FrozenSet, Optional, Tuple

from core.contexts import Context, extend
from core.derivations import DerivationTree, Judgement, RuleName
from core.errors import FuelExhausted, PtsTypeError, TypeErrorKind
from core.pts_spec import PtsSpec, axiom_sort, ensure_valid_spec, rule_sort
from core.reduction import Conversion, Fuel, convertible, whnf
from core.terms import (
    Abs,
    App,
    Prod,
    Sort,
    Term,
    Var,
    alpha_eq,
    free_vars,
    fresh_name,
    rename,
    substitute,
)
from frontend.printer import print_term

logger = logging.getLogger(__name__)

Path = Tuple[str, ...]
Inferred = Tuple[Term, DerivationTree]


class _Inference:
    """One inference run: spec, fuel and the var′ cache shared by its recursive calls."""

    def __init__(self, spec: PtsSpec, fuel: Optional[Fuel]) -> None:
        self.spec = spec
        self.fuel = fuel or Fuel()
        # Successful var′ derivations do not depend on the active set.
        self._var_cache: Dict[Tuple[Context, str, Optional[str]], Inferred] = {}

    def infer(self, ctx: Context, t: Term, path: Path = (), active: FrozenSet[str] = frozenset()) -> Inferred:
        match t:
            case Sort():
                return self._infer_sort_constant(ctx, t, path)
            case Var():
                return self._infer_var(ctx, t, path, active)
            case Prod():
                return self._infer_prod(ctx, t, path, active)
            case Abs():
                return self._infer_abs(ctx, t, path, active)
            case App():
                return self._infer_app(ctx, t, path, active)
        raise TypeError(f"Not a term: {t!r}")

    def infer_sort(
        self, ctx: Context, a: Term, path: Path = (), active: FrozenSet[str] = frozenset()
    ) -> Tuple[str, DerivationTree]:
        """Derive ``ctx ⊢ a : s`` for a sort ``s``, inserting conv when the type only reduces to one."""
        type_, tree = self.infer(ctx, a, path, active)
        if isinstance(type_, Sort):
            return type_.s, tree
        head = self._whnf(type_, path)
        if not isinstance(head, Sort):
            raise PtsTypeError(
                TypeErrorKind.NOT_A_SORT,
                f"{print_term(a)} has type {print_term(type_)}, which is not a sort",
                path,
            )
        return head.s, self.conv(ctx, tree, head, self._sort_premise(ctx, head, path), head.s)

    def infer_product(
        self, ctx: Context, type_: Term, tree: DerivationTree, path: Path, active: FrozenSet[str]
    ) -> Tuple[Prod, DerivationTree]:
        if isinstance(type_, Prod):
            return type_, tree
        head = self._whnf(type_, path)
        if not isinstance(head, Prod):
            raise PtsTypeError(
                TypeErrorKind.NOT_A_PRODUCT,
                f"{print_term(tree.conclusion.subject)} has type {print_term(type_)}, "
                f"which is not a product",
                path,
            )
        sort, head_tree = self.infer_sort(ctx, head, path, active)
        return head, self.conv(ctx, tree, head, head_tree, sort)

    def conv(
        self, ctx: Context, tree: DerivationTree, target: Term, target_tree: DerivationTree, sort: str
    ) -> DerivationTree:
        return DerivationTree(
            RuleName.CONV,
            Judgement(ctx, tree.conclusion.subject, target),
            (tree, target_tree),
            {"sort": sort, "from": tree.conclusion.type_, "to": target},
        )

    def _sort_premise(self, ctx: Context, head: Sort, path: Path) -> DerivationTree:
        above = axiom_sort(self.spec, head.s)
        if above is None:
            raise PtsTypeError(
                TypeErrorKind.NOT_A_SORT,
                f"the type reduces to {head.s}, which has no axiom, so (conv) cannot reach it",
                path,
            )
        return DerivationTree(
            RuleName.SORT_PRIME, Judgement(ctx, head, Sort(above)), (), {"axiom": (head.s, above)}
        )

    def _whnf(self, t: Term, path: Path) -> Term:
        try:
            return whnf(t, self.fuel)
        except FuelExhausted as exc:
            raise PtsTypeError(
                TypeErrorKind.CONVERSION_UNDECIDED,
                f"weak-head reduction of {print_term(t)} ran out of fuel after {exc.steps} steps",
                path,
            ) from exc

    def _freshen(self, ctx: Context, binder: str, scope: Term) -> Tuple[str, Term]:
        taken = ctx.occurring_names()
        if binder not in taken:
            return binder, scope
        fresh = fresh_name(binder, taken | free_vars(scope))
        logger.debug(f"Binder {binder} clashes with the context, using {fresh}")
        return fresh, rename(scope, binder, fresh)

    def _infer_sort_constant(self, ctx: Context, t: Sort, path: Path) -> Inferred:
        if t.s not in self.spec.sorts:
            raise PtsTypeError(
                TypeErrorKind.NO_AXIOM, f"sort {t.s!r} is not declared in {self.spec.name}", path
            )
        above = axiom_sort(self.spec, t.s)
        if above is None:
            raise PtsTypeError(
                TypeErrorKind.NO_AXIOM, f"{self.spec.name} has no axiom {t.s} : s", path
            )
        tree = DerivationTree(
            RuleName.SORT_PRIME, Judgement(ctx, t, Sort(above)), (), {"axiom": (t.s, above)}
        )
        return Sort(above), tree

    def _infer_var(self, ctx: Context, t: Var, path: Path, active: FrozenSet[str]) -> Inferred:
        decl = ctx.declaration(t.name)
        if decl is None:
            raise PtsTypeError(
                TypeErrorKind.UNBOUND_VARIABLE, f"{t.name} is not declared in the context", path
            )
        key = (ctx, t.name, t.sort_class)
        cached = self._var_cache.get(key)
        if cached is not None:
            return cached
        if t.name in active:
            raise PtsTypeError(
                TypeErrorKind.CYCLIC_CONTEXT_DEPENDENCY,
                f"typing the type of {t.name} requires typing {t.name} again",
                ("ctx", t.name),
            )
        # var′ keeps the full context for its premise.
        sort, type_tree = self.infer_sort(ctx, decl.type_, ("ctx", t.name), active | {t.name})
        for tag in (t.sort_class, decl.sort_class):
            if tag is not None and tag != sort:
                raise PtsTypeError(
                    TypeErrorKind.MISMATCH,
                    f"{t.name} is tagged as a variable of sort {tag}, but its type has sort {sort}",
                    path,
                )
        tree = DerivationTree(
            RuleName.VAR_PRIME, Judgement(ctx, t, decl.type_), (type_tree,), {"sort": sort}
        )
        result = (decl.type_, tree)
        self._var_cache[key] = result
        return result

    def _rule(self, s1: str, s2: str, path: Path) -> str:
        s3 = rule_sort(self.spec, s1, s2)
        if s3 is None:
            raise PtsTypeError(
                TypeErrorKind.NO_RULE, f"{self.spec.name} has no rule ({s1}, {s2})", path
            )
        return s3

    def _infer_prod(self, ctx: Context, t: Prod, path: Path, active: FrozenSet[str]) -> Inferred:
        s1, domain_tree = self.infer_sort(ctx, t.domain, path + ("domain",), active)
        binder, codomain = self._freshen(ctx, t.binder, t.codomain)
        inner = extend(ctx, binder, t.domain)
        s2, codomain_tree = self.infer_sort(inner, codomain, path + ("codomain",), active)
        s3 = self._rule(s1, s2, path)
        tree = DerivationTree(
            RuleName.PROD,
            Judgement(ctx, t, Sort(s3)),
            (domain_tree, codomain_tree),
            {"rule": (s1, s2, s3), "binder": binder},
        )
        return Sort(s3), tree

    def _infer_abs(self, ctx: Context, t: Abs, path: Path, active: FrozenSet[str]) -> Inferred:
        s1, domain_tree = self.infer_sort(ctx, t.domain, path + ("domain",), active)
        binder, body = self._freshen(ctx, t.binder, t.body)
        inner = extend(ctx, binder, t.domain)
        body_type, body_tree = self.infer(inner, body, path + ("body",), active)
        s2, body_type_tree = self.infer_sort(inner, body_type, path + ("body",), active)
        s3 = self._rule(s1, s2, path)
        if binder != t.binder and t.binder not in free_vars(body_type):
            result = Prod(t.binder, t.domain, rename(body_type, binder, t.binder))
        else:
            result = Prod(binder, t.domain, body_type)
        tree = DerivationTree(
            RuleName.ABS,
            Judgement(ctx, t, result),
            (domain_tree, body_type_tree, body_tree),
            {"rule": (s1, s2, s3), "binder": binder},
        )
        return result, tree

    def _infer_app(self, ctx: Context, t: App, path: Path, active: FrozenSet[str]) -> Inferred:
        fun_type, fun_tree = self.infer(ctx, t.fun, path + ("fun",), active)
        product, fun_tree = self.infer_product(ctx, fun_type, fun_tree, path + ("fun",), active)
        arg_type, arg_tree = self.infer(ctx, t.arg, path + ("arg",), active)
        if not alpha_eq(arg_type, product.domain):
            verdict = convertible(arg_type, product.domain, self.fuel)
            if verdict is Conversion.NO:
                raise PtsTypeError(
                    TypeErrorKind.MISMATCH,
                    f"argument {print_term(t.arg)} has type {print_term(arg_type)}, "
                    f"expected {print_term(product.domain)}",
                    path + ("arg",),
                )
            if verdict is Conversion.UNDECIDED:
                raise PtsTypeError(
                    TypeErrorKind.CONVERSION_UNDECIDED,
                    f"could not decide {print_term(arg_type)} ≡ {print_term(product.domain)} "
                    f"within {self.fuel.max_steps} steps",
                    path + ("arg",),
                )
            sort, domain_tree = self.infer_sort(ctx, product.domain, path + ("fun",), active)
            arg_tree = self.conv(ctx, arg_tree, product.domain, domain_tree, sort)
        result = substitute(product.codomain, product.binder, t.arg)
        tree = DerivationTree(RuleName.APP, Judgement(ctx, t, result), (fun_tree, arg_tree), {})
        return result, tree


def infer_tprime(
    spec: PtsSpec, ctx: Context, t: Term, fuel: Optional[Fuel] = None
) -> Tuple[Term, DerivationTree]:
    """Infer the type of ``t`` in T′ and return it with its derivation."""
    ensure_valid_spec(spec)
    type_, tree = _Inference(spec, fuel).infer(ctx, t)
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(f"Inferred {print_term(t)} : {print_term(type_)} ({tree.size()} nodes)")
    return type_, tree


def infer_sort_tprime(
    spec: PtsSpec, ctx: Context, a: Term, fuel: Optional[Fuel] = None
) -> Tuple[str, DerivationTree]:
    """Derive ``ctx ⊢ a : s`` in T′; the conclusion type is syntactically the sort."""
    ensure_valid_spec(spec)
    return _Inference(spec, fuel).infer_sort(ctx, a)


def check_tprime(
    spec: PtsSpec, ctx: Context, t: Term, a: Term, fuel: Optional[Fuel] = None
) -> DerivationTree:
    """Derive ``ctx ⊢ t : a`` in T′, closing with (conv) when the inferred type differs."""
    ensure_valid_spec(spec)
    engine = _Inference(spec, fuel)
    inferred, tree = engine.infer(ctx, t)
    if alpha_eq(inferred, a):
        return tree.with_conclusion_type(a)
    sort, type_tree = engine.infer_sort(ctx, a, ("type",))
    verdict = convertible(inferred, a, engine.fuel)
    if verdict is Conversion.UNDECIDED:
        raise PtsTypeError(
            TypeErrorKind.CONVERSION_UNDECIDED,
            f"could not decide {print_term(inferred)} ≡ {print_term(a)} "
            f"within {engine.fuel.max_steps} steps",
        )
    if verdict is Conversion.NO:
        raise PtsTypeError(
            TypeErrorKind.MISMATCH,
            f"{print_term(t)} has type {print_term(inferred)}, not {print_term(a)}",
        )
    return engine.conv(ctx, tree, a, type_tree, sort)


__all__ = [
    "check_tprime",
    "infer_sort_tprime",
    "infer_tprime",
]
