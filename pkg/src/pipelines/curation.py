"""Context curation: from a T′ derivation over an arbitrary context to a T derivation.

The curated context is computed bottom-up over the T′ derivation:

* sort′ needs nothing, so its context is empty;
* var′ curates its premise and adds ``x:A`` when missing;
* prod and abs reorder the contexts of their extended premises around the
  bound variable, then merge everything;
* app and conv merge the contexts of their premises.

The judgement is then re-derived over the curated context (T′ thinning is
realised by running inference again) and elaborated into T.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from core.contexts import EMPTY_CONTEXT, Context, extend, is_subset
from core.derivations import DerivationTree, RuleName
from core.errors import (
    ContextPreconditionError,
    IncompatibleContextsError,
    InternalInvariantError,
    PtsError,
    PtsTypeError,
)
from core.pts_spec import PtsSpec
from core.reduction import Fuel
from core.terms import Term, Var, alpha_eq
from frontend.printer import print_context, print_term
from orchestration.checks import DerivationSystem, validate_derivation
from pipelines.elaboration import elaborate_key_lemma
from pipelines.typing_engine import check_tprime, infer_tprime
from pipelines.well_formedness import merge, reorder, wf_check

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurationResult:
    delta: Context
    tprime_deriv: DerivationTree
    t_deriv: DerivationTree


class _Curator:
    def __init__(self, spec: PtsSpec, fuel: Optional[Fuel]) -> None:
        self.spec = spec
        self.fuel = fuel
        # Keyed by id(); the tree is kept alongside so the id stays unique.
        self._done: Dict[int, Tuple[DerivationTree, Context]] = {}

    def curate(self, tree: DerivationTree) -> Context:
        cached = self._done.get(id(tree))
        if cached is not None and cached[0] is tree:
            return cached[1]
        delta = self._curate(tree)
        self._done[id(tree)] = (tree, delta)
        return delta

    def _merge(self, *contexts: Context) -> Context:
        merged = contexts[0]
        for other in contexts[1:]:
            try:
                merged = merge(self.spec, merged, other, self.fuel, assume_well_formed=True)
            except IncompatibleContextsError as exc:
                raise InternalInvariantError(
                    f"curated sub-contexts of one context disagree: {exc}"
                ) from exc
        return merged

    def _reorder(self, premise: DerivationTree, binder: str, domain: Term) -> Context:
        try:
            return reorder(
                self.spec, self.curate(premise), binder, domain, self.fuel, assume_well_formed=True
            )
        except ContextPreconditionError as exc:
            raise InternalInvariantError(f"cannot reorder around {binder}: {exc}") from exc

    def _curate(self, tree: DerivationTree) -> Context:
        judgement = tree.conclusion
        match tree.rule:
            case RuleName.SORT_PRIME:
                return EMPTY_CONTEXT
            case RuleName.VAR_PRIME:
                (premise,) = tree.premises
                delta = self.curate(premise)
                subject: Var = judgement.subject
                if delta.declaration(subject.name) is not None:
                    return delta
                decl = judgement.ctx.declaration(subject.name)
                return extend(delta, decl.var, decl.type_, decl.sort_class)
            case RuleName.PROD:
                domain_tree, codomain_tree = tree.premises
                binder = tree.side["binder"]
                return self._merge(
                    self.curate(domain_tree),
                    self._reorder(codomain_tree, binder, judgement.subject.domain),
                )
            case RuleName.ABS:
                domain_tree, body_type_tree, body_tree = tree.premises
                binder = tree.side["binder"]
                domain = judgement.subject.domain
                return self._merge(
                    self.curate(domain_tree),
                    self._reorder(body_type_tree, binder, domain),
                    self._reorder(body_tree, binder, domain),
                )
            case RuleName.APP | RuleName.CONV:
                return self._merge(*(self.curate(premise) for premise in tree.premises))
        raise InternalInvariantError(f"({tree.rule.value}) is not a T' rule")


def curate_derivation(
    spec: PtsSpec, deriv: DerivationTree, fuel: Optional[Fuel] = None
) -> CurationResult:
    """Curate the context of an existing T′ derivation."""
    judgement = deriv.conclusion
    delta = _Curator(spec, fuel).curate(deriv)
    logger.info(
        f"Curated {len(judgement.ctx)} declarations down to {len(delta)}: {print_context(delta)}"
    )
    tprime_deriv = check_tprime(spec, delta, judgement.subject, judgement.type_, fuel)
    t_deriv = elaborate_key_lemma(spec, tprime_deriv, fuel)
    return CurationResult(delta, tprime_deriv, t_deriv)


def curate(spec: PtsSpec, ctx: Context, t: Term, fuel: Optional[Fuel] = None) -> CurationResult:
    """Infer ``t`` in T′ over ``ctx`` and extract a well-formed sub-context with a T derivation."""
    _, deriv = infer_tprime(spec, ctx, t, fuel)
    return curate_derivation(spec, deriv, fuel)


@dataclass(frozen=True)
class TheoremReport:
    """Outcome of running the curation pipeline on one judgement."""

    spec_name: str
    ctx: Context
    term: Term
    inferred_type: Optional[Term] = None
    delta: Optional[Context] = None
    delta_is_subset: bool = False
    delta_well_formed: bool = False
    tprime_valid: bool = False
    t_valid: bool = False
    conclusion_matches: bool = False
    error: Optional[PtsError] = None
    violations: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return (
            self.error is None
            and self.delta_is_subset
            and self.delta_well_formed
            and self.tprime_valid
            and self.t_valid
            and self.conclusion_matches
        )

    def to_dict(self) -> Dict[str, Any]:
        error: Optional[Dict[str, Any]] = None
        if isinstance(self.error, PtsTypeError):
            error = {
                "kind": self.error.kind.value,
                "location": list(self.error.location),
                "detail": self.error.detail,
            }
        elif self.error is not None:
            error = {"kind": type(self.error).__name__, "location": [], "detail": str(self.error)}
        return {
            "spec": self.spec_name,
            "ctx": print_context(self.ctx),
            "term": print_term(self.term),
            "inferred_type": print_term(self.inferred_type) if self.inferred_type is not None else None,
            "delta": print_context(self.delta) if self.delta is not None else None,
            "checks": {
                "inferred": self.inferred_type is not None,
                "delta_is_subset": self.delta_is_subset,
                "delta_well_formed": self.delta_well_formed,
                "tprime_valid": self.tprime_valid,
                "t_valid": self.t_valid,
                "conclusion_matches": self.conclusion_matches,
            },
            "passed": self.passed,
            "error": error,
            "violations": list(self.violations),
        }


def theorem_report(
    spec: PtsSpec, ctx: Context, t: Term, fuel: Optional[Fuel] = None
) -> TheoremReport:
    """Infer, curate, and independently re-check everything the curation claims."""
    try:
        inferred, deriv = infer_tprime(spec, ctx, t, fuel)
    except PtsError as exc:
        logger.info(f"Inference failed, nothing to curate: {exc}")
        return TheoremReport(spec.name, ctx, t, error=exc)

    try:
        result = curate_derivation(spec, deriv, fuel)
    except PtsError as exc:
        logger.warning(f"Curation failed after successful inference: {exc}")
        return TheoremReport(spec.name, ctx, t, inferred_type=inferred, error=exc)

    tprime_violations = validate_derivation(spec, result.tprime_deriv, DerivationSystem.TPRIME, fuel)
    t_violations = validate_derivation(spec, result.t_deriv, DerivationSystem.T, fuel)
    conclusion = result.t_deriv.conclusion
    violations = tuple(
        f"{system}: {violation.describe()}"
        for system, found in (("T'", tprime_violations), ("T", t_violations))
        for violation in found
    )
    report = TheoremReport(
        spec.name,
        ctx,
        t,
        inferred_type=inferred,
        delta=result.delta,
        delta_is_subset=is_subset(result.delta, ctx),
        delta_well_formed=wf_check(spec, result.delta, fuel).well_formed,
        tprime_valid=not tprime_violations,
        t_valid=not t_violations,
        conclusion_matches=(
            conclusion.ctx == result.delta
            and alpha_eq(conclusion.subject, t)
            and alpha_eq(conclusion.type_, inferred)
        ),
        violations=violations,
    )
    logger.info(f"Curation report for {print_term(t)}: passed={report.passed}")
    return report


__all__ = [
    "CurationResult",
    "TheoremReport",
    "curate",
    "curate_derivation",
    "theorem_report",
]
