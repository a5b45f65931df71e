"""Independent re-checking of derivation trees, node by node.

The checker trusts nothing the engine computed: every node is matched against
its rule schema (context shapes, subjects, types, freshness of bound
variables, axiom and rule side conditions, conversions). All failures are
collected; ``assert_valid_derivation`` raises them together.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from core.contexts import Context
from core.derivations import (
    RULE_ARITY,
    TPRIME_RULES,
    T_RULES,
    DerivationTree,
    RuleName,
    render_path,
)
from core.errors import UnknownSortError
from core.pts_spec import PtsSpec, axiom_sort, rule_sort
from core.reduction import Conversion, Fuel, convertible
from core.terms import Abs, App, Prod, Sort, Term, Var, alpha_eq, is_term, substitute
from frontend.printer import print_context, print_term

logger = logging.getLogger(__name__)


class DerivationSystem(str, enum.Enum):
    T = "t"
    TPRIME = "tprime"

    @property
    def rules(self) -> frozenset:
        return T_RULES if self is DerivationSystem.T else TPRIME_RULES


@dataclass(frozen=True)
class Violation:
    path: Tuple[int, ...]
    rule: str
    message: str

    def describe(self) -> str:
        return f"{render_path(self.path)} ({self.rule}): {self.message}"


class DerivationCheckError(RuntimeError):
    """Raised when one or more derivation nodes fail their rule schema."""

    def __init__(self, violations: List[Violation]) -> None:
        super().__init__("; ".join(v.describe() for v in violations))
        self.violations = violations


def _same_context(g1: Context, g2: Context) -> bool:
    return len(g1) == len(g2) and all(
        d1.var == d2.var and alpha_eq(d1.type_, d2.type_) for d1, d2 in zip(g1, g2)
    )


class _NodeChecker:
    """Checks one node; each ``_check_*`` appends messages to ``self.problems``."""

    def __init__(self, spec: PtsSpec, fuel: Fuel, system: DerivationSystem, node: DerivationTree) -> None:
        self.spec = spec
        self.fuel = fuel
        self.system = system
        self.node = node
        self.ctx = node.conclusion.ctx
        self.subject = node.conclusion.subject
        self.type_ = node.conclusion.type_
        self.problems: List[str] = []

    def fail(self, message: str) -> None:
        self.problems.append(message)

    def run(self) -> List[str]:
        rule = self.node.rule
        if rule not in self.system.rules:
            self.fail(f"rule ({rule.value}) is not a rule of system {self.system.value}")
            return self.problems
        arity = RULE_ARITY[rule]
        if len(self.node.premises) != arity:
            self.fail(f"expected {arity} premises, found {len(self.node.premises)}")
            return self.problems
        getattr(self, f"_check_{rule.name.lower()}")()
        return self.problems

    # helpers

    def premise(self, index: int):
        return self.node.premises[index].conclusion

    def expect_context(self, index: int, ctx: Context, what: str = "the conclusion's") -> bool:
        got = self.premise(index).ctx
        if not _same_context(got, ctx):
            self.fail(
                f"premise {index} is over [{print_context(got)}], expected {what} context "
                f"[{print_context(ctx)}]"
            )
            return False
        return True

    def expect_alpha(self, got: Term, expected: Term, what: str) -> bool:
        if not alpha_eq(got, expected):
            self.fail(f"{what} is {print_term(got)}, expected {print_term(expected)}")
            return False
        return True

    def premise_sort(self, index: int) -> Optional[str]:
        type_ = self.premise(index).type_
        if not isinstance(type_, Sort):
            self.fail(f"premise {index} must conclude with a sort, found {print_term(type_)}")
            return None
        if type_.s not in self.spec.sorts:
            self.fail(f"premise {index} concludes with undeclared sort {type_.s}")
            return None
        return type_.s

    def expect_side(self, key: str, value) -> None:
        if value is None or key not in self.node.side:
            return
        recorded = self.node.side[key]
        if isinstance(recorded, list):
            recorded = tuple(recorded)
        if recorded != value:
            self.fail(f"side condition {key}={recorded!r} does not match {value!r}")

    def expect_tag(self, var: str, tag: Optional[str], sort: Optional[str]) -> None:
        if tag is not None and sort is not None and tag != sort:
            self.fail(f"{var} is a variable of sort {tag}, but its type has sort {sort}")

    def check_axiom(self, s1: Term, s2: Term) -> None:
        if not (isinstance(s1, Sort) and isinstance(s2, Sort)):
            self.fail(f"axiom instance {print_term(s1)} : {print_term(s2)} is not between sorts")
            return
        try:
            above = axiom_sort(self.spec, s1.s)
        except UnknownSortError as exc:
            self.fail(str(exc))
            return
        if above != s2.s:
            self.fail(f"<{s1.s}, {s2.s}> is not an axiom of {self.spec.name}")
        self.expect_side("axiom", (s1.s, s2.s))

    def check_rule(self, s1: Optional[str], s2: Optional[str], s3: Optional[str]) -> None:
        if s1 is None or s2 is None or s3 is None:
            return
        if rule_sort(self.spec, s1, s2) != s3:
            self.fail(f"<{s1}, {s2}, {s3}> is not a rule of {self.spec.name}")
        self.expect_side("rule", (s1, s2, s3))

    def check_extension(self, index: int) -> Optional[str]:
        """Premise ``index`` must be over ``ctx, y:A`` with ``y`` fresh; returns ``y``."""
        got = self.premise(index).ctx
        if len(got) != len(self.ctx) + 1:
            self.fail(f"premise {index} must extend the context by exactly one declaration")
            return None
        if not self.expect_context_prefix(index, got):
            return None
        binder = got.decls[-1].var
        if binder in self.ctx.occurring_names():
            self.fail(f"bound variable {binder} is not fresh for the context")
            return None
        self.expect_alpha(got.decls[-1].type_, self.subject.domain, f"type of {binder} in premise {index}")
        recorded = self.node.side.get("binder")
        if recorded is not None and recorded != binder:
            self.fail(f"side binder {recorded} does not match premise binder {binder}")
        return binder

    def expect_context_prefix(self, index: int, got: Context) -> bool:
        if not _same_context(got.prefix(len(self.ctx)), self.ctx):
            self.fail(f"premise {index} does not extend the conclusion's context")
            return False
        return True

    # rule schemas

    def _check_sort_prime(self) -> None:
        self.check_axiom(self.subject, self.type_)

    def _check_sort(self) -> None:
        if len(self.ctx):
            self.fail("(sort) concludes over the empty context only")
        self.check_axiom(self.subject, self.type_)

    def _check_var_prime(self) -> None:
        if not isinstance(self.subject, Var):
            self.fail(f"subject {print_term(self.subject)} is not a variable")
            return
        decl = self.ctx.declaration(self.subject.name)
        if decl is None:
            self.fail(f"{self.subject.name} is not declared in the context")
            return
        self.expect_alpha(self.type_, decl.type_, "conclusion type")
        self.expect_context(0, self.ctx)
        self.expect_alpha(self.premise(0).subject, decl.type_, "premise subject")
        sort = self.premise_sort(0)
        self.expect_tag(decl.var, self.subject.sort_class, sort)
        self.expect_tag(decl.var, decl.sort_class, sort)
        self.expect_side("sort", sort)

    def _check_start(self) -> None:
        if not len(self.ctx):
            self.fail("(start) needs a non-empty context")
            return
        last = self.ctx.decls[-1]
        if not isinstance(self.subject, Var) or self.subject.name != last.var:
            self.fail(f"subject {print_term(self.subject)} is not the last declared variable {last.var}")
            return
        self.expect_alpha(self.type_, last.type_, "conclusion type")
        self.expect_context(0, self.ctx.prefix(len(self.ctx) - 1), "the shortened")
        self.expect_alpha(self.premise(0).subject, last.type_, "premise subject")
        sort = self.premise_sort(0)
        self.expect_tag(last.var, self.subject.sort_class, sort)
        self.expect_tag(last.var, last.sort_class, sort)
        self.expect_side("sort", sort)

    def _check_weak(self) -> None:
        if not len(self.ctx):
            self.fail("(weak) needs a non-empty context")
            return
        last = self.ctx.decls[-1]
        shorter = self.ctx.prefix(len(self.ctx) - 1)
        self.expect_context(0, shorter, "the shortened")
        self.expect_alpha(self.premise(0).subject, self.subject, "premise 0 subject")
        self.expect_alpha(self.premise(0).type_, self.type_, "premise 0 type")
        self.expect_context(1, shorter, "the shortened")
        self.expect_alpha(self.premise(1).subject, last.type_, "premise 1 subject")
        sort = self.premise_sort(1)
        self.expect_tag(last.var, last.sort_class, sort)
        self.expect_side("sort", sort)

    def _check_prod(self) -> None:
        if not isinstance(self.subject, Prod):
            self.fail(f"subject {print_term(self.subject)} is not a product")
            return
        self.expect_context(0, self.ctx)
        self.expect_alpha(self.premise(0).subject, self.subject.domain, "premise 0 subject")
        s1 = self.premise_sort(0)
        binder = self.check_extension(1)
        s2 = self.premise_sort(1)
        if binder is not None:
            self.expect_alpha(
                Prod(binder, self.subject.domain, self.premise(1).subject),
                self.subject,
                "product rebuilt from the premises",
            )
        s3 = self.type_.s if isinstance(self.type_, Sort) else None
        if s3 is None:
            self.fail(f"conclusion type {print_term(self.type_)} is not a sort")
        self.check_rule(s1, s2, s3)

    def _check_abs(self) -> None:
        if not isinstance(self.subject, Abs):
            self.fail(f"subject {print_term(self.subject)} is not an abstraction")
            return
        self.expect_context(0, self.ctx)
        self.expect_alpha(self.premise(0).subject, self.subject.domain, "premise 0 subject")
        s1 = self.premise_sort(0)
        binder = self.check_extension(1)
        s2 = self.premise_sort(1)
        body_type = self.premise(1).subject
        if binder is not None and self.expect_context(2, self.premise(1).ctx, "premise 1's"):
            self.expect_alpha(self.premise(2).type_, body_type, "premise 2 type")
            self.expect_alpha(
                Abs(binder, self.subject.domain, self.premise(2).subject),
                self.subject,
                "abstraction rebuilt from the premises",
            )
            self.expect_alpha(
                Prod(binder, self.subject.domain, body_type),
                self.type_,
                "conclusion type",
            )
        if s1 is not None and s2 is not None:
            s3 = rule_sort(self.spec, s1, s2)
            if s3 is None:
                self.fail(f"no rule <{s1}, {s2}, s3> in {self.spec.name}")
            else:
                self.expect_side("rule", (s1, s2, s3))

    def _check_app(self) -> None:
        if not isinstance(self.subject, App):
            self.fail(f"subject {print_term(self.subject)} is not an application")
            return
        self.expect_context(0, self.ctx)
        self.expect_context(1, self.ctx)
        self.expect_alpha(self.premise(0).subject, self.subject.fun, "premise 0 subject")
        self.expect_alpha(self.premise(1).subject, self.subject.arg, "premise 1 subject")
        fun_type = self.premise(0).type_
        if not isinstance(fun_type, Prod):
            self.fail(f"premise 0 type {print_term(fun_type)} is not a product")
            return
        self.expect_alpha(self.premise(1).type_, fun_type.domain, "argument type")
        self.expect_alpha(
            self.type_,
            substitute(fun_type.codomain, fun_type.binder, self.subject.arg),
            "conclusion type",
        )

    def _check_conv(self) -> None:
        self.expect_context(0, self.ctx)
        self.expect_context(1, self.ctx)
        self.expect_alpha(self.premise(0).subject, self.subject, "premise 0 subject")
        self.expect_alpha(self.premise(1).subject, self.type_, "premise 1 subject")
        sort = self.premise_sort(1)
        self.expect_side("sort", sort)
        for key, expected in (("from", self.premise(0).type_), ("to", self.type_)):
            recorded = self.node.side.get(key)
            if is_term(recorded):
                self.expect_alpha(recorded, expected, f"side {key}")
        verdict = convertible(self.premise(0).type_, self.type_, self.fuel)
        if verdict is not Conversion.YES:
            self.fail(
                f"{print_term(self.premise(0).type_)} ≡ {print_term(self.type_)} "
                f"is {verdict.value}, expected Yes"
            )


def validate_derivation(
    spec: PtsSpec,
    tree: DerivationTree,
    system: DerivationSystem,
    fuel: Optional[Fuel] = None,
) -> List[Violation]:
    """Re-check every node of ``tree`` against the rules of ``system``; empty means valid."""
    fuel = fuel or Fuel()
    violations: List[Violation] = []
    for path, node in tree.nodes():
        for message in _NodeChecker(spec, fuel, system, node).run():
            violations.append(Violation(path, node.rule.value, message))
    violations.sort(key=lambda v: v.path)
    if violations:
        logger.debug(f"Derivation has {len(violations)} violations in system {system.value}")
    return violations


def assert_valid_derivation(
    spec: PtsSpec,
    tree: DerivationTree,
    system: DerivationSystem,
    fuel: Optional[Fuel] = None,
) -> None:
    violations = validate_derivation(spec, tree, system, fuel)
    if violations:
        raise DerivationCheckError(violations)


__all__ = [
    "DerivationCheckError",
    "DerivationSystem",
    "Violation",
    "assert_valid_derivation",
    "validate_derivation",
]
