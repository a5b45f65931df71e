#!/usr/bin/env python3
"""Tests for the independent derivation checker."""

import pytest

from core.derivations import DerivationTree, Judgement, RuleName
from core.terms import Sort, Var
from frontend.syntax import parse_context, parse_term
from orchestration.checks import (
    DerivationCheckError,
    DerivationSystem,
    assert_valid_derivation,
    validate_derivation,
)
from pipelines.elaboration import check_t
from pipelines.typing_engine import infer_tprime

TPRIME = DerivationSystem.TPRIME
T = DerivationSystem.T


def tprime_tree(spec, ctx_src, term_src):
    return infer_tprime(spec, parse_context(ctx_src), parse_term(term_src))[1]


def messages(violations):
    return [v.message for v in violations]


class TestValidTrees:
    @pytest.mark.parametrize(
        "ctx_src,term_src",
        [
            ("z : nat, nat : *", "z"),
            ("", "\\A : *. \\x : A. x"),
            ("x : nat, f : nat -> nat -> nat, nat : *", "f x x"),
            ("nat : *, s : nat -> nat, w : (\\A : *. A) nat", "s w"),
            ("pz : P z, P : nat -> *, z : nat, nat : *", "pz"),
            ("nat : *", "(x : nat) -> nat"),
        ],
    )
    def test_engine_output_is_valid(self, coc, ctx_src, term_src):
        assert validate_derivation(coc, tprime_tree(coc, ctx_src, term_src), TPRIME) == []

    def test_t_tree(self, coc):
        tree = check_t(coc, parse_context("nat : *, z : nat, bool : *"), Var("z"), Var("nat"))
        assert validate_derivation(coc, tree, T) == []
        assert_valid_derivation(coc, tree, T)


class TestViolations:
    def test_tprime_rules_are_not_t_rules(self, coc):
        tree = tprime_tree(coc, "nat : *, z : nat", "z")
        violations = validate_derivation(coc, tree, T)
        assert violations[0].path == ()
        assert "is not a rule of system t" in violations[0].message

    def test_t_rules_are_not_tprime_rules(self, coc):
        tree = check_t(coc, parse_context("nat : *, z : nat"), Var("z"), Var("nat"))
        assert validate_derivation(coc, tree, TPRIME)

    def test_var_prime_premise_over_prefix(self, coc):
        tree = tprime_tree(coc, "nat : *, z : nat", "z")
        (premise,) = tree.premises
        shortened = Judgement(
            tree.conclusion.ctx.prefix(1), premise.conclusion.subject, premise.conclusion.type_
        )
        tampered = DerivationTree(
            tree.rule,
            tree.conclusion,
            (DerivationTree(premise.rule, shortened, premise.premises, premise.side),),
            tree.side,
        )
        violations = validate_derivation(coc, tampered, TPRIME)
        assert [v.path for v in violations][0] == ()
        assert "premise 0 is over [nat : *]" in violations[0].message

    def test_wrong_axiom(self, coc):
        tree = DerivationTree(
            RuleName.SORT_PRIME, Judgement(parse_context(""), Sort("*"), Sort("*")), (), {}
        )
        assert messages(validate_derivation(coc, tree, TPRIME)) == ["<*, *> is not an axiom of coc"]

    def test_sort_over_nonempty_context(self, coc):
        tree = DerivationTree(
            RuleName.SORT, Judgement(parse_context("nat : *"), Sort("*"), Sort("BOX")), (), {}
        )
        assert messages(validate_derivation(coc, tree, T)) == ["(sort) concludes over the empty context only"]

    def test_wrong_arity(self, coc):
        tree = DerivationTree(
            RuleName.APP, Judgement(parse_context(""), parse_term("f x"), Var("nat")), (), {}
        )
        assert messages(validate_derivation(coc, tree, TPRIME)) == ["expected 2 premises, found 0"]

    def test_conversion_that_does_not_hold(self, coc):
        ctx = parse_context("nat : *, bool : *, z : nat")
        z_tree = infer_tprime(coc, ctx, Var("z"))[1]
        bool_tree = infer_tprime(coc, ctx, Var("bool"))[1]
        tree = DerivationTree(
            RuleName.CONV, Judgement(ctx, Var("z"), Var("bool")), (z_tree, bool_tree), {"sort": "*"}
        )
        violations = validate_derivation(coc, tree, TPRIME)
        assert len(violations) == 1
        assert "is No, expected Yes" in violations[0].message

    def test_tampered_side_condition(self, coc):
        tree = tprime_tree(coc, "nat : *", "nat -> nat")
        tampered = DerivationTree(
            tree.rule, tree.conclusion, tree.premises, {**tree.side, "rule": ("*", "*", "BOX")}
        )
        found = messages(validate_derivation(coc, tampered, TPRIME))
        assert any(m.startswith("side condition rule=") for m in found)

    def test_tampered_conversion_target(self, coc):
        tree = tprime_tree(coc, "nat : *, bool : *, s : nat -> nat, w : (\\A : *. A) nat", "s w")
        conv = tree.premises[1]
        assert conv.rule is RuleName.CONV
        tampered = DerivationTree(
            conv.rule, conv.conclusion, conv.premises, {**conv.side, "to": Var("bool")}
        )
        assert messages(validate_derivation(coc, tampered, TPRIME)) == ["side to is bool, expected nat"]

    def test_rule_not_in_spec(self, stlc, coc):
        tree = tprime_tree(coc, "", "\\A : *. A")
        assert validate_derivation(stlc, tree, TPRIME)

    def test_assert_collects_all_violations(self, coc):
        tree = DerivationTree(
            RuleName.SORT_PRIME, Judgement(parse_context(""), Sort("BOX"), Sort("*")), (), {}
        )
        with pytest.raises(DerivationCheckError) as exc_info:
            assert_valid_derivation(coc, tree, TPRIME)
        assert exc_info.value.violations[0].describe().startswith("root (sort')")
