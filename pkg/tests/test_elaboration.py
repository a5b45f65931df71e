#!/usr/bin/env python3
"""Tests for T-mode checking and the elaboration of T′ derivations into T."""

import pytest

from core.contexts import EMPTY_CONTEXT
from core.derivations import T_RULES, DerivationTree, Judgement, RuleName
from core.errors import ContextPreconditionError, NotWellFormedError, PtsTypeError, TypeErrorKind
from core.terms import Sort, Var, alpha_eq
from frontend.syntax import parse_context, parse_term
from orchestration.checks import DerivationSystem, validate_derivation
from pipelines.elaboration import (
    check_t,
    declaration_derivations,
    elaborate_key_lemma,
    infer_t,
    strengthen_judgement,
    well_formed_witness,
)
from pipelines.typing_engine import infer_tprime

NAT = Var("nat")


def assert_t_valid(spec, tree):
    assert tree.rules_used() <= T_RULES
    assert validate_derivation(spec, tree, DerivationSystem.T) == []


class TestCheckT:
    def test_ordered_context(self, coc):
        tree = check_t(coc, parse_context("nat : *, z : nat"), Var("z"), NAT)
        assert tree.rule is RuleName.START
        assert_t_valid(coc, tree)

    def test_unordered_context(self, coc):
        with pytest.raises(NotWellFormedError) as exc_info:
            check_t(coc, parse_context("z : nat, nat : *"), Var("z"), NAT)
        error = exc_info.value
        assert error.kind is TypeErrorKind.NOT_WELL_FORMED
        assert error.location == ("ctx", "z")
        assert error.report.failing_index == 0

    def test_weakening_chain(self, coc):
        ctx = parse_context("nat : *, z : nat, bool : *, tt : bool")
        tree = check_t(coc, ctx, Var("z"), NAT)
        assert tree.rule is RuleName.WEAK
        assert tree.premises[0].rule is RuleName.WEAK
        assert tree.premises[0].premises[0].rule is RuleName.START
        assert_t_valid(coc, tree)

    def test_sort_over_nonempty_context(self, coc):
        tree = check_t(coc, parse_context("nat : *"), Sort("*"), Sort("BOX"))
        assert tree.rule is RuleName.WEAK
        assert tree.premises[0].rule is RuleName.SORT
        assert tree.premises[0].conclusion.ctx == EMPTY_CONTEXT
        assert_t_valid(coc, tree)

    def test_partial_application(self, coc):
        ctx = parse_context("nat : *, f : nat -> nat -> nat, x : nat")
        tree = check_t(coc, ctx, parse_term("f x"), parse_term("nat -> nat"))
        assert_t_valid(coc, tree)

    def test_rejects_ill_typed_term(self, coc):
        with pytest.raises(PtsTypeError) as exc_info:
            check_t(coc, parse_context("nat : *, z : nat"), parse_term("z z"), NAT)
        assert exc_info.value.kind is TypeErrorKind.NOT_A_PRODUCT

    def test_infer_t(self, coc):
        type_, tree = infer_t(coc, parse_context(""), parse_term("\\A : *. \\x : A. x"))
        assert alpha_eq(type_, parse_term("(A : *) -> A -> A"))
        assert_t_valid(coc, tree)

    def test_conv_survives(self, coc):
        ctx = parse_context("nat : *, s : nat -> nat, w : (\\A : *. A) nat")
        tree = check_t(coc, ctx, parse_term("s w"), NAT)
        assert RuleName.CONV in tree.rules_used()
        assert_t_valid(coc, tree)


class TestElaborateKeyLemma:
    def test_same_conclusion(self, coc):
        ctx = parse_context("nat : *, bool : *, even : nat -> bool, z : nat")
        _, tprime_tree = infer_tprime(coc, ctx, parse_term("even z"))
        tree = elaborate_key_lemma(coc, tprime_tree)
        assert tree.conclusion == tprime_tree.conclusion
        assert_t_valid(coc, tree)

    def test_not_well_formed(self, coc):
        _, tprime_tree = infer_tprime(coc, parse_context("z : nat, nat : *"), Var("z"))
        with pytest.raises(NotWellFormedError):
            elaborate_key_lemma(coc, tprime_tree)

    def test_declaration_derivations_are_shared(self, coc):
        ctx = parse_context("nat : *, z : nat, s : nat -> nat")
        _, tprime_tree = infer_tprime(coc, ctx, parse_term("s (s z)"))
        tree = elaborate_key_lemma(coc, tprime_tree)
        weak_premises = [node.premises[1] for _, node in tree.nodes() if node.rule is RuleName.WEAK]
        distinct = {id(node) for node in weak_premises}
        assert len(distinct) < len(weak_premises)


class TestWellFormedWitness:
    def test_witness_for_context(self, coc):
        ctx = parse_context("nat : *, z : nat, P : nat -> *")
        tree = well_formed_witness(coc, ctx)
        assert tree.conclusion.ctx == ctx
        assert tree.conclusion.subject == Sort("*")
        assert tree.conclusion.type_ == Sort("BOX")
        assert_t_valid(coc, tree)

    def test_empty_context(self, coc):
        tree = well_formed_witness(coc, EMPTY_CONTEXT)
        assert tree.rule is RuleName.SORT

    def test_not_well_formed(self, coc):
        with pytest.raises(NotWellFormedError):
            well_formed_witness(coc, parse_context("nat : *, junk : * *"))

    def test_declaration_derivations(self, coc):
        ctx = parse_context("nat : *, z : nat")
        trees = declaration_derivations(coc, ctx)
        assert [tree.conclusion.type_ for tree in trees] == [Sort("BOX"), Sort("*")]
        assert trees[1].conclusion.ctx == ctx.prefix(1)
        for tree in trees:
            assert_t_valid(coc, tree)


class TestStrengthenJudgement:
    def test_drops_unused_declaration(self, coc):
        ctx = parse_context("nat : *, b : nat, s : nat -> nat, z : nat")
        type_, tree = strengthen_judgement(coc, ctx, "b", parse_term("s z"))
        assert type_ == NAT
        assert tree.conclusion.ctx == parse_context("nat : *, s : nat -> nat, z : nat")
        assert_t_valid(coc, tree)

    def test_variable_in_term(self, coc):
        ctx = parse_context("nat : *, b : nat, s : nat -> nat")
        with pytest.raises(ContextPreconditionError):
            strengthen_judgement(coc, ctx, "b", parse_term("s b"))

    def test_variable_in_later_declaration(self, coc):
        ctx = parse_context("nat : *, P : nat -> *, b : nat, p : P b, z : nat")
        with pytest.raises(ContextPreconditionError):
            strengthen_judgement(coc, ctx, "b", Var("z"))

    def test_undeclared_variable(self, coc):
        with pytest.raises(ContextPreconditionError):
            strengthen_judgement(coc, parse_context("nat : *"), "b", Var("nat"))


def chain_context(length):
    return parse_context(", ".join(f"a{i} : *" for i in range(length)))


class TestSharedDerivations:
    def test_size_counts_distinct_nodes(self, coc):
        ctx = chain_context(18)
        tree = check_t(coc, ctx, Var("a17"), Sort("*"))
        assert tree.size() < 1000
        assert tree.expanded_size() > 100_000
        assert tree.size() == len(list(tree.nodes()))

    def test_validation_visits_each_node_once(self, coc):
        ctx = chain_context(18)
        _, tree = infer_t(coc, ctx, Var("a17"))
        assert_t_valid(coc, tree)

    def test_expanded_size_of_hand_built_trees(self):
        leaf = DerivationTree(RuleName.SORT, Judgement(EMPTY_CONTEXT, Sort("*"), Sort("BOX")))
        pair = DerivationTree(RuleName.WEAK, leaf.conclusion, (leaf, leaf))
        top = DerivationTree(RuleName.WEAK, leaf.conclusion, (pair, pair))
        assert top.size() == 3
        assert top.expanded_size() == 7
        assert top.shared_node_ids() == frozenset({id(leaf), id(pair)})
        single = DerivationTree(RuleName.START, leaf.conclusion, (leaf,))
        assert single.expanded_size() == single.size() == 2
        assert single.shared_node_ids() == frozenset()
