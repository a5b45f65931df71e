#!/usr/bin/env python3
"""Tests for the context algebra: inclusion, merging, strengthening, reordering, dependency order."""

import random

import pytest

from core.contexts import (
    EMPTY_CONTEXT,
    Context,
    Declaration,
    compatible,
    concat,
    contains_declaration,
    dependency_order,
    extend,
    is_subset,
    lookup,
    merge_declarations,
    reorder_declarations,
    strengthen_context,
)
from core.errors import (
    ContextPreconditionError,
    DuplicateVariableError,
    IncompatibleContextsError,
    NotWellFormedError,
    PtsTypeError,
    TypeErrorKind,
)
from core.terms import Sort, Var
from frontend.printer import print_context
from frontend.syntax import parse_context, parse_term
from pipelines.typing_engine import check_tprime
from pipelines.well_formedness import merge, reorder, wf_check
from term_generators import base_context, permuted, random_closed_subcontext

STAR = Sort("*")
NAT = Var("nat")


def ctx(src: str) -> Context:
    return parse_context(src)


class TestLookupAndExtend:
    def test_lookup(self):
        assert lookup(ctx("nat : *, z : nat"), "z") == NAT
        assert lookup(ctx("nat : *, z : nat"), "q") is None
        assert lookup(EMPTY_CONTEXT, "x") is None

    def test_extend(self):
        assert extend(ctx("nat : *"), "z", NAT) == ctx("nat : *, z : nat")
        assert extend(EMPTY_CONTEXT, "nat", STAR) == ctx("nat : *")

    def test_extend_duplicate(self):
        with pytest.raises(DuplicateVariableError):
            extend(ctx("nat : *"), "nat", STAR)

    def test_constructor_rejects_duplicates(self):
        with pytest.raises(DuplicateVariableError):
            Context((Declaration("x", NAT), Declaration("x", Var("bool"))))


class TestInclusionAndCompatibility:
    def test_subset_ignores_order(self):
        assert is_subset(ctx("nat : *, z : nat"), ctx("z : nat, nat : *"))

    def test_subset_compares_types(self):
        assert not is_subset(ctx("nat : *, z : nat"), ctx("nat : *, z : bool"))

    def test_empty_is_subset(self):
        assert is_subset(EMPTY_CONTEXT, ctx("x : y"))

    def test_subset_up_to_alpha(self):
        assert is_subset(ctx("f : (x : *) -> x"), ctx("f : (y : *) -> y"))

    def test_compatible(self):
        assert compatible(ctx("nat : *, bool : *, z : nat"), ctx("bool : *, true : bool, nat : *"))
        assert not compatible(ctx("nat : *, z : nat"), ctx("bool : *, z : bool"))
        assert compatible(EMPTY_CONTEXT, ctx("nat : *"))


class TestMerge:
    def test_example_order(self, coc):
        merged = merge(coc, ctx("nat : *, bool : *, z : nat"), ctx("bool : *, true : bool, nat : *"))
        assert print_context(merged) == "nat : *, bool : *, z : nat, true : bool"

    def test_incompatible(self, coc):
        with pytest.raises(IncompatibleContextsError) as exc_info:
            merge(coc, ctx("nat : *, z : nat"), ctx("bool : *, z : bool"))
        assert exc_info.value.variable == "z"

    def test_not_well_formed_input(self, coc):
        with pytest.raises(NotWellFormedError):
            merge(coc, ctx("z : nat, nat : *"), ctx("nat : *"))

    def test_structural_merge_skips_checks(self):
        merged = merge_declarations(ctx("z : nat"), ctx("nat : *, z : nat"))
        assert merged.names() == ("z", "nat")

    def test_triple_inclusion_on_generated_pairs(self, coc):
        rng = random.Random(41)
        base = base_context()
        for _ in range(200):
            g1 = random_closed_subcontext(rng, base)
            g2 = random_closed_subcontext(rng, base)
            merged = merge(coc, g1, g2)
            assert is_subset(g1, merged)
            assert is_subset(g2, merged)
            assert all(contains_declaration(g1, d) or contains_declaration(g2, d) for d in merged)
            assert set(merged.names()) == set(g1.names()) | set(g2.names())
            assert wf_check(coc, merged).well_formed


class TestStrengthenContext:
    def test_drops_unused_declaration(self):
        result = strengthen_context(ctx("nat : *"), "b", ctx("z : nat"))
        assert result == ctx("nat : *, z : nat")
        assert result == concat(ctx("nat : *"), ctx("z : nat"))

    def test_rejects_mentioned_variable(self):
        with pytest.raises(ContextPreconditionError):
            strengthen_context(ctx("nat : *"), "nat", ctx("z : nat"))

    def test_preserves_well_formedness(self, coc):
        full = ctx("nat : *, b : nat, z : nat")
        result = strengthen_context(full.prefix(1), "b", ctx("z : nat"))
        assert wf_check(coc, full).well_formed
        assert wf_check(coc, result).well_formed


class TestReorder:
    def test_moves_declaration_to_the_end(self, coc):
        gprime = ctx("nat : *, y : nat, z : nat")
        result = reorder(coc, gprime, "y", NAT)
        assert result == ctx("nat : *, z : nat")
        assert wf_check(coc, extend(result, "y", NAT)).well_formed

    def test_absent_variable_is_noop(self, coc):
        gprime = ctx("nat : *, z : nat")
        assert reorder(coc, gprime, "y", NAT) == gprime

    def test_judgement_survives_reordering(self, coc):
        gprime = ctx("nat : *, y : nat, f : nat -> nat")
        result = reorder(coc, gprime, "y", NAT)
        term = parse_term("f y")
        check_tprime(coc, extend(result, "y", NAT), term, NAT)

    def test_tail_mentions_variable(self):
        with pytest.raises(ContextPreconditionError):
            reorder_declarations(ctx("nat : *, y : nat, p : P y"), "y", NAT)

    def test_type_differs(self):
        with pytest.raises(ContextPreconditionError):
            reorder_declarations(ctx("nat : *, y : nat"), "y", Var("bool"))


class TestDependencyOrder:
    def test_swaps_declarations(self):
        assert print_context(dependency_order(ctx("z : nat, nat : *"))) == "nat : *, z : nat"

    def test_keeps_ties_in_original_order(self):
        ordered = dependency_order(ctx("f : nat -> nat -> nat, x : nat, nat : *"))
        assert ordered.names() == ("nat", "f", "x")

    def test_cycle(self):
        with pytest.raises(PtsTypeError) as exc_info:
            dependency_order(ctx("x : y, y : x"))
        assert exc_info.value.kind is TypeErrorKind.CYCLIC_CONTEXT_DEPENDENCY
        assert exc_info.value.location == ("ctx", "x")

    def test_self_reference_is_a_cycle(self):
        with pytest.raises(PtsTypeError):
            dependency_order(ctx("x : x"))

    def test_undeclared_names_are_ignored(self):
        assert dependency_order(ctx("z : nat")).names() == ("z",)

    def test_recovers_well_formed_order(self, coc):
        rng = random.Random(43)
        base = base_context()
        for _ in range(50):
            shuffled = permuted(rng, base)
            ordered = dependency_order(shuffled)
            assert is_subset(ordered, base) and is_subset(base, ordered)
            assert wf_check(coc, ordered).well_formed
