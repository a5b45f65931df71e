#!/usr/bin/env python3
"""Tests for the surface syntax, the printer and the JSON form of derivations."""

import json
import random

import pytest

from core.contexts import dependency_order
from core.errors import DuplicateVariableError, ParseError, PtsTypeError, TypeErrorKind
from core.terms import Abs, App, Prod, Sort, Var, alpha_eq
from frontend.derivation_json import read_derivation, tree_from_json, tree_to_json, write_derivation
from frontend.printer import print_context, print_judgement, print_term, print_tree
from frontend.syntax import (
    SourceMap,
    parse_context,
    parse_context_located,
    parse_declaration,
    parse_term,
    parse_term_located,
)
from orchestration.checks import DerivationSystem, validate_derivation
from pipelines.elaboration import check_t
from pipelines.typing_engine import infer_tprime
from term_generators import random_raw_term

NAT = Var("nat")


class TestParseTerm:
    def test_identity(self):
        assert parse_term("\\x : *. x") == Abs("x", Sort("*"), Var("x"))

    def test_application_is_left_associative(self):
        assert parse_term("f x y") == App(App(Var("f"), Var("x")), Var("y"))

    def test_arrow_is_right_associative(self):
        t = parse_term("nat -> nat -> nat")
        assert isinstance(t, Prod) and isinstance(t.codomain, Prod)
        assert t.domain == NAT

    def test_dependent_product(self):
        assert parse_term("(x : nat) -> P x") == Prod("x", NAT, App(Var("P"), Var("x")))

    def test_unicode_aliases(self):
        assert parse_term("λx : □. x") == parse_term("\\x : BOX. x")
        assert alpha_eq(parse_term("nat → nat"), parse_term("nat -> nat"))

    def test_custom_sorts(self):
        assert parse_term("TRI", sorts={"*", "BOX", "TRI"}) == Sort("TRI")
        assert parse_term("TRI") == Var("TRI")

    def test_sort_tag(self):
        assert parse_term("x@*") == Var("x", "*")

    def test_primed_names(self):
        assert parse_term("x′") == Var("x′")

    def test_malformed(self):
        with pytest.raises(ParseError) as exc_info:
            parse_term("\\x : *.")
        assert exc_info.value.span is not None

    def test_unbalanced_parenthesis(self):
        with pytest.raises(ParseError):
            parse_term("(f x")


class TestParseContext:
    def test_comma_separated(self):
        ctx = parse_context("nat : *, z : nat")
        assert ctx.names() == ("nat", "z")

    def test_newline_separated_with_comments(self):
        ctx = parse_context("# naturals\nnat : *\nz : nat  # zero\n\ns : nat -> nat\n")
        assert ctx.names() == ("nat", "z", "s")

    def test_empty(self):
        assert len(parse_context("")) == 0

    def test_duplicate_has_span(self):
        with pytest.raises(DuplicateVariableError) as exc_info:
            parse_context("nat : *\nnat : *", file="ctx.txt")
        span = exc_info.value.span
        assert span.file == "ctx.txt"
        assert span.start == (2, 1)

    def test_tagged_declaration(self):
        decl = parse_declaration("x@* : nat")
        assert decl.var == "x"
        assert decl.sort_class == "*"


class TestSourceSpans:
    def test_subterm_spans(self):
        t, spans = parse_term_located("f (g x)", file="t.pts")
        assert isinstance(t, App)
        assert spans[()].start == (1, 1)
        assert spans[("arg",)].start == (1, 4)
        assert spans[("arg", "arg")].start == (1, 6)
        assert spans[("arg", "arg")].file == "t.pts"

    def test_declaration_spans(self):
        _, spans = parse_context_located("nat : *\nP : nat -> *")
        assert spans["P"][()].start == (2, 1)
        assert spans["P"][("domain",)].start == (2, 5)

    def test_mismatch_is_located(self, coc):
        ctx, declaration_spans = parse_context_located("nat : *, bool : *, f : nat -> nat, b : bool")
        term, term_spans = parse_term_located("f b")
        with pytest.raises(PtsTypeError) as exc_info:
            infer_tprime(coc, ctx, term)
        error = SourceMap(term_spans, declaration_spans).attach(exc_info.value)
        assert error.kind is TypeErrorKind.MISMATCH
        assert error.span.start == (1, 3)
        assert error.span.end == (1, 4)

    def test_declaration_error_is_located(self):
        ctx, declaration_spans = parse_context_located("x : y, y : x")
        with pytest.raises(PtsTypeError) as exc_info:
            dependency_order(ctx)
        error = SourceMap(declarations=declaration_spans).attach(exc_info.value)
        assert error.location == ("ctx", "x")
        assert error.span.start == (1, 1)

    def test_expected_type_table(self):
        _, type_spans = parse_term_located("nat -> nat", file="<type>")
        source = SourceMap(type_=type_spans)
        assert source.locate(("type", "codomain", "fun")).start == (1, 8)
        assert source.locate(("ctx",)) is None
        assert source.locate(("fun",)) is None


class TestPrinter:
    @pytest.mark.parametrize(
        "src",
        [
            "\\x : *. x",
            "(x : nat) -> nat",
            "nat -> nat -> nat",
            "(nat -> nat) -> nat",
            "f x y",
            "f (g x)",
            "(\\x : *. x) nat",
            "(A : *) -> A -> A",
            "x@*",
        ],
    )
    def test_canonical_forms(self, src):
        assert print_term(parse_term(src)) == src

    def test_context(self):
        assert print_context(parse_context("nat : *\nz@* : nat")) == "nat : *, z@* : nat"

    def test_judgement(self, coc):
        _, tree = infer_tprime(coc, parse_context("nat : *, z : nat"), Var("z"))
        assert print_judgement(tree) == "nat : *, z : nat |- z : nat"

    def test_empty_context_judgement(self, coc):
        _, tree = infer_tprime(coc, parse_context(""), Sort("*"))
        assert print_judgement(tree) == "|- * : BOX"

    def test_tree_indents_premises(self, coc):
        _, tree = infer_tprime(coc, parse_context("nat : *, z : nat"), Var("z"))
        lines = print_tree(tree).splitlines()
        assert lines[0].startswith("(var') ")
        assert lines[1].startswith("  (var') ")
        assert lines[2].startswith("    (sort') ")

    def test_shared_subtree_printed_once(self, coc):
        ctx = parse_context(", ".join(f"a{i} : *" for i in range(16)))
        tree = check_t(coc, ctx, Var("a15"), Sort("*"))
        lines = print_tree(tree).splitlines()
        assert tree.expanded_size() > 10_000
        assert len(lines) < 3 * tree.size()
        assert any(line.lstrip().startswith("[#1] ") for line in lines)
        assert any(line.endswith("(see #1)") for line in lines)

    def test_max_depth(self, coc):
        _, tree = infer_tprime(coc, parse_context("nat : *, z : nat"), Var("z"))
        lines = print_tree(tree, max_depth=1).splitlines()
        assert len(lines) == 3
        assert lines[1].startswith("  (var') ")
        assert lines[2] == "    ..."

    def test_round_trip_on_random_terms(self):
        rng = random.Random(37)
        for _ in range(1000):
            t = random_raw_term(rng, 5)
            assert alpha_eq(parse_term(print_term(t)), t)


class TestDerivationJson:
    def test_shape(self, coc):
        _, tree = infer_tprime(coc, parse_context("nat : *, z : nat"), Var("z"))
        data = tree_to_json(tree)
        assert list(data) == ["rule", "conclusion", "side", "premises"]
        assert data["rule"] == "var'"
        assert data["conclusion"] == {"ctx": [["nat", "*"], ["z", "nat"]], "term": "z", "type": "nat"}
        assert data["side"] == {"sort": "*"}

    def test_round_trip_keeps_validity(self, coc, tmp_path):
        ctx = parse_context("x : nat, f : nat -> nat -> nat, nat : *")
        _, tree = infer_tprime(coc, ctx, parse_term("f x x"))
        path = write_derivation(tmp_path / "out" / "tree.json", tree)
        restored = read_derivation(path)
        assert restored.size() == tree.size()
        assert validate_derivation(coc, restored, DerivationSystem.TPRIME) == []

    def test_t_tree_round_trip(self, coc):
        tree = check_t(coc, parse_context("nat : *, z : nat, bool : *"), Var("z"), NAT)
        restored = tree_from_json(json.loads(json.dumps(tree_to_json(tree))))
        assert validate_derivation(coc, restored, DerivationSystem.T) == []

    def test_shared_subtrees_written_once(self, coc):
        ctx = parse_context(", ".join(f"a{i} : *" for i in range(16)))
        tree = check_t(coc, ctx, Var("a15"), Sort("*"))
        data = tree_to_json(tree)
        text = json.dumps(data)
        assert text.count('"ref"') > 0
        assert text.count('"rule"') == tree.size()
        restored = tree_from_json(json.loads(text))
        assert restored.size() == tree.size()
        assert restored.expanded_size() == tree.expanded_size()
        assert validate_derivation(coc, restored, DerivationSystem.T) == []

    def test_conversion_types_round_trip(self, coc):
        ctx = parse_context("nat : *, s : nat -> nat, w : (\\A : *. A) nat")
        _, tree = infer_tprime(coc, ctx, parse_term("s w"))
        conv = tree_to_json(tree)["premises"][1]
        assert conv["side"] == {"sort": "*", "from": "(\\A : *. A) nat", "to": "nat"}
        restored = tree_from_json(json.loads(json.dumps(tree_to_json(tree))))
        assert restored.premises[1].side["to"] == Var("nat")

    def test_unknown_reference(self):
        with pytest.raises(ParseError) as exc_info:
            tree_from_json({"ref": 3})
        assert "unknown node 3" in str(exc_info.value)

    def test_malformed(self):
        with pytest.raises(ParseError):
            tree_from_json({"rule": "nonsense"})

    def test_invalid_json_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(ParseError):
            read_derivation(path)
