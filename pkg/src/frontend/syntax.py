"""Surface syntax for terms and contexts, parsed with a lark LALR grammar.

ASCII spellings are canonical (``\\``, ``->``, ``BOX``); the Unicode forms
``λ``, ``→`` and ``□`` are accepted as aliases. ``A -> B`` is sugar for a
product whose binder does not occur in ``B``. A variable may carry a sort
tag, as in ``x@*``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import AbstractSet, Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from core.contexts import Context, Declaration
from core.errors import DuplicateVariableError, ParseError, PtsTypeError, SourceSpan
from core.pts_spec import BOX, STAR
from core.terms import Abs, App, Prod, Sort, Term, Var, arrow

logger = logging.getLogger(__name__)

BOX_ALIAS = "□"
DEFAULT_SORTS: FrozenSet[str] = frozenset({STAR, BOX})

TermPath = Tuple[str, ...]

_GRAMMAR = r"""
    ?term: lam
         | pi
         | arrow
         | app

    lam: _LAMBDA NAME ":" term "." term
    pi: "(" NAME ":" term ")" _ARROW term
    arrow: app _ARROW term

    ?app: app atom -> application
        | atom

    ?atom: var
         | star
         | "(" term ")"

    var: NAME ("@" sort_name)?
    star: STAR | BOXSYM
    sort_name: NAME | STAR | BOXSYM

    declaration: NAME ("@" sort_name)? ":" term
    context: _seps? (declaration _seps)* declaration?
    _seps: (_COMMA | _NL)+

    NAME: /(?!λ)[^\W\d][\w′']*/
    STAR: "*"
    BOXSYM: "□"
    _LAMBDA: "\\" | "λ"
    _ARROW: "->" | "→"
    _COMMA: ","
    _NL: /\r?\n/
    COMMENT: /#[^\n]*/

    %import common.WS_INLINE
    %ignore WS_INLINE
    %ignore COMMENT
"""


@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(
        _GRAMMAR, start=["term", "context", "declaration"], parser="lalr", propagate_positions=True
    )


def _sort_symbol(token: Token) -> str:
    return BOX if str(token) == BOX_ALIAS else str(token)


def _meta_span(meta: Any, file: str) -> Optional[SourceSpan]:
    if meta is None or getattr(meta, "empty", True):
        return None
    return SourceSpan(file, (meta.line, meta.column), (meta.end_line, meta.end_column))


@v_args(meta=True)
class _ToKernel(Transformer):
    """Build kernel terms; identifiers naming a declared sort become sorts.

    The span of every term built is kept in ``spans``, keyed by ``id()``.
    """

    def __init__(self, sorts: AbstractSet[str], file: str) -> None:
        super().__init__()
        self._sorts = sorts
        self._file = file
        self.spans: Dict[int, SourceSpan] = {}

    def _located(self, meta: Any, t: Term) -> Term:
        span = _meta_span(meta, self._file)
        if span is not None:
            self.spans[id(t)] = span
        return t

    def var(self, meta, children):
        name = str(children[0])
        tag = children[1] if len(children) > 1 else None
        if tag is None and name in self._sorts:
            return self._located(meta, Sort(name))
        return self._located(meta, Var(name, tag))

    def star(self, meta, children):
        return self._located(meta, Sort(_sort_symbol(children[0])))

    def sort_name(self, meta, children):
        return _sort_symbol(children[0])

    def application(self, meta, children):
        return self._located(meta, App(children[0], children[1]))

    def arrow(self, meta, children):
        return self._located(meta, arrow(children[0], children[1]))

    def pi(self, meta, children):
        return self._located(meta, Prod(str(children[0]), children[1], children[2]))

    def lam(self, meta, children):
        return self._located(meta, Abs(str(children[0]), children[1], children[2]))

    def declaration(self, meta, children):
        name = children[0]
        tag = children[1] if len(children) == 3 else None
        return name, Declaration(str(name), children[-1], tag), _meta_span(meta, self._file)

    def context(self, meta, children):
        return list(children)


def _term_spans(t: Term, spans: Dict[int, SourceSpan], path: TermPath = ()) -> Dict[TermPath, SourceSpan]:
    """Spans of ``t`` and its subterms keyed by the term paths the kernel reports."""
    located: Dict[TermPath, SourceSpan] = {}
    stack = [(path, t)]
    while stack:
        at, node = stack.pop()
        span = spans.get(id(node))
        if span is not None:
            located[at] = span
        match node:
            case App(fun=fun, arg=arg):
                stack += [(at + ("fun",), fun), (at + ("arg",), arg)]
            case Prod(domain=a, codomain=b):
                stack += [(at + ("domain",), a), (at + ("codomain",), b)]
            case Abs(domain=a, body=b):
                stack += [(at + ("domain",), a), (at + ("body",), b)]
    return located


@dataclass
class SourceMap:
    """Where the parts of a checked judgement came from in the surface syntax.

    Kernel errors carry a location path: ``fun``/``arg``/``domain``/
    ``codomain``/``body`` steps into the subject, ``ctx/<x>/...`` into the
    declaration of ``x`` and ``type/...`` into the expected type. ``locate``
    maps such a path to the span of the longest prefix it knows.
    """

    term: Dict[TermPath, SourceSpan] = field(default_factory=dict)
    declarations: Dict[str, Dict[TermPath, SourceSpan]] = field(default_factory=dict)
    type_: Dict[TermPath, SourceSpan] = field(default_factory=dict)

    def locate(self, location: Sequence[str]) -> Optional[SourceSpan]:
        location = tuple(location)
        if location[:1] == ("ctx",):
            if len(location) < 2:
                return None
            table, rest = self.declarations.get(location[1], {}), location[2:]
        elif location[:1] == ("type",):
            table, rest = self.type_, location[1:]
        else:
            table, rest = self.term, location
        for cut in range(len(rest), -1, -1):
            span = table.get(rest[:cut])
            if span is not None:
                return span
        return None

    def attach(self, exc: PtsTypeError) -> PtsTypeError:
        """Fill in ``exc.span`` from its location unless it already has one."""
        if exc.span is None:
            exc.span = self.locate(exc.location)
        return exc


def _span_of(exc: UnexpectedInput, src: str, file: str) -> SourceSpan:
    line = getattr(exc, "line", -1)
    column = getattr(exc, "column", -1)
    if isinstance(exc, UnexpectedEOF) or line is None or line < 1:
        lines = src.split("\n")
        line, column = len(lines), len(lines[-1]) + 1
    return SourceSpan(file, (line, column), (line, column))


def _describe(exc: UnexpectedInput) -> str:
    if isinstance(exc, UnexpectedEOF):
        return "unexpected end of input"
    token = getattr(exc, "token", None)
    if token is not None:
        return f"unexpected {str(token)!r}"
    char = getattr(exc, "char", None)
    if char is not None:
        return f"unexpected character {char!r}"
    return "syntax error"


def _parse(src: str, start: str, sorts: Optional[AbstractSet[str]], file: str):
    try:
        tree = _parser().parse(src, start=start)
    except UnexpectedInput as exc:
        span = _span_of(exc, src, file)
        raise ParseError(f"cannot parse {start}: {_describe(exc)}", span) from exc
    transformer = _ToKernel(sorts if sorts is not None else DEFAULT_SORTS, file)
    try:
        return transformer.transform(tree), transformer.spans
    except VisitError as exc:
        span = _meta_span(getattr(exc.obj, "meta", None), file)
        raise ParseError(f"cannot build {start}: {exc.orig_exc}", span) from exc


def parse_term_located(
    src: str, sorts: Optional[AbstractSet[str]] = None, file: str = "<term>"
) -> Tuple[Term, Dict[TermPath, SourceSpan]]:
    """Parse a term and return it with the span of every subterm, keyed by term path."""
    t, spans = _parse(src.strip(), "term", sorts, file)
    return t, _term_spans(t, spans)


def parse_term(src: str, sorts: Optional[AbstractSet[str]] = None, file: str = "<term>") -> Term:
    """Parse a term; identifiers in ``sorts`` (default ``*`` and ``BOX``) are read as sorts."""
    return parse_term_located(src, sorts, file)[0]


def parse_declaration(
    src: str, sorts: Optional[AbstractSet[str]] = None, file: str = "<declaration>"
) -> Declaration:
    (_, decl, _), _ = _parse(src.strip(), "declaration", sorts, file)
    return decl


def parse_context_located(
    src: str, sorts: Optional[AbstractSet[str]] = None, file: str = "<context>"
) -> Tuple[Context, Dict[str, Dict[TermPath, SourceSpan]]]:
    """Parse a context and return it with per-declaration spans.

    For each variable the map holds the spans of its declared type by term
    path, with the root path covering the whole declaration.
    """
    entries: List[Tuple[Token, Declaration, Optional[SourceSpan]]]
    entries, spans = _parse(src, "context", sorts, file)
    located: Dict[str, Dict[TermPath, SourceSpan]] = {}
    for token, decl, decl_span in entries:
        if decl.var in located:
            start = (token.line, token.column)
            end = (token.end_line, token.end_column) if token.end_line else start
            raise DuplicateVariableError(decl.var, SourceSpan(file, start, end))
        located[decl.var] = _term_spans(decl.type_, spans)
        if decl_span is not None:
            located[decl.var][()] = decl_span
    context = Context(tuple(decl for _, decl, _ in entries))
    logger.debug(f"Parsed context with {len(context)} declarations from {file}")
    return context, located


def parse_context(
    src: str, sorts: Optional[AbstractSet[str]] = None, file: str = "<context>"
) -> Context:
    """Parse comma- or newline-separated declarations ``x : A``."""
    return parse_context_located(src, sorts, file)[0]


__all__ = [
    "BOX_ALIAS",
    "DEFAULT_SORTS",
    "SourceMap",
    "parse_context",
    "parse_context_located",
    "parse_declaration",
    "parse_term",
    "parse_term_located",
]
