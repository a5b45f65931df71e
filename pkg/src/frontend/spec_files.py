"""PTS spec files: ``sort``, ``axiom`` and ``rule`` lines with ``#`` comments.

Example (the simply typed instance)::

    sort *
    sort BOX
    axiom * : BOX
    rule (*, *) : *
"""

from __future__ import annotations

import logging
from functools import lru_cache
from pathlib import Path
from typing import Optional, Union

from lark import Lark, Transformer
from lark.exceptions import UnexpectedInput

from core.config import metadata_dir
from core.errors import ParseError, SourceSpan
from core.pts_spec import BOX, PtsSpec, builtin_instance, ensure_valid_spec

logger = logging.getLogger(__name__)

SPEC_SUFFIX = ".pts"

_GRAMMAR = r"""
    start: _seps? (_statement _seps)* _statement?
    _seps: _NL+

    _statement: sort_decl
              | axiom_decl
              | rule_decl

    sort_decl: "sort" sort_id
    axiom_decl: "axiom" sort_id ":" sort_id
    rule_decl: "rule" "(" sort_id "," sort_id ")" ":" sort_id

    sort_id: NAME | STAR | BOXSYM

    NAME: /[^\W\d][\w′']*/
    STAR: "*"
    BOXSYM: "□"
    _NL: /\r?\n/
    COMMENT: /#[^\n]*/

    %import common.WS_INLINE
    %ignore WS_INLINE
    %ignore COMMENT
"""


@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(_GRAMMAR, parser="lalr")


class _ToSpecParts(Transformer):
    def sort_id(self, children):
        text = str(children[0])
        return BOX if text == "□" else text

    def sort_decl(self, children):
        return ("sort", tuple(children))

    def axiom_decl(self, children):
        return ("axiom", tuple(children))

    def rule_decl(self, children):
        return ("rule", tuple(children))

    def start(self, children):
        return list(children)


def parse_spec(src: str, name: str = "spec", file: str = "<spec>") -> PtsSpec:
    """Parse and validate a spec; raises ParseError or SpecValidationError."""
    try:
        tree = _parser().parse(src)
    except UnexpectedInput as exc:
        line = max(getattr(exc, "line", 1) or 1, 1)
        column = max(getattr(exc, "column", 1) or 1, 1)
        raise ParseError(
            "cannot parse spec: expected `sort`, `axiom` or `rule` statements",
            SourceSpan(file, (line, column), (line, column)),
        ) from exc
    sorts, axioms, rules = [], [], []
    for kind, payload in _ToSpecParts().transform(tree):
        if kind == "sort":
            sorts.append(payload[0])
        elif kind == "axiom":
            axioms.append(payload)
        else:
            rules.append(payload)
    spec = PtsSpec.build(name, sorts, axioms, rules)
    return ensure_valid_spec(spec)


def load_spec(name_or_path: Union[str, Path], search_dir: Optional[Path] = None) -> PtsSpec:
    """Resolve a built-in instance name, a shipped spec name or a spec file path."""
    key = str(name_or_path)
    builtin = builtin_instance(key)
    if builtin is not None:
        return builtin

    path = Path(key)
    if not path.exists():
        shipped = (search_dir or metadata_dir() / "pts") / f"{key}{SPEC_SUFFIX}"
        if not shipped.exists():
            raise FileNotFoundError(f"Unknown PTS spec {key!r}: not a built-in name or a file")
        path = shipped

    logger.info(f"Loading PTS spec from {path}")
    return parse_spec(path.read_text(encoding="utf-8"), name=path.stem, file=str(path))


__all__ = ["SPEC_SUFFIX", "load_spec", "parse_spec"]
