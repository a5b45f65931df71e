"""JSON form of derivation trees.

Shape, with stable field order::

    {"rule": "var'",
     "conclusion": {"ctx": [["nat", "*"], ["z", "nat"]], "term": "z", "type": "nat"},
     "side": {"sort": "*"},
     "premises": [...]}

Terms are written in the ASCII surface syntax; a tagged declaration is
written ``["x@*", "nat"]``. A subtree used by several parents is written
once, with an ``"id"`` field placed first, and every later use is written
as ``{"ref": id}``. Ids are numbered in pre-order, so a reference always
follows its definition.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import AbstractSet, Any, Dict, Optional, Union

from core.contexts import Context, Declaration
from core.derivations import DerivationTree, Judgement, RuleName
from core.errors import ParseError
from core.terms import is_term
from frontend.printer import print_term
from frontend.syntax import parse_declaration, parse_term

logger = logging.getLogger(__name__)

_TUPLE_SIDE_KEYS = ("axiom", "rule")
_TERM_SIDE_KEYS = ("from", "to")


def _side_to_json(side: Dict[str, Any]) -> Dict[str, Any]:
    data: Dict[str, Any] = {}
    for key, value in side.items():
        if isinstance(value, tuple):
            value = list(value)
        elif is_term(value):
            value = print_term(value)
        data[key] = value
    return data


def _side_from_json(side: Dict[str, Any], sorts: Optional[AbstractSet[str]]) -> Dict[str, Any]:
    restored: Dict[str, Any] = {}
    for key, value in side.items():
        if key in _TUPLE_SIDE_KEYS and isinstance(value, list):
            value = tuple(value)
        elif key in _TERM_SIDE_KEYS and isinstance(value, str):
            value = parse_term(value, sorts)
        restored[key] = value
    return restored


def _declaration_name(decl: Declaration) -> str:
    return decl.var if decl.sort_class is None else f"{decl.var}@{decl.sort_class}"


class _Writer:
    def __init__(self, tree: DerivationTree) -> None:
        self.shared = tree.shared_node_ids()
        self.ids: Dict[int, int] = {}

    def write(self, tree: DerivationTree) -> Dict[str, Any]:
        known = self.ids.get(id(tree))
        if known is not None:
            return {"ref": known}
        data: Dict[str, Any] = {}
        if id(tree) in self.shared:
            data["id"] = self.ids[id(tree)] = len(self.ids) + 1
        judgement = tree.conclusion
        data["rule"] = tree.rule.value
        data["conclusion"] = {
            "ctx": [[_declaration_name(d), print_term(d.type_)] for d in judgement.ctx],
            "term": print_term(judgement.subject),
            "type": print_term(judgement.type_),
        }
        data["side"] = _side_to_json(tree.side)
        data["premises"] = [self.write(premise) for premise in tree.premises]
        return data


class _Reader:
    def __init__(self, sorts: Optional[AbstractSet[str]]) -> None:
        self.sorts = sorts
        self.nodes: Dict[int, DerivationTree] = {}

    def read(self, data: Dict[str, Any]) -> DerivationTree:
        if "ref" in data:
            node = self.nodes.get(data["ref"])
            if node is None:
                raise ParseError(f"derivation JSON refers to unknown node {data['ref']!r}")
            return node
        rule = RuleName(data["rule"])
        conclusion = data["conclusion"]
        decls = tuple(
            parse_declaration(f"{name} : {type_src}", self.sorts)
            for name, type_src in conclusion["ctx"]
        )
        judgement = Judgement(
            Context(decls),
            parse_term(conclusion["term"], self.sorts),
            parse_term(conclusion["type"], self.sorts),
        )
        premises = tuple(self.read(p) for p in data.get("premises", []))
        node = DerivationTree(rule, judgement, premises, _side_from_json(data.get("side", {}), self.sorts))
        if "id" in data:
            if data["id"] in self.nodes:
                raise ParseError(f"derivation JSON defines node {data['id']!r} twice")
            self.nodes[data["id"]] = node
        return node


def tree_to_json(tree: DerivationTree) -> Dict[str, Any]:
    return _Writer(tree).write(tree)


def tree_from_json(data: Dict[str, Any], sorts: Optional[AbstractSet[str]] = None) -> DerivationTree:
    """Rebuild a tree written by tree_to_json; raises ParseError on malformed input."""
    try:
        return _Reader(sorts).read(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed derivation JSON: {exc}") from exc


def write_derivation(path: Union[str, Path], tree: DerivationTree) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(tree_to_json(tree), ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    logger.info(f"Derivation with {tree.size()} distinct nodes written to {path}")
    return path


def read_derivation(path: Union[str, Path], sorts: Optional[AbstractSet[str]] = None) -> DerivationTree:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc.msg}") from exc
    return tree_from_json(data, sorts)


__all__ = ["read_derivation", "tree_from_json", "tree_to_json", "write_derivation"]
