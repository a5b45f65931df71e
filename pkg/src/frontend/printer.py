"""Pretty-printing of terms, contexts and derivation trees."""

from __future__ import annotations

from typing import Dict, List, Optional

from core.contexts import Context, Declaration
from core.derivations import DerivationTree
from core.terms import Abs, App, Prod, Sort, Term, Var, free_vars

# Precedence levels: a subterm printed at a level wraps itself in parentheses
# when it binds more loosely than that level allows.
_TERM, _APP, _ATOM = 0, 1, 2


def _level(t: Term) -> int:
    if isinstance(t, (Var, Sort)):
        return _ATOM
    if isinstance(t, App):
        return _APP
    return _TERM


def _is_anonymous(binder: str) -> bool:
    # Binders introduced by ``A -> B`` sugar and their freshened variants.
    return binder.startswith("_")


def _print(t: Term, level: int) -> str:
    text = _print_bare(t)
    return f"({text})" if _level(t) < level else text


def _print_bare(t: Term) -> str:
    match t:
        case Var(name=name, sort_class=tag):
            return name if tag is None else f"{name}@{tag}"
        case Sort(s=s):
            return s
        case App(fun=fun, arg=arg):
            return f"{_print(fun, _APP)} {_print(arg, _ATOM)}"
        case Prod(binder=x, domain=a, codomain=b):
            if _is_anonymous(x) and x not in free_vars(b):
                return f"{_print(a, _APP)} -> {_print(b, _TERM)}"
            return f"({x} : {_print(a, _TERM)}) -> {_print(b, _TERM)}"
        case Abs(binder=x, domain=a, body=b):
            return f"\\{x} : {_print(a, _TERM)}. {_print(b, _TERM)}"
    raise TypeError(f"Not a term: {t!r}")


def print_term(t: Term) -> str:
    """Render ``t`` in the ASCII surface syntax with minimal parentheses."""
    return _print(t, _TERM)


def print_declaration(decl: Declaration) -> str:
    name = decl.var if decl.sort_class is None else f"{decl.var}@{decl.sort_class}"
    return f"{name} : {print_term(decl.type_)}"


def print_context(ctx: Context) -> str:
    return ", ".join(print_declaration(decl) for decl in ctx)


def print_judgement(tree: DerivationTree) -> str:
    judgement = tree.conclusion
    ctx = print_context(judgement.ctx)
    prefix = f"{ctx} " if ctx else ""
    return f"{prefix}|- {print_term(judgement.subject)} : {print_term(judgement.type_)}"


def print_tree(tree: DerivationTree, indent: str = "  ", max_depth: Optional[int] = None) -> str:
    """Indented rule-tree sketch, conclusion first, premises below.

    A subtree used by several parents is printed once with a ``[#n]`` label;
    later uses print ``(see #n)`` in its place. Premises deeper than
    ``max_depth`` are elided as ``...``.
    """
    shared = tree.shared_node_ids()
    labels: Dict[int, int] = {}
    lines: List[str] = []
    stack = [(0, tree)]
    while stack:
        depth, node = stack.pop()
        pad = indent * depth
        label = labels.get(id(node))
        if label is not None:
            lines.append(f"{pad}({node.rule.value}) (see #{label})")
            continue
        prefix = ""
        if id(node) in shared:
            label = labels[id(node)] = len(labels) + 1
            prefix = f"[#{label}] "
        lines.append(f"{pad}{prefix}({node.rule.value}) {print_judgement(node)}")
        if not node.premises:
            continue
        if max_depth is not None and depth >= max_depth:
            lines.append(f"{pad}{indent}...")
            continue
        stack.extend((depth + 1, premise) for premise in reversed(node.premises))
    return "\n".join(lines)


__all__ = [
    "print_context",
    "print_declaration",
    "print_judgement",
    "print_term",
    "print_tree",
]
