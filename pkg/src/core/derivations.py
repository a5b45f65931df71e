"""Judgements and explicit derivation trees for the systems T and T′."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterator, Mapping, Tuple

from core.contexts import Context
from core.terms import Term


class RuleName(str, enum.Enum):
    SORT_PRIME = "sort'"
    VAR_PRIME = "var'"
    SORT = "sort"
    START = "start"
    WEAK = "weak"
    PROD = "prod"
    ABS = "abs"
    APP = "app"
    CONV = "conv"


TPRIME_RULES = frozenset(
    {
        RuleName.SORT_PRIME,
        RuleName.VAR_PRIME,
        RuleName.PROD,
        RuleName.ABS,
        RuleName.APP,
        RuleName.CONV,
    }
)
T_RULES = frozenset(
    {
        RuleName.SORT,
        RuleName.START,
        RuleName.WEAK,
        RuleName.PROD,
        RuleName.ABS,
        RuleName.APP,
        RuleName.CONV,
    }
)

RULE_ARITY: Mapping[RuleName, int] = {
    RuleName.SORT_PRIME: 0,
    RuleName.SORT: 0,
    RuleName.VAR_PRIME: 1,
    RuleName.START: 1,
    RuleName.WEAK: 2,
    RuleName.PROD: 2,
    RuleName.APP: 2,
    RuleName.CONV: 2,
    RuleName.ABS: 3,
}


@dataclass(frozen=True)
class Judgement:
    """``ctx ⊢ subject : type_``."""

    ctx: Context
    subject: Term
    type_: Term


@dataclass(frozen=True, eq=False)
class DerivationTree:
    """One rule instance with its conclusion and premise subtrees.

    ``side`` holds the side-condition data: ``axiom`` (s1, s2) for the sort
    rules, ``rule`` (s1, s2, s3) and ``binder`` for prod/abs, ``sort`` for
    var′/start/weak/conv, and the conversion pair ``from``/``to`` for conv.
    Subtrees may be shared between parents.
    """

    rule: RuleName
    conclusion: Judgement
    premises: Tuple["DerivationTree", ...] = ()
    side: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "premises", tuple(self.premises))

    def nodes(self) -> Iterator[Tuple[Tuple[int, ...], "DerivationTree"]]:
        """Pre-order walk yielding ``(path, node)``; a path lists premise indices.

        Each distinct node is yielded once, at the first path that reaches it,
        so the walk is linear in the number of nodes even when subtrees are
        shared.
        """
        seen = set()
        stack = [((), self)]
        while stack:
            path, node = stack.pop()
            if id(node) in seen:
                continue
            seen.add(id(node))
            yield path, node
            for index in range(len(node.premises) - 1, -1, -1):
                stack.append((path + (index,), node.premises[index]))

    def size(self) -> int:
        """Number of distinct nodes."""
        return sum(1 for _ in self.nodes())

    def expanded_size(self) -> int:
        """Number of nodes once every shared subtree is copied out, computed without expanding."""
        counts: Dict[int, int] = {}
        stack = [(self, False)]
        while stack:
            node, premises_done = stack.pop()
            if id(node) in counts:
                continue
            if premises_done:
                counts[id(node)] = 1 + sum(counts[id(p)] for p in node.premises)
                continue
            stack.append((node, True))
            stack.extend((p, False) for p in node.premises if id(p) not in counts)
        return counts[id(self)]

    def shared_node_ids(self) -> FrozenSet[int]:
        """``id()`` of every node used more than once as a premise."""
        parents: Dict[int, int] = {}
        for _, node in self.nodes():
            for premise in node.premises:
                parents[id(premise)] = parents.get(id(premise), 0) + 1
        return frozenset(node_id for node_id, count in parents.items() if count > 1)

    def rules_used(self) -> frozenset:
        return frozenset(node.rule for _, node in self.nodes())

    def with_conclusion_type(self, type_: Term) -> "DerivationTree":
        judgement = Judgement(self.conclusion.ctx, self.conclusion.subject, type_)
        return DerivationTree(self.rule, judgement, self.premises, dict(self.side))


def render_path(path: Tuple[int, ...]) -> str:
    return "root" if not path else "root/" + "/".join(str(i) for i in path)


__all__ = [
    "DerivationTree",
    "Judgement",
    "RULE_ARITY",
    "RuleName",
    "TPRIME_RULES",
    "T_RULES",
    "render_path",
]
