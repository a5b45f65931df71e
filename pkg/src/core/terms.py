"""Term syntax: variables, sorts, dependent products, abstractions, applications.

Terms use named binders. Semantic identity is alpha-equivalence, which is
checked by comparing binders positionally instead of renaming.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import AbstractSet, Any, Dict, FrozenSet, Optional, Union

logger = logging.getLogger(__name__)

PRIME = "′"


@dataclass(frozen=True)
class Var:
    name: str
    # Membership in V_s; metadata only, ignored by equality and alpha_eq.
    sort_class: Optional[str] = field(default=None, compare=False)


@dataclass(frozen=True)
class Sort:
    s: str


@dataclass(frozen=True)
class Prod:
    """Dependent product ``(binder : domain) -> codomain``."""

    binder: str
    domain: "Term"
    codomain: "Term"


@dataclass(frozen=True)
class Abs:
    """Abstraction ``\\binder : domain. body``."""

    binder: str
    domain: "Term"
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


Term = Union[Var, Sort, Prod, Abs, App]


def is_term(value: Any) -> bool:
    return isinstance(value, (Var, Sort, Prod, Abs, App))


@lru_cache(maxsize=65536)
def free_vars(t: Term) -> FrozenSet[str]:
    """Exact set of free variable names of ``t``."""
    match t:
        case Var(name=name):
            return frozenset((name,))
        case Sort():
            return frozenset()
        case App(fun=fun, arg=arg):
            return free_vars(fun) | free_vars(arg)
        case Prod(binder=x, domain=a, codomain=b) | Abs(binder=x, domain=a, body=b):
            return free_vars(a) | (free_vars(b) - {x})
    raise TypeError(f"Not a term: {t!r}")


def fresh_name(base: str, avoid: AbstractSet[str]) -> str:
    """First of ``base, base′, base′′, ...`` that is not in ``avoid``."""
    candidate = base
    while candidate in avoid:
        candidate += PRIME
    return candidate


def alpha_eq(t: Term, u: Term) -> bool:
    """True iff ``t`` and ``u`` are equal up to consistent renaming of bound variables."""
    if t is u or t == u:
        return True
    return _alpha(t, u, {}, {}, 0)


def _alpha(t: Term, u: Term, env_t: Dict[str, int], env_u: Dict[str, int], depth: int) -> bool:
    # env maps a bound name to the depth of its binder; shadowing overwrites.
    match t, u:
        case Var(name=x), Var(name=y):
            bound_x = env_t.get(x)
            bound_y = env_u.get(y)
            if bound_x is None and bound_y is None:
                return x == y
            return bound_x == bound_y
        case Sort(s=s1), Sort(s=s2):
            return s1 == s2
        case App(), App():
            return (_alpha(t.fun, u.fun, env_t, env_u, depth)
                    and _alpha(t.arg, u.arg, env_t, env_u, depth))
        case (Prod(), Prod()) | (Abs(), Abs()):
            if not _alpha(t.domain, u.domain, env_t, env_u, depth):
                return False
            inner_t = {**env_t, t.binder: depth}
            inner_u = {**env_u, u.binder: depth}
            return _alpha(_scope(t), _scope(u), inner_t, inner_u, depth + 1)
    return False


def _scope(t: Union[Prod, Abs]) -> Term:
    return t.codomain if isinstance(t, Prod) else t.body


def _rebuild_binder(t: Union[Prod, Abs], binder: str, domain: Term, scope: Term) -> Term:
    if isinstance(t, Prod):
        return Prod(binder, domain, scope)
    return Abs(binder, domain, scope)


def substitute(t: Term, x: str, u: Term) -> Term:
    """Capture-avoiding ``(u/x)t``."""
    return _substitute(t, x, u, free_vars(u), keep_tags=False)


def rename(t: Term, old: str, new: str) -> Term:
    """Rename free occurrences of ``old`` to ``new``, keeping their sort tags."""
    if old == new:
        return t
    replacement = Var(new)
    return _substitute(t, old, replacement, frozenset((new,)), keep_tags=True)


def _substitute(t: Term, x: str, u: Term, fv_u: FrozenSet[str], keep_tags: bool) -> Term:
    if x not in free_vars(t):
        return t
    match t:
        case Var(name=name):
            # name == x here, since x is free in t
            if keep_tags and isinstance(u, Var):
                return Var(u.name, t.sort_class)
            return u
        case App(fun=fun, arg=arg):
            return App(
                _substitute(fun, x, u, fv_u, keep_tags),
                _substitute(arg, x, u, fv_u, keep_tags),
            )
        case Prod() | Abs():
            domain = _substitute(t.domain, x, u, fv_u, keep_tags)
            binder = t.binder
            scope = _scope(t)
            if binder == x:
                return _rebuild_binder(t, binder, domain, scope)
            if binder in fv_u:
                fresh = fresh_name(binder, fv_u | free_vars(scope) | {x})
                logger.debug(f"Renaming bound {binder} to {fresh} to avoid capture")
                scope = rename(scope, binder, fresh)
                binder = fresh
            return _rebuild_binder(t, binder, domain, _substitute(scope, x, u, fv_u, keep_tags))
    raise TypeError(f"Not a term: {t!r}")


def term_size(t: Term) -> int:
    """Number of constructors in ``t``."""
    match t:
        case Var() | Sort():
            return 1
        case App(fun=fun, arg=arg):
            return 1 + term_size(fun) + term_size(arg)
        case Prod() | Abs():
            return 1 + term_size(t.domain) + term_size(_scope(t))
    raise TypeError(f"Not a term: {t!r}")


def arrow(domain: Term, codomain: Term, binder: str = "_") -> Prod:
    """Non-dependent product ``domain -> codomain`` with a binder not free in codomain."""
    return Prod(fresh_name(binder, free_vars(codomain)), domain, codomain)


def apply(head: Term, *args: Term) -> Term:
    """Left-nested application ``head a1 ... an``."""
    result = head
    for arg in args:
        result = App(result, arg)
    return result


__all__ = [
    "Abs",
    "App",
    "PRIME",
    "Prod",
    "Sort",
    "Term",
    "Var",
    "alpha_eq",
    "apply",
    "arrow",
    "free_vars",
    "fresh_name",
    "is_term",
    "rename",
    "substitute",
    "term_size",
]
