"""Beta-reduction with an explicit step budget, and the conversion test used by (conv)."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from core.config import resolve_default_fuel
from core.errors import FuelExhausted
from core.terms import Abs, App, Prod, Sort, Term, Var, alpha_eq, substitute

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Fuel:
    """Maximum number of beta-steps a single reduction may take; 0 forbids reduction."""

    max_steps: int = field(default_factory=resolve_default_fuel)

    def __post_init__(self) -> None:
        if self.max_steps < 0:
            raise ValueError(f"Fuel must be non-negative, got {self.max_steps}")


class Conversion(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNDECIDED = "Undecided"


def beta_step(t: Term) -> Optional[Term]:
    """Contract the leftmost-outermost redex, or return None on a normal form."""
    match t:
        case App(fun=Abs(binder=x, body=body), arg=arg):
            return substitute(body, x, arg)
        case App(fun=fun, arg=arg):
            reduced = beta_step(fun)
            if reduced is not None:
                return App(reduced, arg)
            reduced = beta_step(arg)
            if reduced is not None:
                return App(fun, reduced)
            return None
        case Prod(binder=x, domain=a, codomain=b):
            reduced = beta_step(a)
            if reduced is not None:
                return Prod(x, reduced, b)
            reduced = beta_step(b)
            return Prod(x, a, reduced) if reduced is not None else None
        case Abs(binder=x, domain=a, body=b):
            reduced = beta_step(a)
            if reduced is not None:
                return Abs(x, reduced, b)
            reduced = beta_step(b)
            return Abs(x, a, reduced) if reduced is not None else None
        case Var() | Sort():
            return None
    raise TypeError(f"Not a term: {t!r}")


def normalize(t: Term, fuel: Optional[Fuel] = None) -> Term:
    """Beta-normal form of ``t`` within the budget; raises FuelExhausted otherwise."""
    budget = (fuel or Fuel()).max_steps
    current = t
    steps = 0
    while True:
        reduced = beta_step(current)
        if reduced is None:
            return current
        if steps == budget:
            raise FuelExhausted(current, steps)
        current = reduced
        steps += 1


def _spine(t: Term) -> Tuple[Term, List[Term]]:
    args: List[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def whnf(t: Term, fuel: Optional[Fuel] = None) -> Term:
    """Weak-head normal form: contract head redexes only."""
    budget = (fuel or Fuel()).max_steps
    head, args = _spine(t)
    steps = 0
    while isinstance(head, Abs) and args:
        if steps == budget:
            raise FuelExhausted(_unspine(head, args), steps)
        head, rest = _spine(substitute(head.body, head.binder, args[0]))
        args = rest + args[1:]
        steps += 1
    if steps == 0:
        return t
    return _unspine(head, args)


def _unspine(head: Term, args: List[Term]) -> Term:
    for arg in args:
        head = App(head, arg)
    return head


def convertible(a: Term, b: Term, fuel: Optional[Fuel] = None) -> Conversion:
    """Decide ``a ≡ b`` by normalising both sides and comparing up to alpha."""
    fuel = fuel or Fuel()
    try:
        normal_a = normalize(a, fuel)
        normal_b = normalize(b, fuel)
    except FuelExhausted as exc:
        logger.warning(f"Conversion undecided: {exc}")
        return Conversion.UNDECIDED
    return Conversion.YES if alpha_eq(normal_a, normal_b) else Conversion.NO


__all__ = [
    "Conversion",
    "Fuel",
    "beta_step",
    "convertible",
    "normalize",
    "whnf",
]
