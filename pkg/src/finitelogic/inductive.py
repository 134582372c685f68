"""Inductive string predicates (base, generation, closure) evaluated by saturation."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

__all__ = ["InductivePredicate", "eval_inductive", "saturate", "numeral_predicate",
           "letter_predicate", "AlphabetError"]


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True)
class InductivePredicate:
    """A predicate fixed by base strings and generation rules.

    Each generation rule maps a string already in the predicate to the
    strings it produces.  The closure clause ("nothing else") is realised by
    taking the least fixed point.
    """

    name: str
    base_clauses: tuple
    generation_clauses: tuple = ()
    alphabet: Optional[tuple] = None
    closure: bool = True
    canonicalize: Optional[Callable[[str], str]] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "base_clauses", tuple(self.base_clauses))
        object.__setattr__(self, "generation_clauses", tuple(self.generation_clauses))
        if self.alphabet is not None:
            object.__setattr__(self, "alphabet", tuple(self.alphabet))

    def check_alphabet(self, s: str) -> None:
        if self.alphabet is None:
            return
        tokens = sorted(self.alphabet, key=len, reverse=True)
        pattern = "(?:" + "|".join(re.escape(t) for t in tokens) + ")*"
        if not re.fullmatch(pattern, s):
            raise AlphabetError(f"{s!r} is not a string over {list(self.alphabet)}")


def saturate(p: InductivePredicate, bound: int) -> frozenset:
    """All members of length <= bound (least fixed point of the clauses)."""
    members = {b for b in p.base_clauses if len(b) <= bound}
    frontier = list(sorted(members))
    while frontier:
        nxt = []
        for s in frontier:
            for rule in p.generation_clauses:
                for t in rule(s):
                    if len(t) <= bound and t not in members:
                        members.add(t)
                        nxt.append(t)
        frontier = sorted(nxt)
    return frozenset(members)


def eval_inductive(p: InductivePredicate, s: str, bound: Optional[int] = None) -> bool:
    p.check_alphabet(s)
    if p.canonicalize is not None:
        s = p.canonicalize(s)
    bound = len(s) if bound is None else bound
    if len(s) > bound:
        raise ValueError(f"string of length {len(s)} exceeds the bound {bound}")
    return s in saturate(p, bound)


def numeral_predicate(zero: str = "0", tick: str = "'") -> InductivePredicate:
    """NUMERAL: "0" is a numeral; if X is a numeral so is X'."""
    return InductivePredicate("NUMERAL", (zero,), (lambda x: (x + tick,),), alphabet=(zero, tick))


def letter_predicate(letters: Sequence[str]) -> InductivePredicate:
    return InductivePredicate("LETTER", tuple(letters), (), alphabet=tuple(letters))
