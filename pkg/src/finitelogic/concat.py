"""Finite concatenation theories CONCAT_n and nested-model checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .inductive import numeral_predicate, saturate
from .structures import FiniteStructure, Theory, evaluate
from .syntax import (And, Atom, Const, Eq, Exists, Forall, Iff, Implies, Not, Or,
                     Signature, Var, disj, to_text)

__all__ = ["generate_concat_n", "simplified_concat2", "check_nested", "NestedReport",
           "strings_upto", "InstanceCapExceeded", "DEFAULT_INSTANCE_CAP"]

DEFAULT_INSTANCE_CAP = 200_000


class InstanceCapExceeded(ValueError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"CONCAT_n would need {count} instances, over the cap of {cap}")


def strings_upto(letters: Sequence[str], n: int) -> list:
    """Non-empty strings over ``letters`` of length <= n, shortest first."""
    out = []
    for k in range(1, n + 1):
        out.extend("".join(p) for p in itertools.product(letters, repeat=k))
    return out


def generate_concat_n(letters: Sequence[str], n: int, *,
                      cap: int = DEFAULT_INSTANCE_CAP, defined: bool = True) -> Theory:
    """Theory of concatenation for strings up to length ``n``.

    Axiom groups: universe enumeration, one negated existential per
    overflowing pair, and the full list of positive ``C`` instances.  With
    ``defined`` the structure also carries LETTER and, when the alphabet has
    ``0`` and ``'``, NUMERAL; a partial function ``c`` mirrors ``C``.
    """
    letters = tuple(letters)
    if n < 1:
        raise ValueError("n must be >= 1")
    if not letters:
        raise ValueError("alphabet must be non-empty")
    count = sum(len(letters) ** k for k in range(1, n + 1))
    if count * count + count > cap:
        raise InstanceCapExceeded(count * count + count, cap)
    # token-tuples give exact lengths even for multi-character letters
    tuples = [p for k in range(1, n + 1) for p in itertools.product(letters, repeat=k)]
    universe = ["".join(p) for p in tuples]
    if len(set(universe)) != len(universe):
        raise ValueError("alphabet tokens are not uniquely decodable")
    length = {"".join(p): len(p) for p in tuples}

    instances, overflow = [], []
    for x in universe:
        for y in universe:
            if length[x] + length[y] <= n:
                instances.append((x, y, x + y))
            else:
                overflow.append((x, y))

    preds = [("C", 3)]
    relations = {"C": frozenset(instances)}
    if defined:
        preds.append(("LETTER", 1))
        relations["LETTER"] = frozenset((a,) for a in letters)
        if "0" in letters and "'" in letters:
            preds.append(("NUMERAL", 1))
            members = saturate(numeral_predicate(), n)
            relations["NUMERAL"] = frozenset((m,) for m in universe if m in members)
    sig = Signature(letters=letters, constants=tuple(universe),
                    functions=(("c", 2),), predicates=tuple(preds))
    structure = FiniteStructure(
        tuple(universe), {u: u for u in universe},
        {"c": {(x, y): z for x, y, z in instances}}, relations)

    x, y, z = Var("x"), Var("y"), Var("z")
    axioms = [Forall("x", disj([Eq(x, Const(u)) for u in universe]))]
    axioms += [Not(Exists("z", Atom("C", (Const(a), Const(b), z)))) for a, b in overflow]
    axioms += [Atom("C", (Const(a), Const(b), Const(c))) for a, b, c in instances]
    if defined:
        axioms.append(Forall("x", Iff(Atom("LETTER", (x,)), disj([Eq(x, Const(a)) for a in letters]))))
        if "NUMERAL" in relations:
            axioms.append(Atom("NUMERAL", (Const("0"),)))
            axioms.append(Forall("x", Forall("y", Implies(
                And(Atom("NUMERAL", (x,)), Atom("C", (x, Const("'"), y))),
                Atom("NUMERAL", (y,))))))
    return Theory(sig, tuple(axioms), structure, name=f"CONCAT_{n}")


def simplified_concat2() -> Theory:
    """The three-element CONCAT_2 example with its three axioms, verbatim."""
    elems = ("0", "'", "0'")
    sig = Signature(letters=("0", "'"), constants=elems, predicates=(("C", 3),))
    x, y, z = Var("x"), Var("y"), Var("z")
    axioms = (
        Forall("x", disj([Eq(x, Const(e)) for e in elems])),
        Forall("x", Forall("y", Implies(
            Or(Not(Eq(x, Const("0"))), Not(Eq(y, Const("'")))),
            Not(Exists("z", Atom("C", (x, y, z))))))),
        Atom("C", (Const("0"), Const("'"), Const("0'"))),
    )
    structure = FiniteStructure(elems, {e: e for e in elems}, {},
                                {"C": frozenset({("0", "'", "0'")})})
    return Theory(sig, axioms, structure, name="CONCAT_2 (simplified)")


# ------------------------------------------------------------ nested models

@dataclass
class NestedReport:
    m: int
    n: int
    relativized: bool
    checked: int = 0
    divergences: list = field(default_factory=list)  # (sentence text, verdict in L_m, verdict in L_n)

    @property
    def passed(self) -> bool:
        return not self.divergences

    @property
    def first_divergence(self):
        return self.divergences[0] if self.divergences else None


def _nested_sentences(letters, depth: int) -> list:
    """Prenex sentences with at most ``depth`` quantifiers over a single literal.

    Literal arguments are the bound variables and the letters.
    """
    variables = ["x", "y", "z"][:depth]
    out = []
    for k in range(1, depth + 1):
        vs = variables[:k]
        terms = [Var(v) for v in vs] + [Const(a) for a in letters]
        atoms = [Atom("C", args) for args in itertools.product(terms, repeat=3)]
        atoms += [Eq(a, b) for a, b in itertools.product(terms, repeat=2)]
        for atom in atoms:
            for lit in (atom, Not(atom)):
                for quants in itertools.product((Exists, Forall), repeat=k):
                    f = lit
                    for q, v in reversed(list(zip(quants, vs))):
                        f = q(v, f)
                    out.append(f)
    out.sort(key=lambda f: (_qdepth(f), to_text(f)))
    return out


def _qdepth(f) -> int:
    d = 0
    while isinstance(f, (Exists, Forall)):
        d, f = d + 1, f.body
    return d


def _eval_mixed(structure, bounded, f, env) -> bool:
    """Universal quantifiers range over ``bounded``; existentials over the whole universe."""
    if isinstance(f, Forall):
        for e in bounded:
            env[f.var] = e
            if not _eval_mixed(structure, bounded, f.body, env):
                return False
        return True
    if isinstance(f, Exists):
        for e in structure.universe:
            env[f.var] = e
            if _eval_mixed(structure, bounded, f.body, env):
                return True
        return False
    return evaluate(structure, f, env)


def check_nested(lm: Theory, ln: Theory, m: int, n: int, depth: int = 2,
                 relativized: bool = True) -> NestedReport:
    """Compare verdicts of bounded sentences about strings of length <= m.

    Relativized: every quantifier ranges over the length-<=m strings.
    Unrelativized: universals are bounded but existential witnesses come
    from each theory's whole universe.
    """
    if m > n:
        raise ValueError("need m <= n")
    letters = lm.sig.letters
    if tuple(letters) != tuple(ln.sig.letters):
        raise ValueError("theories use different alphabets")
    short = strings_upto(letters, m)
    report = NestedReport(m, n, relativized)
    sm, sn = lm.structure, ln.structure
    if relativized:
        sm, sn = sm.restrict_domain(short), sn.restrict_domain(short)
    for f in _nested_sentences(letters, depth):
        if relativized:
            a, b = evaluate(sm, f), evaluate(sn, f)
        else:
            a, b = _eval_mixed(sm, short, f, {}), _eval_mixed(sn, short, f, {})
        report.checked += 1
        if a != b:
            report.divergences.append((to_text(f), a, b))
    return report
