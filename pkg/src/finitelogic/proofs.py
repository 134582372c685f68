"""Bounded Hilbert-style proof search: axioms, modus ponens, universal instantiation.

The search never claims unprovability: exhausting the bound yields
``not-found-within-bound``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .derivation import Derivation, Step, replay
from .inductive import InductivePredicate, saturate
from .structures import Theory
from .syntax import (Const, Forall, Formula, Implies, free_vars, parse, substitute,
                     to_text, is_sentence)

__all__ = ["ProofResult", "prov", "replay_proof", "proof_predicate", "ends",
           "proof_string", "prov_via_strings", "PROVED", "NOT_FOUND"]

PROVED = "proved"
NOT_FOUND = "not-found-within-bound"


@dataclass(frozen=True)
class ProofResult:
    status: str
    derivation: Optional[Derivation] = None
    explored: int = 0

    @property
    def proved(self) -> bool:
        return self.status == PROVED


def _default_pool(th: Theory) -> tuple:
    return tuple(Const(c) for c in th.sig.constants)


def _one_step(known: dict, axioms, pool):
    """Candidates derivable in one step from ``known``: (formula, rule, premises, params)."""
    for a in axioms:
        if a not in known:
            yield a, "axiom", (), ()
    forms = sorted(known, key=to_text)
    for imp in forms:
        if isinstance(imp, Implies) and imp.left in known:
            yield imp.right, "mp", (imp.left, imp), ()
    for f in forms:
        if isinstance(f, Forall):
            for t in pool:
                yield substitute(f.body, f.var, t), "inst", (f,), (("term", t),)


def prov(th: Theory, s: Formula, proof_length_bound: int,
         term_pool: Optional[Sequence] = None) -> ProofResult:
    """Search for a derivation of ``s`` with at most ``proof_length_bound`` lines."""
    if not is_sentence(s):
        raise ValueError(f"not a sentence: {to_text(s)}")
    pool = tuple(term_pool) if term_pool is not None else _default_pool(th)
    # formula -> (rule, premises, params, support)
    known: dict = {}
    for _ in range(proof_length_bound):
        if s in known:
            break
        added = {}
        for f, rule, prem, params in _one_step(known, th.axioms, pool):
            support = frozenset({f}).union(*(known[p][3] for p in prem))
            if len(support) > proof_length_bound:
                continue
            old = known.get(f) or added.get(f)
            if old is None or len(support) < len(old[3]):
                added[f] = (rule, prem, params, support)
        added = {f: v for f, v in added.items()
                 if f not in known or len(v[3]) < len(known[f][3])}
        if not added:
            break
        known.update(added)
    if s not in known:
        return ProofResult(NOT_FOUND, None, len(known))
    return ProofResult(PROVED, _linearize(known, s), len(known))


def _linearize(known: dict, goal) -> Derivation:
    order: list = []
    index: dict = {}

    def emit(f):
        if f in index:
            return
        rule, prem, params, _ = known[f]
        for p in prem:
            emit(p)
        order.append(Step(f, rule, tuple(index[p] for p in prem), params))
        index[f] = len(order)

    emit(goal)
    return Derivation(tuple(order), render=to_text)


def replay_proof(th: Theory, d: Derivation) -> bool:
    axioms = set(th.axioms)

    def axiom(step, prem):
        return step.sentence in axioms

    def mp(step, prem):
        a, imp = prem
        return isinstance(imp, Implies) and imp.left == a and imp.right == step.sentence

    def inst(step, prem):
        (f,) = prem
        t = step.param_dict["term"]
        return (isinstance(f, Forall) and not free_vars(t)
                and substitute(f.body, f.var, t) == step.sentence)

    return replay(d, {"axiom": axiom, "mp": mp, "inst": inst})


# ------------------------------------------------- PROOF as a string predicate

def proof_string(d: Derivation) -> str:
    return ";".join(to_text(st.sentence) for st in d.steps)


def ends(x: str, y: str) -> bool:
    """ENDS(x, y): the proof string y has x as its final line."""
    return y == x or y.endswith(";" + x)


def proof_predicate(th: Theory, term_pool: Optional[Sequence] = None) -> InductivePredicate:
    """PROOF: axioms are proofs; a proof extended by a one-step consequence is a proof."""
    pool = tuple(term_pool) if term_pool is not None else _default_pool(th)
    axioms = tuple(th.axioms)

    def follows_in_one_step(x: str):
        lines = {parse(line, th.sig) for line in x.split(";")}
        known = {f: None for f in lines}
        out = set()
        for f, rule, _, _ in _one_step(known, axioms, pool):
            out.add(to_text(f))
        for a in axioms:
            out.add(to_text(a))
        return tuple(sorted(x + ";" + y for y in out))

    def canonical(x: str) -> str:
        return ";".join(to_text(parse(line, th.sig)) for line in x.split(";"))

    return InductivePredicate("PROOF", tuple(to_text(a) for a in axioms),
                              (follows_in_one_step,), canonicalize=canonical)


def prov_via_strings(th: Theory, s: Formula, length_bound: int,
                     term_pool: Optional[Sequence] = None) -> Optional[str]:
    """Prov(x) = exists y. PROOF(y) & ENDS(x, y), with y ranging over strings up to the bound.

    Returns the shortest (then lexicographically least) witnessing proof string.
    """
    target = to_text(s)
    members = saturate(proof_predicate(th, term_pool), length_bound)
    hits = sorted((y for y in members if ends(target, y)), key=lambda y: (len(y), y))
    return hits[0] if hits else None
