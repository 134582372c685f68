"""Finite structures, theories, and evaluation as a decision procedure."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .syntax import (
    App, Atom, BINARY, Const, Eq, Exists, Forall, Formula, Iff, Implies, And,
    Not, Or, PredTemplate, SecondOrderForall, Signature, Truth, Var,
    free_vars, instantiate_predicate, symbols, to_text,
)

__all__ = ["FiniteStructure", "Theory", "evaluate", "decide", "EvaluationError",
           "instantiate_second_order"]


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteStructure:
    """Explicit finite interpretation.

    ``universe`` is the range of the quantifiers.  ``carrier`` (defaults to
    the universe) holds every element a closed term may denote; a restricted
    structure keeps its parent's carrier so that constants outside the
    restricting predicate still have referents.  Function tables are partial.
    """

    universe: tuple
    constant_map: Mapping[str, str] = field(default_factory=dict)
    function_tables: Mapping[str, Mapping[tuple, str]] = field(default_factory=dict)
    relation_tables: Mapping[str, frozenset] = field(default_factory=dict)
    carrier: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        carrier = tuple(self.carrier) if self.carrier is not None else self.universe
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "relation_tables",
                           {k: frozenset(tuple(t) for t in v) for k, v in self.relation_tables.items()})
        object.__setattr__(self, "function_tables",
                           {k: {tuple(a): b for a, b in v.items()} for k, v in self.function_tables.items()})
        elems = set(carrier)
        if not set(self.universe) <= elems:
            raise ValueError("universe must lie inside the carrier")
        for c, e in self.constant_map.items():
            if e not in elems:
                raise ValueError(f"constant {c!r} denotes {e!r}, not an element")
        for name, table in self.relation_tables.items():
            for tup in table:
                if not set(tup) <= elems:
                    raise ValueError(f"relation {name} has tuple {tup} outside the carrier")
        for name, table in self.function_tables.items():
            arities = {len(a) for a in table}
            if len(arities) > 1:
                raise ValueError(f"function {name} has inconsistent arity")
            for args, val in table.items():
                if not set(args) <= elems or val not in elems:
                    raise ValueError(f"function {name} maps {args} -> {val} outside the carrier")

    def restrict_domain(self, elements) -> "FiniteStructure":
        """Same interpretation, quantifiers ranging over ``elements`` only."""
        keep = set(elements)
        dom = tuple(e for e in self.carrier if e in keep)
        return FiniteStructure(dom, self.constant_map, self.function_tables,
                               self.relation_tables, carrier=self.carrier)


def _term_value(s: FiniteStructure, t, env) -> Optional[str]:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise EvaluationError(f"free variable {t.name!r} has no value") from None
    if isinstance(t, Const):
        try:
            return s.constant_map[t.name]
        except KeyError:
            raise EvaluationError(f"constant {t.name!r} outside the signature") from None
    if isinstance(t, App):
        table = s.function_tables.get(t.function)
        if table is None:
            raise EvaluationError(f"function {t.function!r} outside the signature")
        args = tuple(_term_value(s, a, env) for a in t.args)
        if None in args:
            return None
        return table.get(args)
    raise TypeError(f"not a term: {t!r}")


def evaluate(s: FiniteStructure, f: Formula, env: Optional[Mapping[str, str]] = None) -> bool:
    """Two-valued evaluation.  Atoms containing an undefined term are false."""
    return _eval(s, f, dict(env or {}), None)


def _eval(s, f, env, pool) -> bool:
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, Eq):
        a, b = _term_value(s, f.left, env), _term_value(s, f.right, env)
        return a is not None and a == b
    if isinstance(f, Atom):
        table = s.relation_tables.get(f.predicate)
        if table is None:
            raise EvaluationError(f"predicate {f.predicate!r} outside the signature")
        args = tuple(_term_value(s, a, env) for a in f.args)
        return None not in args and args in table
    if isinstance(f, Not):
        return not _eval(s, f.body, env, pool)
    if isinstance(f, Or):
        return _eval(s, f.left, env, pool) or _eval(s, f.right, env, pool)
    if isinstance(f, And):
        return _eval(s, f.left, env, pool) and _eval(s, f.right, env, pool)
    if isinstance(f, Implies):
        return (not _eval(s, f.left, env, pool)) or _eval(s, f.right, env, pool)
    if isinstance(f, Iff):
        return _eval(s, f.left, env, pool) == _eval(s, f.right, env, pool)
    if isinstance(f, (Exists, Forall)):
        saved = env.get(f.var, _MISSING)
        want = isinstance(f, Exists)
        result = not want
        for e in s.universe:
            env[f.var] = e
            if _eval(s, f.body, env, pool) == want:
                result = want
                break
        if saved is _MISSING:
            env.pop(f.var, None)
        else:
            env[f.var] = saved
        return result
    if isinstance(f, SecondOrderForall):
        if pool is None:
            raise EvaluationError("second-order quantifier needs a predicate pool")
        arity = _pred_var_arity(f.body, f.pred)
        for t in pool:
            if arity is None or t.arity == arity:
                if not _eval(s, instantiate_predicate(f.body, f.pred, t), env, pool):
                    return False
        return True
    raise TypeError(f"not a formula: {f!r}")


_MISSING = object()


def instantiate_second_order(f: Formula, pool: Sequence[PredTemplate]) -> Formula:
    """Replace each ``forall2 P. body`` by the conjunction of its pool instances."""
    if isinstance(f, SecondOrderForall):
        body = instantiate_second_order(f.body, pool)
        arity = _pred_var_arity(body, f.pred)
        instances = [instantiate_predicate(body, f.pred, t) for t in pool
                     if arity is None or t.arity == arity]
        out = Truth(True)
        for inst in reversed(instances):
            out = inst if out == Truth(True) else And(inst, out)
        return out
    if isinstance(f, (Truth, Eq, Atom)):
        return f
    if isinstance(f, Not):
        return Not(instantiate_second_order(f.body, pool))
    if isinstance(f, BINARY):
        return type(f)(instantiate_second_order(f.left, pool),
                       instantiate_second_order(f.right, pool))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, instantiate_second_order(f.body, pool))
    raise TypeError(f"not a formula: {f!r}")


def _pred_var_arity(f, name) -> Optional[int]:
    if isinstance(f, Atom) and f.predicate == name:
        return len(f.args)
    for attr in ("body", "left", "right"):
        child = getattr(f, attr, None)
        if child is not None and not isinstance(child, str):
            k = _pred_var_arity(child, name)
            if k is not None:
                return k
    return None


def _has_second_order(f) -> bool:
    if isinstance(f, SecondOrderForall):
        return True
    return any(_has_second_order(getattr(f, a)) for a in ("body", "left", "right")
               if hasattr(f, a) and not isinstance(getattr(f, a), str))


@dataclass(frozen=True)
class Theory:
    """Signature, axiom list and an optional structure granting decidability."""

    sig: Signature
    axioms: tuple = ()
    structure: Optional[FiniteStructure] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))
        for a in self.axioms:
            if free_vars(a):
                raise ValueError(f"axiom is not a sentence: {to_text(a)}")

    @property
    def decidable(self) -> bool:
        return self.structure is not None

    def check_signature(self, f: Formula) -> None:
        used = symbols(f)
        bad = [c for c in used["constants"] if not self.sig.has_constant(c)]
        bad += [f"{n}/{k}" for n, k in used["functions"] if self.sig.function_arity.get(n) != k]
        bad += [f"{n}/{k}" for n, k in used["predicates"] if self.sig.predicate_arity.get(n) != k]
        if bad:
            raise EvaluationError(f"symbols outside the signature: {', '.join(sorted(map(str, bad)))}")

    def failing_axioms(self, pool: Sequence[PredTemplate] = ()) -> list:
        """Axioms false in the attached structure (empty list = consistent and complete here)."""
        return [a for a in self.axioms if not decide(self, a, pool=pool or None)]


def decide(th: Theory, s: Formula, pool: Optional[Sequence[PredTemplate]] = None) -> bool:
    """Total verdict on a sentence by evaluation in the attached structure."""
    if th.structure is None:
        raise EvaluationError(f"theory {th.name or '<unnamed>'} has no structure; it is not decidable here")
    if free_vars(s):
        raise EvaluationError(f"not a sentence: {to_text(s)}")
    th.check_signature(s)
    if _has_second_order(s):
        if pool is None:
            raise EvaluationError("sentence has a second-order quantifier; supply a predicate pool")
        return _eval(th.structure, s, {}, tuple(pool))
    return evaluate(th.structure, s)
