"""Wild and circular languages, their derivations, and tamed evaluation.

In a wild language terms and sentences share one syntax: ``TRUE(X)`` may
take a sentence, a predicate may be an argument, and juxtaposition ``xy``
of variables is a legal term.  Derivations use a small fixed rule set and
replay from the rules alone.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .derivation import Derivation, Step, replay

__all__ = [
    "Name", "Quote", "Apply", "Juxt", "Equal", "Equiv", "Neg", "All", "Some", "Bottom",
    "parse_wild", "show", "WildLanguage", "MERGES", "NotCircular", "ConsistentLanguage",
    "MissingFunctor", "circular_language", "derive_concat", "derive_collapse", "derive_truth_lemma",
    "derive_substitution_lemma", "derive_general_paradox", "PRESETS", "preset_language",
    "replay_wild", "traces_unify", "tamed_eval", "TRUE_V", "FALSE_V", "OUT", "load_language",
    "FLAGGED_RULES",
]

# ---------------------------------------------------------------- syntax


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Quote:
    text: str


@dataclass(frozen=True)
class Apply:
    head: object
    args: tuple


@dataclass(frozen=True)
class Juxt:
    parts: tuple  # Names written side by side


@dataclass(frozen=True)
class Equal:
    left: object
    right: object


@dataclass(frozen=True)
class Equiv:
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    body: object


@dataclass(frozen=True)
class All:
    vars: tuple
    body: object


@dataclass(frozen=True)
class Some:
    vars: tuple
    body: object


@dataclass(frozen=True)
class Bottom:
    pass


def _kids(n) -> tuple:
    if isinstance(n, Apply):
        return (n.head,) + n.args
    if isinstance(n, Juxt):
        return n.parts
    if isinstance(n, (Equal, Equiv)):
        return (n.left, n.right)
    if isinstance(n, Neg):
        return (n.body,)
    if isinstance(n, (All, Some)):
        return (n.body,)
    return ()


def free_names(n, bound: frozenset = frozenset()) -> list:
    """Unbound names in order of first occurrence."""
    out: list = []

    def walk(m, b):
        if isinstance(m, Name):
            if m.name not in b and m.name not in out:
                out.append(m.name)
            return
        if isinstance(m, (All, Some)):
            walk(m.body, b | set(m.vars))
            return
        for k in _kids(m):
            walk(k, b)

    walk(n, bound)
    return out


def subst(n, mapping: Mapping[str, object]):
    """Replace free names; refuses to capture."""
    if isinstance(n, Name):
        return mapping.get(n.name, n)
    if isinstance(n, (Quote, Bottom)):
        return n
    if isinstance(n, Juxt):
        parts = tuple(subst(p, mapping) for p in n.parts)
        if all(isinstance(p, Name) for p in parts):
            return Juxt(parts)
        raise ValueError("juxtaposition of a compound term")
    if isinstance(n, Apply):
        return Apply(subst(n.head, mapping), tuple(subst(a, mapping) for a in n.args))
    if isinstance(n, (Equal, Equiv)):
        return type(n)(subst(n.left, mapping), subst(n.right, mapping))
    if isinstance(n, Neg):
        return Neg(subst(n.body, mapping))
    if isinstance(n, (All, Some)):
        inner = {k: v for k, v in mapping.items() if k not in n.vars}
        incoming = set()
        for k, v in inner.items():
            if k in free_names(n.body):
                incoming |= set(free_names(v))
        if incoming & set(n.vars):
            raise ValueError("substitution would capture a bound name")
        return type(n)(n.vars, subst(n.body, inner))
    raise TypeError(f"not a wild node: {n!r}")


def replace(n, old, new):
    """Replace every occurrence of the subterm ``old``."""
    if n == old:
        return new
    if isinstance(n, Apply):
        return Apply(replace(n.head, old, new), tuple(replace(a, old, new) for a in n.args))
    if isinstance(n, (Equal, Equiv)):
        return type(n)(replace(n.left, old, new), replace(n.right, old, new))
    if isinstance(n, Neg):
        return Neg(replace(n.body, old, new))
    if isinstance(n, (All, Some)):
        return type(n)(n.vars, replace(n.body, old, new))
    return n


def occurs(n, sub) -> bool:
    return n == sub or any(occurs(k, sub) for k in _kids(n))


def names_in(n) -> set:
    if isinstance(n, Name):
        return {n.name}
    out = set()
    if isinstance(n, (All, Some)):
        out |= set(n.vars)
    for k in _kids(n):
        out |= names_in(k)
    return out


def show(n, display: Optional[Mapping[str, str]] = None) -> str:
    """Plain text; ``display`` maps a head symbol to a format template such as
    ``"{1} in {0}"`` or to a function of the printed arguments."""
    display = display or {}

    def term(m):
        if isinstance(m, Name):
            return m.name
        if isinstance(m, Quote):
            return '"' + m.text + '"'
        if isinstance(m, Juxt):
            return "".join(p.name for p in m.parts)
        if isinstance(m, Apply):
            args = [fmt(a, 0) for a in m.args]
            if isinstance(m.head, Name) and m.head.name in display:
                shape = display[m.head.name]
                return shape(args) if callable(shape) else shape.format(*args)
            head = term(m.head) if isinstance(m.head, (Name, Apply)) else f"({fmt(m.head, 0)})"
            return f"{head}({', '.join(args)})"
        if isinstance(m, Bottom):
            return "_|_"
        if not isinstance(m, (All, Some, Equiv, Equal, Neg)):
            raise TypeError(f"not a wild node: {m!r}")
        return f"({fmt(m, 0)})"

    def fmt(m, ctx):
        # ctx 0: anywhere; 1: operand of <-> or =; 2: operand of !
        if isinstance(m, (All, Some)):
            kind = "forall" if isinstance(m, All) else "exists"
            text = f"{kind} {', '.join(m.vars)}. {fmt(m.body, 0)}"
            return text if ctx == 0 else f"({text})"
        if isinstance(m, Equiv):
            text = f"{fmt(m.left, 1)} <-> {fmt(m.right, 1)}"
            return text if ctx == 0 else f"({text})"
        if isinstance(m, Equal):
            text = f"{fmt(m.left, 1)} = {fmt(m.right, 1)}"
            return text if ctx == 0 else f"({text})"
        if isinstance(m, Neg):
            return "!" + fmt(m.body, 2)
        return term(m)

    return fmt(n, 0)


_TOK = re.compile(r'\s*(?:(?P<q>"[^"]*")|(?P<op><->|_\|_|[()!,.=])|(?P<id>[A-Za-z_][A-Za-z0-9_]*))')


def parse_wild(text: str, juxtapose: bool = True):
    """Read the plain-text form printed by ``show`` (without display templates)."""
    toks, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot read {text[pos:]!r}")
        pos = m.end()
        kind = m.lastgroup
        toks.append((kind, m.group(kind)))
    toks.append(("end", ""))
    i = 0
    scope: list = []

    def peek():
        return toks[i]

    def take(val=None):
        nonlocal i
        tok = toks[i]
        if val is not None and tok[1] != val:
            raise ValueError(f"expected {val!r}, found {tok[1]!r}")
        i += 1
        return tok

    def formula():
        left = unary()
        if peek()[1] == "<->":
            take()
            return Equiv(left, formula())
        return left

    def unary():
        kind, val = peek()
        if val == "!":
            take()
            return Neg(unary())
        if kind == "id" and val in ("forall", "exists"):
            take()
            names = [take()[1]]
            while peek()[1] == ",":
                take()
                names.append(take()[1])
            take(".")
            scope.append(set(names))
            body = formula()
            scope.pop()
            return (All if val == "forall" else Some)(tuple(names), body)
        left = term()
        if peek()[1] == "=" or peek()[1] == "is":
            take()
            return Equal(left, term())
        return left

    def bound(name):
        return any(name in s for s in scope)

    def term():
        kind, val = take()
        if kind == "q":
            node = Quote(val[1:-1])
        elif val == "_|_":
            node = Bottom()
        elif val == "(":
            node = formula()
            take(")")
        elif kind == "id":
            if (juxtapose and len(val) > 1 and not bound(val)
                    and all(bound(c) for c in val)):
                node = Juxt(tuple(Name(c) for c in val))
            else:
                node = Name(val)
        else:
            raise ValueError(f"unexpected {val!r}")
        while peek()[1] == "(":
            take()
            args = [formula()]
            while peek()[1] == ",":
                take()
                args.append(formula())
            take(")")
            node = Apply(node, tuple(args))
        return node

    out = formula()
    if peek()[0] != "end":
        raise ValueError(f"trailing input at {peek()[1]!r}")
    return out


# -------------------------------------------------------------- languages

MERGES = ("open-term=predicate", "closed-term=sentence", "open=closed")
CONCAT_AXIOM = "forall x, y. c(x, y) = xy"


class NotCircular(ValueError):
    pass


class ConsistentLanguage(ValueError):
    """No contradiction is derivable: the language is consistent at this size."""


class MissingFunctor(ValueError):
    pass


@dataclass(frozen=True)
class WildLanguage:
    name: str = "wild"
    merges: frozenset = frozenset()
    functors: tuple = ()   # (name, schema text)
    terms: tuple = ()      # primitive terms, pairwise distinct objects
    extra_axioms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "merges", frozenset(self.merges))
        bad = self.merges - set(MERGES)
        if bad:
            raise ValueError(f"unknown merge flags {sorted(bad)}")
        if len(set(self.terms)) != len(self.terms):
            raise ValueError("primitive terms must be distinct")

    @property
    def wild(self) -> bool:
        return {"open-term=predicate", "closed-term=sentence"} <= self.merges

    @property
    def circular(self) -> bool:
        return self.wild and "open=closed" in self.merges

    @property
    def axioms(self) -> tuple:
        out = [parse_wild(s) for _, s in self.functors]
        out += [parse_wild(s) for s in self.extra_axioms]
        if self.circular:
            out.append(parse_wild(CONCAT_AXIOM))
        return tuple(out)

    def functor_with(self, role: str) -> Optional[str]:
        """Name of the declared functor whose schema has the truth or substitution shape."""
        for name, schema in self.functors:
            if _schema_role(parse_wild(schema), name) == role:
                return name
        return None


def _schema_role(s, name: str) -> Optional[str]:
    if isinstance(s, All) and isinstance(s.body, Equiv):
        l, r = s.body.left, s.body.right
        if len(s.vars) == 1:
            x = Name(s.vars[0])
            if Apply(Name(name), (x,)) in (l, r) and x in (l, r):
                return "truth"
        if len(s.vars) == 2:
            p, x = (Name(v) for v in s.vars)
            if {l, r} == {Apply(p, (x,)), Apply(Name(name), (p, x))}:
                return "substitution"
    return None


def circular_language(terms: Sequence[str] = ("a", "b")) -> WildLanguage:
    return WildLanguage("circular", frozenset(MERGES), (), tuple(terms))


# ------------------------------------------------------------ rule checks

FLAGGED_RULES = {
    "free-relabel": "treats the juxtaposition xy as an unbound variable",
    "eq-to-iff": "terms equal as terms are taken to be equivalent as sentences",
}


def _strip(n, vars_=()):
    while isinstance(n, All):
        vars_ = vars_ + n.vars
        n = n.body
    return vars_, n


def _iff_pair(a, b):
    """Both orientations of an equivalence."""
    return {(a.left, a.right), (a.right, a.left)} if isinstance(a, Equiv) else set()


def _prop_atoms(n, out):
    if isinstance(n, (Equiv,)):
        _prop_atoms(n.left, out)
        _prop_atoms(n.right, out)
    elif isinstance(n, Neg):
        _prop_atoms(n.body, out)
    elif isinstance(n, Bottom):
        pass
    else:
        if n not in out:
            out.append(n)


def _prop_value(n, val):
    if isinstance(n, Equiv):
        return _prop_value(n.left, val) == _prop_value(n.right, val)
    if isinstance(n, Neg):
        return not _prop_value(n.body, val)
    if isinstance(n, Bottom):
        return False
    return val[n]


def _tautology(n) -> bool:
    _, body = _strip(n)
    atoms: list = []
    _prop_atoms(body, atoms)
    for bits in itertools.product((False, True), repeat=len(atoms)):
        if not _prop_value(body, dict(zip(atoms, bits))):
            return False
    return True


def _checkers(lang: WildLanguage, d: Derivation) -> dict:
    axioms = set(lang.axioms)

    def earlier(step):
        idx = next(i for i, s in enumerate(d.steps) if s is step)
        seen = set()
        for s in d.steps[:idx]:
            seen |= names_in(s.sentence)
        return seen

    def axiom(step, prem):
        return step.sentence in axioms

    def refl(step, prem):
        _, body = _strip(step.sentence)
        return isinstance(body, Equal) and body.left == body.right

    def tautology(step, prem):
        return _tautology(step.sentence)

    def relabel(step, prem):
        (p,) = prem
        params = step.param_dict
        name, side, old = params["name"], params["side"], params["term"]
        vs, body = _strip(p)
        vs2, body2 = _strip(step.sentence)
        if vs != vs2 or not isinstance(body, Equal) or not isinstance(body2, Equal):
            return False
        if name in names_in(p) or not lang.wild:
            return False
        new = Apply(Name(name), tuple(Name(v) for v in free_names(old)))
        if side == "left":
            return occurs(body.left, old) and body2 == Equal(replace(body.left, old, new), body.right)
        return occurs(body.right, old) and body2 == Equal(body.left, replace(body.right, old, new))

    def exists_intro(step, prem):
        (p,) = prem
        s = step.sentence
        return (isinstance(s, Some) and len(s.vars) == 1 and s.body == p
                and occurs(p, Name(s.vars[0])))

    def free_relabel(step, prem):
        (p,) = prem
        vs, body = _strip(p)
        vs2, body2 = _strip(step.sentence)
        z = step.param_dict["var"]
        old = step.param_dict["term"]
        if not lang.circular or z in names_in(p) or vs2 != vs + (z,):
            return False
        return (isinstance(old, Juxt) and all(q.name in vs for q in old.parts)
                and body2 == replace(body, old, Name(z)))

    def instantiate(step, prem):
        (p,) = prem
        mapping = dict(step.param_dict["mapping"])
        vs, body = _strip(p)
        if not set(mapping) <= set(vs):
            return False
        rest = tuple(v for v in vs if v not in mapping)
        inst = subst(body, mapping)
        return step.sentence == (All(rest, inst) if rest else inst)

    def eq_chain(step, prem):
        a, b = prem
        s = step.sentence
        return (isinstance(a, Equal) and isinstance(b, Equal) and a.left == b.left
                and s == Equal(a.right, b.right))

    def iff_chain(step, prem):
        a, b = prem
        vs, a = _strip(a)
        vs_b, b = _strip(b)
        vs_s, s = _strip(step.sentence)
        if not (vs == vs_b == vs_s) or not isinstance(s, Equiv):
            return False
        for x, y in _iff_pair(a, None):
            for y2, z in _iff_pair(b, None):
                if y == y2 and (s.left, s.right) in {(x, z), (z, x)}:
                    return True
        return False

    def replace_equiv(step, prem):
        target, eq = prem
        if not isinstance(eq, Equiv):
            return False
        return step.sentence in (replace(target, eq.left, eq.right), replace(target, eq.right, eq.left))

    def define(step, prem):
        name = step.param_dict["name"]
        vs, body = _strip(step.sentence)
        if not isinstance(body, Equiv) or name in earlier(step):
            return False
        head = Apply(Name(name), tuple(Name(v) for v in vs))
        return body.left == head and name not in names_in(body.right)

    def eq_to_iff(step, prem):
        (p,) = prem
        vs, body = _strip(p)
        vs2, body2 = _strip(step.sentence)
        return (vs == vs2 and isinstance(body, Equal)
                and body2 == Equiv(body.left, body.right))

    def bottom(step, prem):
        (p,) = prem
        if not isinstance(step.sentence, Bottom):
            return False
        if isinstance(p, Equiv) and (p.right == Neg(p.left) or p.left == Neg(p.right)):
            return True
        return (isinstance(p, Equal) and isinstance(p.left, Name) and isinstance(p.right, Name)
                and p.left.name in lang.terms and p.right.name in lang.terms
                and p.left != p.right)

    return {"axiom": axiom, "refl": refl, "tautology": tautology, "relabel": relabel,
            "exists-intro": exists_intro, "free-relabel": free_relabel,
            "instantiate": instantiate, "eq-chain": eq_chain, "iff-chain": iff_chain,
            "replace": replace_equiv, "define": define, "eq-to-iff": eq_to_iff,
            "bottom": bottom}


def replay_wild(lang: WildLanguage, d: Derivation) -> bool:
    return replay(d, _checkers(lang, d))


class _Builder:
    def __init__(self, display=None):
        self.steps: list = []
        self.display = display or {}

    def add(self, sentence, rule, premises=(), note="", **params) -> int:
        if rule in FLAGGED_RULES and not note:
            note = "flagged: " + FLAGGED_RULES[rule]
        self.steps.append(Step(sentence, rule, tuple(premises), tuple(sorted(params.items())), note))
        return len(self.steps)

    def done(self) -> Derivation:
        display = self.display
        return Derivation(tuple(self.steps), render=lambda n: show(n, display))


# ------------------------------------------------------------ derivations

def derive_concat(lang: WildLanguage) -> Derivation:
    """exists c. forall x, y. c(x, y) = xy, by relabelling one side of reflexivity."""
    if not lang.circular:
        raise NotCircular(f"language {lang.name!r} is not circular")
    b = _Builder()
    xy = Juxt((Name("x"), Name("y")))
    s1 = b.add(All(("x", "y"), Equal(xy, xy)), "refl")
    body = Equal(Apply(Name("c"), (Name("x"), Name("y"))), xy)
    s2 = b.add(All(("x", "y"), body), "relabel", [s1], name="c", side="left", term=xy)
    b.add(Some(("c",), All(("x", "y"), body)), "exists-intro", [s2])
    return b.done()


def derive_collapse(lang: WildLanguage, a: Optional[str] = None, b: Optional[str] = None) -> Derivation:
    """From the concatenation axiom to a = b and then falsum, for two distinct primitive terms."""
    if not lang.circular:
        raise NotCircular(f"language {lang.name!r} is not circular")
    if len(lang.terms) < 2:
        raise ConsistentLanguage(f"only {len(lang.terms)} primitive term(s): no contradiction derivable")
    a = a if a is not None else lang.terms[0]
    b = b if b is not None else lang.terms[1]
    if a == b or a not in lang.terms or b not in lang.terms:
        raise ValueError("need two distinct declared primitive terms")
    bld = _Builder()
    x, y, z = Name("x"), Name("y"), Name("z")
    xy = Juxt((x, y))
    cxy = Apply(Name("c"), (x, y))
    s1 = bld.add(parse_wild(CONCAT_AXIOM), "axiom")
    s2 = bld.add(All(("x", "y", "z"), Equal(cxy, z)), "free-relabel", [s1], var="z", term=xy)
    cab = Apply(Name("c"), (Name(a), Name(b)))
    s3 = bld.add(Equal(cab, Name(a)), "instantiate", [s2],
                 mapping=(("x", Name(a)), ("y", Name(b)), ("z", Name(a))))
    s4 = bld.add(Equal(cab, Name(b)), "instantiate", [s2],
                 mapping=(("x", Name(a)), ("y", Name(b)), ("z", Name(b))))
    s5 = bld.add(Equal(Name(a), Name(b)), "eq-chain", [s3, s4])
    bld.add(Bottom(), "bottom", [s5])
    return bld.done()


def derive_truth_lemma(lang: WildLanguage, name: str = "TRUE") -> Derivation:
    """forall S. TRUE(S) <-> S, with TRUE(S) defined as !!S.

    The tautology checker rejects S <-> (S <-> S) (false when S is), so the
    double negation plays the role of the predicate built from S.
    """
    if not lang.circular:
        raise NotCircular(f"language {lang.name!r} is not circular")
    b = _Builder()
    S = Name("S")
    s1 = b.add(All(("S",), Equiv(S, Neg(Neg(S)))), "tautology")
    s2 = b.add(All(("S",), Equiv(Apply(Name(name), (S,)), Neg(Neg(S)))), "define", name=name)
    b.add(All(("S",), Equiv(Apply(Name(name), (S,)), S)), "iff-chain", [s2, s1])
    return b.done()


def derive_substitution_lemma(lang: WildLanguage, name: str = "SUB") -> Derivation:
    """forall P, a. P(a) <-> SUB(P, a); the last step is flagged."""
    if not lang.circular:
        raise NotCircular(f"language {lang.name!r} is not circular")
    b = _Builder()
    pa = Apply(Name("P"), (Name("a"),))
    s1 = b.add(All(("P", "a"), Equal(pa, pa)), "refl")
    sub = Apply(Name(name), (Name("P"), Name("a")))
    s2 = b.add(All(("P", "a"), Equal(pa, sub)), "relabel", [s1], name=name, side="right", term=pa)
    b.add(All(("P", "a"), Equiv(pa, sub)), "eq-to-iff", [s2])
    return b.done()


# presets differ only in symbol names and display templates
def _this_sentence(args) -> str:
    # the liar's name for self-substitution; off the diagonal keep ssb
    if len(args) == 2 and args[0] == args[1]:
        return f"This_Sentence({args[0]})"
    return f"ssb({', '.join(args)})"


PRESETS = {
    "canonical": {"symbols": {"TRUE": "TRUE", "SUB": "SUB", "FSSB": "FSSB"}, "display": {}},
    "naive-set": {"symbols": {"TRUE": "IS", "SUB": "CONTAINS", "FSSB": "R"},
                  "display": {"CONTAINS": "{1} in {0}"}},
    "tarski": {"symbols": {"TRUE": "True", "SUB": "sub", "FSSB": "Fssb"},
               "display": {"True": "True(g({0}))", "sub": "sub({0}, g({1}))"},
               "terms": ("a", "b", "c")},
    "liar": {"symbols": {"TRUE": "Is_True", "SUB": "ssb", "FSSB": "Is_False"},
             "display": {"ssb": _this_sentence}},
}


def preset_language(preset: str = "canonical") -> WildLanguage:
    cfg = PRESETS[preset]
    t, s = cfg["symbols"]["TRUE"], cfg["symbols"]["SUB"]
    return WildLanguage(
        preset, frozenset(MERGES[:2]),
        ((t, f"forall X. {t}(X) <-> X"), (s, f"forall P, X. P(X) <-> {s}(P, X)")),
        tuple(cfg.get("terms", ())))


def derive_general_paradox(lang: Optional[WildLanguage] = None, preset: str = "canonical") -> Derivation:
    """FSSB := !TRUE(SUB(X, X)); FSSB(FSSB) <-> !FSSB(FSSB); falsum."""
    cfg = PRESETS[preset]
    lang = lang if lang is not None else preset_language(preset)
    T = lang.functor_with("truth")
    S = lang.functor_with("substitution")
    if T is None:
        raise MissingFunctor("no functor with the truth schema forall X. T(X) <-> X")
    if S is None:
        raise MissingFunctor("no functor with the substitution schema (no diagonalisation)")
    F = cfg["symbols"]["FSSB"]
    if F in (T, S):
        raise ValueError("diagonal name clashes with a functor")
    schemas = dict(lang.functors)
    b = _Builder(cfg["display"])
    X = Name("X")
    Fn = Name(F)
    true = lambda t: Apply(Name(T), (t,))          # noqa: E731
    sub = lambda p, t: Apply(Name(S), (p, t))      # noqa: E731
    s1 = b.add(parse_wild(schemas[T]), "axiom")
    s2 = b.add(parse_wild(schemas[S]), "axiom")
    s3 = b.add(All(("X",), Equiv(Apply(Fn, (X,)), Neg(true(sub(X, X))))), "define", name=F)
    ff = Apply(Fn, (Fn,))
    s4 = b.add(Equiv(ff, Neg(true(sub(Fn, Fn)))), "instantiate", [s3], mapping=(("X", Fn),))
    s5 = b.add(Equiv(ff, sub(Fn, Fn)), "instantiate", [s2], mapping=(("P", Fn), ("X", Fn)))
    s6 = b.add(Equiv(true(sub(Fn, Fn)), sub(Fn, Fn)), "instantiate", [s1],
               mapping=(("X", sub(Fn, Fn)),))
    s7 = b.add(Equiv(true(sub(Fn, Fn)), ff), "iff-chain", [s6, s5])
    s8 = b.add(Equiv(ff, Neg(ff)), "replace", [s4, s7])
    b.add(Bottom(), "bottom", [s8])
    return b.done()


def traces_unify(d1: Derivation, d2: Derivation) -> bool:
    """Same rule skeleton and one consistent bijective renaming of names."""
    if d1.skeleton() != d2.skeleton():
        return False
    fwd: dict = {}
    back: dict = {}

    def match(m, n) -> bool:
        if type(m) is not type(n):
            return False
        if isinstance(m, Name):
            if fwd.setdefault(m.name, n.name) != n.name or back.setdefault(n.name, m.name) != m.name:
                return False
            return True
        if isinstance(m, (All, Some)):
            if len(m.vars) != len(n.vars):
                return False
            if not all(match(Name(a), Name(b)) for a, b in zip(m.vars, n.vars)):
                return False
        if isinstance(m, Quote):
            return m == n
        km, kn = _kids(m), _kids(n)
        return len(km) == len(kn) and all(match(a, b) for a, b in zip(km, kn))

    return all(match(a.sentence, b.sentence) for a, b in zip(d1.steps, d2.steps))


# --------------------------------------------------------- tamed evaluation

TRUE_V, FALSE_V, OUT = "true", "false", "out-of-scope"


class _Out(Exception):
    pass


def tamed_eval(lang: WildLanguage, domain: Sequence[str], s, extensions: Optional[Mapping] = None,
               definitions: Optional[Mapping] = None, depth: int = 64) -> str:
    """Evaluate over an explicit finite list of objects.

    ``extensions`` maps predicate objects to the members they hold of.
    Defined predicates (by default FSSB, when the language has truth and
    substitution functors) are never objects.  Any referent outside the
    list makes the whole sentence out of scope.
    """
    s = parse_wild(s) if isinstance(s, str) else s
    domain = list(domain)
    extensions = {k: set(v) for k, v in (extensions or {}).items()}
    T = lang.functor_with("truth") or "TRUE"
    S = lang.functor_with("substitution") or "SUB"
    if definitions is None:
        definitions = {"FSSB": ("X", f"!{T}({S}(X, X))")}
    defs = {k: (v, parse_wild(b)) for k, (v, b) in definitions.items()}
    clash = set(defs) & set(domain)
    if clash:
        raise ValueError(f"defined predicates cannot be objects: {sorted(clash)}")

    def obj(t, env):
        if isinstance(t, Name):
            if t.name in env:
                return env[t.name]
            if t.name in domain:
                return t.name
        raise _Out()

    def apply(pred, arg, env, d):
        """pred(arg) as a truth value."""
        if isinstance(pred, Name) and pred.name in defs and pred.name not in env:
            var, body = defs[pred.name]
            x = obj(arg, env)
            return ev(body, {**env, var: x}, d + 1)
        p = obj(pred, env)
        x = obj(arg, env)
        if p not in extensions:
            raise _Out()
        return x in extensions[p]

    def ev(n, env, d) -> bool:
        if d > depth:
            raise _Out()
        if isinstance(n, Quote):
            return ev(parse_wild(n.text.replace(" is ", " = ")), env, d + 1)
        if isinstance(n, Bottom):
            return False
        if isinstance(n, Equal):
            return obj(n.left, env) == obj(n.right, env)
        if isinstance(n, Equiv):
            return ev(n.left, env, d) == ev(n.right, env, d)
        if isinstance(n, Neg):
            return not ev(n.body, env, d)
        if isinstance(n, (All, Some)):
            want = isinstance(n, Some)
            for vals in itertools.product(domain, repeat=len(n.vars)):
                if ev(n.body, {**env, **dict(zip(n.vars, vals))}, d) == want:
                    return want
            return not want
        if isinstance(n, Apply) and isinstance(n.head, Name):
            head = n.head.name
            if head == T and len(n.args) == 1:
                return ev(n.args[0], env, d + 1)
            if head == S and len(n.args) == 2:
                return apply(n.args[0], n.args[1], env, d + 1)
            if len(n.args) == 1:
                return apply(n.head, n.args[0], env, d + 1)
        raise _Out()

    try:
        return TRUE_V if ev(s, {}, 0) else FALSE_V
    except _Out:
        return OUT


# ------------------------------------------------------------- file format

def load_language(text: str) -> WildLanguage:
    """Lines: ``language NAME``, ``merge FLAG ...``, ``functor NAME : SCHEMA``,
    ``terms a, b``, ``axiom SENTENCE``.  ``#`` starts a comment."""
    name, merges, functors, terms, axioms = "wild", set(), [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if word == "language":
                name = rest
            elif word == "merge":
                bad = set(rest.split()) - set(MERGES)
                if bad:
                    raise ValueError(f"unknown merge flags {sorted(bad)}")
                merges |= set(rest.split())
            elif word == "functor":
                fname, _, schema = rest.partition(":")
                parse_wild(schema)
                functors.append((fname.strip(), schema.strip()))
            elif word == "terms":
                terms += [t.strip() for t in rest.split(",") if t.strip()]
            elif word == "axiom":
                parse_wild(rest)
                axioms.append(rest)
            else:
                raise ValueError(f"unknown language directive {word!r}")
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from None
    return WildLanguage(name, frozenset(merges), tuple(functors), tuple(terms), tuple(axioms))
