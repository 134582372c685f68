"""Modelling transformations between theories.

A map fixes images for the primitive symbols of a source theory and is
extended to every formula by the recursive clauses (negation, disjunction,
existential quantification and substitution commute with the map).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .concat import generate_concat_n
from .proofs import prov, replay_proof
from .structures import Theory, _pred_var_arity, decide, evaluate
from .syntax import (
    And, App, Atom, BINARY, Const, Eq, Exists, Forall, Formula, Implies, Not,
    PredTemplate, SecondOrderForall, Signature, Truth, Var, conj, enumerate_formulas,
    free_vars, is_sentence, parse, size, substitute_many, to_text,
)

__all__ = [
    "TermTemplate", "ModellingMap", "extend", "extend_term", "verify", "VerifyReport",
    "elementarily_equivalent", "EquivalenceReport", "restrict", "relativize", "compose",
    "inverse", "identity_map", "permutation_map", "automorphisms", "peano_theory",
    "peano_map", "peano_check", "PeanoReport", "predicate_pool", "godel_embedding_check",
    "GodelReport", "toy_decidable_theory", "tarskian_image", "NotInvertible",
    "PreconditionError", "UnmappedSymbol", "set_theory_signature",
]

VALID, INVALID, UNVERIFIABLE = "VALID", "INVALID", "UNVERIFIABLE"


class UnmappedSymbol(KeyError):
    pass


class NotInvertible(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class TermTemplate:
    params: tuple
    body: object  # a term over the target signature

    def apply(self, args):
        return substitute_many(self.body, dict(zip(self.params, args)))


def _params(k: int) -> tuple:
    return tuple(f"x{i}" for i in range(1, k + 1))


@dataclass(frozen=True)
class ModellingMap:
    """Images of the source primitives.

    ``const_map``: constant -> closed target term.  ``func_map``: function
    -> TermTemplate.  ``pred_map``: predicate -> PredTemplate of the same
    arity.  ``eq_image``: binary PredTemplate (None means target equality).
    ``guard``: optional unary PredTemplate relativising quantifiers and
    guarding atoms, for maps into a restricted theory.
    """

    source: Theory
    target: Theory
    const_map: Mapping[str, object] = field(default_factory=dict)
    func_map: Mapping[str, TermTemplate] = field(default_factory=dict)
    pred_map: Mapping[str, PredTemplate] = field(default_factory=dict)
    eq_image: Optional[PredTemplate] = None
    guard: Optional[PredTemplate] = None
    name: str = ""

    def __post_init__(self):
        for c, t in self.const_map.items():
            if free_vars(t):
                raise ValueError(f"constant {c!r} must map to a closed term")
        arity = self.source.sig.predicate_arity
        for p, tmpl in self.pred_map.items():
            if p in arity and tmpl.arity != arity[p]:
                raise ValueError(f"predicate {p} has arity {arity[p]} but its image has {tmpl.arity}")
        farity = self.source.sig.function_arity
        for f, tmpl in self.func_map.items():
            if f in farity and len(tmpl.params) != farity[f]:
                raise ValueError(f"function {f} has arity {farity[f]} but its image has {len(tmpl.params)}")
        if self.eq_image is not None and self.eq_image.arity != 2:
            raise ValueError("image of equality must be binary")

    def eq_template(self) -> PredTemplate:
        return self.eq_image or PredTemplate(("x1", "x2"), Eq(Var("x1"), Var("x2")))


def extend_term(mm: ModellingMap, t):
    if isinstance(t, Var):
        return t
    if isinstance(t, Const):
        try:
            return mm.const_map[t.name]
        except KeyError:
            raise UnmappedSymbol(f"constant {t.name!r} has no image") from None
    if isinstance(t, App):
        try:
            tmpl = mm.func_map[t.function]
        except KeyError:
            raise UnmappedSymbol(f"function {t.function!r} has no image") from None
        return tmpl.apply([extend_term(mm, a) for a in t.args])
    raise TypeError(f"not a term: {t!r}")


def _ordered_vars(f) -> list:
    seen = []

    def walk(g):
        if isinstance(g, Var):
            if g.name not in seen:
                seen.append(g.name)
        for attr in ("args",):
            for a in getattr(g, attr, ()):
                walk(a)
        for attr in ("left", "right"):
            if hasattr(g, attr):
                walk(getattr(g, attr))

    walk(f)
    return seen


def _guarded(mm: ModellingMap, atom: Formula, image: Formula) -> Formula:
    if mm.guard is None:
        return image
    vs = _ordered_vars(atom)
    if not vs:
        return image
    return Implies(conj([mm.guard.apply([Var(v)]) for v in vs]), image)


def extend(mm: ModellingMap, f: Formula, _bound_preds: frozenset = frozenset()) -> Formula:
    """Image of ``f``, rebuilt bottom-up from the images of its primitives."""
    if isinstance(f, Truth):
        return f
    if isinstance(f, Eq):
        image = mm.eq_template().apply([extend_term(mm, f.left), extend_term(mm, f.right)])
        return _guarded(mm, f, image)
    if isinstance(f, Atom):
        args = [extend_term(mm, a) for a in f.args]
        if f.predicate in _bound_preds:
            return Atom(f.predicate, tuple(args))
        try:
            tmpl = mm.pred_map[f.predicate]
        except KeyError:
            raise UnmappedSymbol(f"predicate {f.predicate!r} has no image") from None
        return _guarded(mm, f, tmpl.apply(args))
    if isinstance(f, Not):
        return Not(extend(mm, f.body, _bound_preds))
    if isinstance(f, BINARY):
        return type(f)(extend(mm, f.left, _bound_preds), extend(mm, f.right, _bound_preds))
    if isinstance(f, Exists):
        body = extend(mm, f.body, _bound_preds)
        if mm.guard is not None:
            body = And(mm.guard.apply([Var(f.var)]), body)
        return Exists(f.var, body)
    if isinstance(f, Forall):
        body = extend(mm, f.body, _bound_preds)
        if mm.guard is not None:
            body = Implies(mm.guard.apply([Var(f.var)]), body)
        return Forall(f.var, body)
    if isinstance(f, SecondOrderForall):
        return SecondOrderForall(f.pred, extend(mm, f.body, _bound_preds | {f.pred}))
    raise TypeError(f"not a formula: {f!r}")


# ------------------------------------------------------------------ verify

@dataclass
class VerifyReport:
    verdict: str
    method: str
    obligations: list = field(default_factory=list)  # dicts {obligation, verdict, witness}

    @property
    def counterexample(self) -> Optional[str]:
        for ob in self.obligations:
            if ob["verdict"] is False:
                return ob["witness"]
        return None

    @property
    def valid(self) -> bool:
        return self.verdict == VALID


def _equivalence_sentences() -> list:
    x, y, z = Var("x"), Var("y"), Var("z")
    return [
        ("image of = is reflexive", Forall("x", Eq(x, x))),
        ("image of = is symmetric", Forall("x", Forall("y", Implies(Eq(x, y), Eq(y, x))))),
        ("image of = is transitive", Forall("x", Forall("y", Forall("z", Implies(
            And(Eq(x, y), Eq(y, z)), Eq(x, z)))))),
    ]


def verify(mm: ModellingMap, *, pool: Optional[Sequence[PredTemplate]] = None,
           proof_bound: int = 20, stop_at_first: bool = False) -> VerifyReport:
    """Check every source axiom's image in the target, plus that = maps to an equivalence."""
    items = [(f"axiom: {to_text(a)}", a) for a in mm.source.axioms] + _equivalence_sentences()
    target = mm.target
    if target.structure is not None:
        report = VerifyReport(VALID, "decide")
        for label, s in items:
            image = extend(mm, s)
            ok = decide(target, image, pool=pool)
            report.obligations.append({"obligation": label, "image": to_text(image),
                                       "verdict": ok, "witness": None if ok else to_text(s)})
            if not ok:
                report.verdict = INVALID
                if stop_at_first:
                    break
        return report
    report = VerifyReport(VALID, "prov")
    for label, s in items:
        image = extend(mm, s)
        res = prov(target, image, proof_bound)
        report.obligations.append({"obligation": label, "image": to_text(image),
                                   "verdict": True if res.proved else None, "witness": None})
        if not res.proved:
            report.verdict = UNVERIFIABLE
    return report


# ------------------------------------------------------ constructions of maps

def identity_map(th: Theory, target: Optional[Theory] = None) -> ModellingMap:
    sig = th.sig
    return ModellingMap(
        th, target or th,
        {c: Const(c) for c in sig.constants},
        {f: TermTemplate(_params(k), App(f, tuple(Var(v) for v in _params(k)))) for f, k in sig.functions},
        {p: PredTemplate(_params(k), Atom(p, tuple(Var(v) for v in _params(k)))) for p, k in sig.predicates},
        name="identity")


def permutation_map(th: Theory, letter_perm: Mapping[str, str],
                    target: Optional[Theory] = None) -> ModellingMap:
    """Map induced by a permutation of the alphabet (applied letter by letter)."""
    letters = sorted(th.sig.letters, key=len, reverse=True)

    def image(s: str) -> str:
        out, i = [], 0
        while i < len(s):
            for a in letters:
                if s.startswith(a, i):
                    out.append(letter_perm.get(a, a))
                    i += len(a)
                    break
            else:
                raise ValueError(f"{s!r} is not a string over the alphabet")
        return "".join(out)

    base = identity_map(th, target)
    return ModellingMap(th, target or th, {c: Const(image(c)) for c in th.sig.constants},
                        base.func_map, base.pred_map, name=f"permutation {dict(letter_perm)}")


def compose(m2: ModellingMap, m1: ModellingMap) -> ModellingMap:
    """``m2 . m1``: first m1 (A -> B), then m2 (B -> C)."""
    if m1.guard is not None or m2.guard is not None:
        raise ValueError("composition of guarded maps is not supported")
    return ModellingMap(
        m1.source, m2.target,
        {c: extend_term(m2, t) for c, t in m1.const_map.items()},
        {f: TermTemplate(t.params, extend_term(m2, t.body)) for f, t in m1.func_map.items()},
        {p: PredTemplate(t.params, extend(m2, t.body)) for p, t in m1.pred_map.items()},
        PredTemplate(("x1", "x2"), extend(m2, m1.eq_template().body)),
        name=f"({m2.name}) . ({m1.name})")


def inverse(mm: ModellingMap) -> ModellingMap:
    """Inverse of a map that is a bijective renaming of constants, functions and predicates."""
    if mm.guard is not None:
        raise NotInvertible("guarded map")
    if mm.eq_image is not None and mm.eq_image.body != Eq(Var("x1"), Var("x2")):
        raise NotInvertible("equality is not mapped to equality")
    consts = {}
    for c, t in mm.const_map.items():
        if not isinstance(t, Const) or t.name in consts:
            raise NotInvertible(f"constant {c!r} is not mapped injectively onto a constant")
        consts[t.name] = Const(c)
    if set(consts) != set(mm.target.sig.constants):
        raise NotInvertible("constant map is not surjective")

    def renaming(table, kind, cls):
        out = {}
        for name, tmpl in table.items():
            body = tmpl.body
            args = tuple(Var(v) for v in tmpl.params)
            head = getattr(body, "function" if kind == "function" else "predicate", None)
            if not isinstance(body, cls) or body.args != args or head in out:
                raise NotInvertible(f"{kind} {name} is not mapped to a plain renaming")
            out[head] = (name, tmpl.params)
        return out

    funcs = renaming(mm.func_map, "function", App)
    preds = renaming(mm.pred_map, "predicate", Atom)
    return ModellingMap(
        mm.target, mm.source, consts,
        {g: TermTemplate(ps, App(f, tuple(Var(v) for v in ps))) for g, (f, ps) in funcs.items()},
        {q: PredTemplate(ps, Atom(p, tuple(Var(v) for v in ps))) for q, (p, ps) in preds.items()},
        name=f"inverse of {mm.name}")


def automorphisms(th: Theory) -> list:
    """All verified maps th -> th permuting the constants (predicates fixed)."""
    base = identity_map(th)
    consts = list(th.sig.constants)
    found = []
    for perm in itertools.permutations(consts):
        mm = ModellingMap(th, th, {c: Const(p) for c, p in zip(consts, perm)},
                          base.func_map, base.pred_map, name=f"perm{perm}")
        if verify(mm, stop_at_first=True).valid:
            found.append(mm)
    return found


# ------------------------------------------------- elementary equivalence

@dataclass
class EquivalenceReport:
    passed: bool
    depth: int
    checked: int
    witness: Optional[str] = None
    verdicts: Optional[tuple] = None
    differing: list = field(default_factory=list)

    @property
    def label(self) -> str:
        return f"PASS-at-depth-{self.depth}" if self.passed else "FAIL"


def _negations(f) -> int:
    n = 1 if isinstance(f, Not) else 0
    for attr in ("body", "left", "right"):
        child = getattr(f, attr, None)
        if child is not None and not isinstance(child, (str, Var, Const, App)):
            n += _negations(child)
    return n


def elementarily_equivalent(m1: ModellingMap, m2: ModellingMap, depth: int,
                            variables: Sequence[str] = ("x", "y", "z"),
                            include_constants: bool = False,
                            collect: bool = False) -> EquivalenceReport:
    """Compare verdicts on all source sentences of at most ``depth`` AST nodes.

    Sentences are relational (no function symbols) and, unless asked, free
    of constants.  They are tried smallest first, then with fewest
    negations, then in text order.  With ``collect`` every differing
    sentence is listed, not only the first.
    """
    if m1.source is not m2.source and m1.source.sig != m2.source.sig:
        raise ValueError("maps must share a source theory")
    sig = m1.source.sig
    forms = enumerate_formulas(sig, variables, depth,
                               constants=None if include_constants else (),
                               use_functions=False)
    sentences = sorted((f for f in forms if is_sentence(f)),
                       key=lambda f: (size(f), _negations(f), to_text(f)))
    report = EquivalenceReport(True, depth, 0)
    for s in sentences:
        a = decide(m1.target, extend(m1, s))
        b = decide(m2.target, extend(m2, s))
        report.checked += 1
        if a != b:
            if report.passed:
                report.passed, report.witness, report.verdicts = False, to_text(s), (a, b)
            report.differing.append(to_text(s))
            if not collect:
                break
    return report


# ---------------------------------------------------------------- restrict

def _as_unary(th: Theory, u) -> PredTemplate:
    if isinstance(u, PredTemplate):
        return u
    f = parse(u, th.sig) if isinstance(u, str) else u
    fv = sorted(free_vars(f))
    if len(fv) != 1:
        raise ValueError(f"restricting predicate must have exactly one free variable, has {fv}")
    return PredTemplate((fv[0],), f)


def relativize(f: Formula, u: PredTemplate) -> Formula:
    if isinstance(f, (Truth, Eq, Atom)):
        return f
    if isinstance(f, Not):
        return Not(relativize(f.body, u))
    if isinstance(f, BINARY):
        return type(f)(relativize(f.left, u), relativize(f.right, u))
    if isinstance(f, Exists):
        return Exists(f.var, And(u.apply([Var(f.var)]), relativize(f.body, u)))
    if isinstance(f, Forall):
        return Forall(f.var, Implies(u.apply([Var(f.var)]), relativize(f.body, u)))
    if isinstance(f, SecondOrderForall):
        return SecondOrderForall(f.pred, relativize(f.body, u))
    raise TypeError(f"not a formula: {f!r}")


def restrict(th: Theory, u) -> Theory:
    """Subtheory with quantifiers guarded by ``u`` and universe cut down to its satisfiers."""
    tmpl = _as_unary(th, u)
    axioms = tuple(relativize(a, tmpl) for a in th.axioms)
    structure = None
    if th.structure is not None:
        var = tmpl.params[0]
        keep = [e for e in th.structure.universe if evaluate(th.structure, tmpl.body, {var: e})]
        if not keep:
            raise ValueError(f"{to_text(tmpl.body)} is satisfied by no element")
        structure = th.structure.restrict_domain(keep)
    return Theory(th.sig, axioms, structure, name=f"{th.name} | {to_text(tmpl.body)}")


# -------------------------------------------------------------------- Peano

PEANO_AXIOMS = (
    ("0 is a number", 'NUMBER("0")'),
    ("0 has no predecessor", '!(exists x. s(x) = "0")'),
    ("Every number has a successor", "forall x. exists y. s(x) = y"),
    ("Two numbers are the same if they have the same successor", "forall x, y. s(x) = s(y) -> x = y"),
    ("Induction", 'forall2 P. P("0") & (forall x. P(x) -> P(s(x))) -> forall x. P(x)'),
)
TOTALITY = "Every number has a successor"


def peano_theory() -> Theory:
    sig = Signature(constants=("0",), functions=(("s", 1),), predicates=(("NUMBER", 1),))
    return Theory(sig, tuple(parse(text, sig) for _, text in PEANO_AXIOMS), name="Peano")


def peano_map(target: Theory) -> ModellingMap:
    """0 -> 0, s(x) -> c(x, '), NUMBER -> NUMERAL, atoms and quantifiers guarded by NUMERAL."""
    x1 = Var("x1")
    return ModellingMap(
        peano_theory(), target,
        {"0": Const("0")},
        {"s": TermTemplate(("x1",), App("c", (x1, Const("'"))))},
        {"NUMBER": PredTemplate(("x1",), Atom("NUMERAL", (x1,)))},
        guard=PredTemplate(("x1",), Atom("NUMERAL", (x1,))),
        name="Peano -> PROOF THEORY | NUMERAL")


def predicate_pool(th: Theory, max_size: int = 5, constants: Optional[Sequence[str]] = None,
                   arity: int = 1) -> list:
    """Predicate templates in x1 (.. xk) of at most ``max_size`` nodes over the signature."""
    params = _params(arity)
    forms = enumerate_formulas(th.sig, params + ("y1",), max_size, constants=constants)
    return [PredTemplate(params, f) for f in forms if free_vars(f) <= set(params)]


@dataclass
class PeanoReport:
    n: int
    rows: list = field(default_factory=list)
    pool_size: int = 0
    longest_numeral: str = ""

    @property
    def passed(self) -> bool:
        for row in self.rows:
            if row["axiom"] == TOTALITY:
                if row["failing_at"] != [self.longest_numeral]:
                    return False
            elif not row["verdict"]:
                return False
        return True


def _universal_failures(th: Theory, f: Formula) -> list:
    if not isinstance(f, Forall):
        return []
    return [e for e in th.structure.universe if not evaluate(th.structure, f.body, {f.var: e})]


def peano_check(n: int = 4, pool: Optional[Sequence[PredTemplate]] = None,
                pool_size: int = 5) -> PeanoReport:
    if n < 2:
        raise ValueError("n must be >= 2")
    restricted = restrict(generate_concat_n(("0", "'"), n), "NUMERAL(x)")
    numerals = list(restricted.structure.universe)
    if pool is None:
        pool = predicate_pool(restricted, pool_size, constants=numerals + ["'"])
    mm = peano_map(restricted)
    report = PeanoReport(n, pool_size=len(pool), longest_numeral=max(numerals, key=len))
    for (label, _), axiom in zip(PEANO_AXIOMS, mm.source.axioms):
        image = extend(mm, axiom)
        ok = decide(restricted, image, pool=pool)
        row = {"axiom": label, "image": to_text(image), "verdict": ok, "failing_at": []}
        if not ok:
            row["failing_at"] = _universal_failures(restricted, image)
        if label == TOTALITY:
            row["expected_deviation"] = "c(x, ') is partial at the length bound"
        report.rows.append(row)
    return report


# ----------------------------------------------------- bounded Gödel embedding

def toy_decidable_theory() -> Theory:
    """Three named elements; P decided by axioms, Q derived from P by one rule."""
    from .structures import FiniteStructure
    sig = Signature(constants=("a", "b", "c"), predicates=(("P", 1), ("Q", 1)))
    axioms = tuple(parse(t, sig) for t in (
        'P("a")', '!P("b")', 'P("c")',
        "forall x. P(x) -> Q(x)", "forall x. !P(x) -> !Q(x)"))
    structure = FiniteStructure(("a", "b", "c"), {"a": "a", "b": "b", "c": "c"}, {},
                                {"P": {("a",), ("c",)}, "Q": {("a",), ("c",)}})
    return Theory(sig, axioms, structure, name="toy")


@dataclass
class GodelReport:
    bound: int
    obligations: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if all(o["verdict"] == "proved" for o in self.obligations):
            return "PASS"
        return "INCONCLUSIVE"


def godel_embedding_check(th: Theory, bound: int = 50) -> GodelReport:
    """P(a) maps to Prov(sub(P, a)); decided atoms must be provable within ``bound`` lines."""
    if th.structure is None:
        raise PreconditionError("the embedding needs a decidable theory (attach a structure)")
    if th.failing_axioms():
        raise PreconditionError("theory axioms are not all true in its structure")
    names = {}
    for c in th.sig.constants:
        names.setdefault(th.structure.constant_map[c], Const(c))
    report = GodelReport(bound)
    for pred, k in th.sig.predicates:
        for tup in itertools.product(th.structure.universe, repeat=k):
            if any(e not in names for e in tup):
                raise PreconditionError(f"element without a name among {tup}")
            atom = Atom(pred, tuple(names[e] for e in tup))
            holds = evaluate(th.structure, atom)
            goal = atom if holds else Not(atom)
            res = prov(th, goal, bound)
            other = prov(th, Not(atom) if holds else atom, bound)
            sound = res.proved and replay_proof(th, res.derivation)
            args = ", ".join(to_text(a) for a in atom.args)
            ob = f"Prov(sub({pred}, {args}))" if holds else f"Prov(sub(!{pred}, {args}))"
            report.obligations.append({
                "obligation": ob,
                "sentence": to_text(goal),
                "verdict": "proved" if sound else "inconclusive",
                "length": len(res.derivation) if res.proved else None,
                "opposite_found": other.proved,
            })
    return report


# ------------------------------------------------------------ Tarskian image

def _fresh_names(prefix: str, taken: set):
    for i in itertools.count():
        name = f"{prefix}{i}"
        if name not in taken:
            taken.add(name)
            yield name


def tarskian_image(th: Theory) -> str:
    """The single existential set-theory sentence condensing the theory's axioms."""
    from .syntax import all_vars, symbols as used_symbols

    taken: set = set()
    for a in th.axioms:
        taken |= all_vars(a)
    used = {"constants": set(), "functions": set(), "predicates": set()}
    for a in th.axioms:
        for key, vals in used_symbols(a).items():
            used[key] |= vals

    def take(name):
        base, i = name, 0
        while name in taken:
            i += 1
            name = f"{base}{i}"
        taken.add(name)
        return name

    u = take("u")
    rel = {p: take(f"r{p}") for p, _ in sorted(used["predicates"])}
    fun = {f: take(f"r{f}") for f, _ in sorted(used["functions"])}
    const_order = [c for c in th.sig.constants if c in used["constants"]] + \
        sorted(used["constants"] - set(th.sig.constants))
    con = {c: take(f"k{i}") for i, c in enumerate(const_order)}
    fresh = _fresh_names("w", taken)

    def member(args, r):
        args = tuple(args)
        if len(args) == 1:
            return Atom("in", (args[0], Var(r)))
        return Atom("in", (App(f"tup{len(args)}", args), Var(r)))

    def flatten(t, defs):
        if isinstance(t, Var):
            return t
        w = next(fresh)
        if isinstance(t, Const):
            defs.append((w, member([Var(w)], con[t.name])))
        else:
            args = [flatten(a, defs) for a in t.args]
            defs.append((w, member(args + [Var(w)], fun[t.function])))
        return Var(w)

    def close(defs, body):
        for w, d in reversed(defs):
            body = Exists(w, And(d, body))
        return body

    def tr(f, preds):
        if isinstance(f, Truth):
            return f
        if isinstance(f, Eq):
            defs = []
            a, b = flatten(f.left, defs), flatten(f.right, defs)
            return close(defs, Eq(a, b))
        if isinstance(f, Atom):
            defs = []
            args = [flatten(a, defs) for a in f.args]
            r = preds.get(f.predicate, rel.get(f.predicate))
            return close(defs, member(args, r) if args else Atom("in", (Var(u), Var(r))))
        if isinstance(f, Not):
            return Not(tr(f.body, preds))
        if isinstance(f, BINARY):
            return type(f)(tr(f.left, preds), tr(f.right, preds))
        if isinstance(f, Exists):
            return Exists(f.var, And(Atom("in", (Var(f.var), Var(u))), tr(f.body, preds)))
        if isinstance(f, Forall):
            return Forall(f.var, Implies(Atom("in", (Var(f.var), Var(u))), tr(f.body, preds)))
        if isinstance(f, SecondOrderForall):
            p = take(f"p{f.pred}")
            k = _pred_var_arity(f.body, f.pred) or 1
            return Forall(p, Implies(typed(p, k), tr(f.body, {**preds, f.pred: p})))
        raise TypeError(f"not a formula: {f!r}")

    def typed(r, k):
        t = next(fresh)
        if k == 1:
            return Forall(t, Implies(Atom("in", (Var(t), Var(r))), Atom("in", (Var(t), Var(u)))))
        xs = [next(fresh) for _ in range(k)]
        inner = conj([Atom("in", (Var(x), Var(u))) for x in xs] +
                     [Eq(Var(t), App(f"tup{k}", tuple(Var(x) for x in xs)))])
        for x in reversed(xs):
            inner = Exists(x, inner)
        return Forall(t, Implies(Atom("in", (Var(t), Var(r))), inner))

    clauses = []
    for (p, k) in sorted(used["predicates"]):
        if k >= 1:
            clauses.append(typed(rel[p], k))
    for (f, k) in sorted(used["functions"]):
        r = fun[f]
        clauses.append(typed(r, k + 1))
        xs = [next(fresh) for _ in range(k)]
        a, b = next(fresh), next(fresh)
        body = Implies(And(member([Var(x) for x in xs] + [Var(a)], r),
                           member([Var(x) for x in xs] + [Var(b)], r)), Eq(Var(a), Var(b)))
        for v in reversed(xs + [a, b]):
            body = Forall(v, body)
        clauses.append(body)
    for c in const_order:
        w, v = next(fresh), next(fresh)
        k = con[c]
        clauses.append(Exists(w, conj([
            Atom("in", (Var(w), Var(u))), Atom("in", (Var(w), Var(k))),
            Forall(v, Implies(Atom("in", (Var(v), Var(k))), Eq(Var(v), Var(w))))])))
    clauses += [tr(a, {}) for a in th.axioms]
    body = conj(clauses)
    for name in reversed([u] + list(rel.values()) + list(fun.values()) + list(con.values())):
        body = Exists(name, body)
    return to_text(body)


def set_theory_signature(text: str) -> Signature:
    """Signature able to re-read a Tarskian image: membership plus tuple functions."""
    import re
    ks = sorted({int(k) for k in re.findall(r"\btup(\d+)\(", text)})
    return Signature(functions=tuple((f"tup{k}", k) for k in ks), predicates=(("in", 2),))
