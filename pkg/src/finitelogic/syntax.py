"""Abstract and concrete syntax of first-order strings.

Formulas are immutable dataclasses.  Concrete syntax (ASCII)::

    forall x. phi      exists x, y. phi      forall2 P. phi
    !phi   phi & psi   phi | psi   phi -> psi   phi <-> psi
    t = s   t != s   t in s   Name(t1, ..., tk)   true   false

Constants are double-quoted tokens (``"0'"``); bare decimal literals are
also read as constants and, on request, printed bare.  Variables are identifiers starting with a
lowercase letter.
"""

from __future__ import annotations

import contextvars
import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence, Union

__all__ = [
    "Signature", "Var", "Const", "App", "Eq", "Atom", "Not", "Or", "And",
    "Implies", "Iff", "Exists", "Forall", "SecondOrderForall", "Truth",
    "Term", "Formula", "Role", "ParseError", "PredTemplate", "parse",
    "parse_term", "to_text", "free_vars", "substitute", "substitute_many",
    "normalize", "classify_role", "instantiate_predicate", "is_sentence",
    "size", "enumerate_formulas", "conj", "disj", "symbols",
]

LOGICAL_SYMBOLS = frozenset(
    {"!", "|", "&", "->", "<->", "=", "!=", "(", ")", ",", ".", ";",
     "forall", "exists", "forall2", "in", "true", "false"})


class ParseError(ValueError):
    """Syntax, arity or unknown-symbol error at a character offset."""

    def __init__(self, message: str, pos: int = 0, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


@dataclass(frozen=True)
class Signature:
    letters: tuple = ()
    constants: tuple = ()
    functions: tuple = ()   # (name, arity) pairs
    predicates: tuple = ()  # (name, arity) pairs
    includes_equality: bool = True
    numerals: bool = False  # accept every decimal literal as a constant

    def __post_init__(self):
        for attr in ("letters", "constants", "functions", "predicates"):
            object.__setattr__(self, attr, tuple(
                tuple(x) if isinstance(x, list) else x for x in getattr(self, attr)))
        names = [n for n, _ in self.functions] + [n for n, _ in self.predicates]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate function/predicate names in {names}")
        if len(set(self.constants)) != len(self.constants):
            raise ValueError("duplicate constants")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("duplicate letters")
        for n, k in self.functions:
            if k < 1:
                raise ValueError(f"function {n} must have arity >= 1")
        for n, k in self.predicates:
            if k < 0:
                raise ValueError(f"predicate {n} has negative arity")
        for a in self.letters:
            if not a or not a.isprintable():
                raise ValueError(f"bad letter {a!r}")
            if a in LOGICAL_SYMBOLS or any(c in a for c in ",;"):
                raise ValueError(f"letter {a!r} clashes with logical notation")

    @property
    def function_arity(self) -> dict:
        return dict(self.functions)

    @property
    def predicate_arity(self) -> dict:
        return dict(self.predicates)

    def has_constant(self, name: str) -> bool:
        return name in self.constants or (self.numerals and name.isdigit())

    def extend(self, *, constants=(), functions=(), predicates=()) -> "Signature":
        return Signature(
            letters=self.letters,
            constants=self.constants + tuple(c for c in constants if c not in self.constants),
            functions=self.functions + tuple(f for f in functions if f not in self.functions),
            predicates=self.predicates + tuple(p for p in predicates if p not in self.predicates),
            includes_equality=self.includes_equality,
            numerals=self.numerals,
        )


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class App:
    function: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


Term = Union[Var, Const, App]


# ------------------------------------------------------------- formulas

@dataclass(frozen=True)
class Truth:
    value: bool


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class SecondOrderForall:
    pred: str
    body: "Formula"


Formula = Union[Truth, Eq, Atom, Not, Or, And, Implies, Iff, Exists, Forall,
                SecondOrderForall]
BINARY = (Or, And, Implies, Iff)
QUANTIFIERS = (Exists, Forall)
TERMS = (Var, Const, App)


def is_term(x) -> bool:
    return isinstance(x, TERMS)


def conj(parts: Sequence[Formula]) -> Formula:
    """Left-nested conjunction (prints without parentheses); empty list gives ``true``."""
    parts = list(parts)
    if not parts:
        return Truth(True)
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Sequence[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return Truth(False)
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


class Role(enum.Enum):
    VARIABLE = "VARIABLE"
    OPEN_TERM = "OPEN_TERM"
    CLOSED_TERM = "CLOSED_TERM"
    PREDICATE = "PREDICATE"
    SENTENCE = "SENTENCE"
    LOGICAL_CONSTANT = "LOGICAL_CONSTANT"
    NOISE = "NOISE"


# ------------------------------------------------------------- tokenizer

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<op><->|->|!=|∈|[!&|=(),.])
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind == "string":
            raw = m.group()[1:-1]
            out.append(_Tok("const", re.sub(r"\\(.)", r"\1", raw), pos))
        elif kind == "num":
            out.append(_Tok("const", m.group(), pos))
        elif kind == "ident":
            word = m.group()
            kw = word in ("forall", "exists", "forall2", "in", "true", "false")
            out.append(_Tok("kw" if kw else "ident", word, pos))
        elif kind == "op":
            if m.group() == "∈":
                out.append(_Tok("kw", "in", pos))
            else:
                out.append(_Tok("op", m.group(), pos))
        pos = m.end()
    out.append(_Tok("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, sig: Optional[Signature]):
        self.text = text
        self.sig = sig
        self.toks = _tokenize(text)
        self.i = 0
        self.second_order: dict = {}  # predicate variable -> arity (None until used)

    # helpers
    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, value: str) -> bool:
        t = self.peek()
        return t.kind in ("op", "kw") and t.value == value

    def expect(self, value: str) -> _Tok:
        if not self.at(value):
            t = self.peek()
            raise ParseError(f"expected {value!r}, found {t.value or 'end of input'!r}", t.pos, self.text)
        return self.next()

    def error(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.pos, self.text)

    # grammar
    def formula(self) -> Formula:
        left = self.implication()
        if self.at("<->"):
            self.next()
            return Iff(left, self.formula())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.next()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.at("|"):
            self.next()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.at("&"):
            self.next()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.at("!"):
            self.next()
            return Not(self.unary())
        if self.at("forall") or self.at("exists"):
            kind = self.next().value
            names = self.var_list()
            self.expect(".")
            body = self.formula()
            cls = Forall if kind == "forall" else Exists
            for n in reversed(names):
                body = cls(n, body)
            return body
        if self.at("forall2"):
            self.next()
            names = []
            while True:
                t = self.next()
                if t.kind != "ident":
                    self.error("expected predicate variable", t)
                names.append(t.value)
                if not self.at(","):
                    break
                self.next()
            self.expect(".")
            saved = dict(self.second_order)
            for n in names:
                self.second_order[n] = None
            body = self.formula()
            self.second_order = saved
            for n in reversed(names):
                body = SecondOrderForall(n, body)
            return body
        return self.primary()

    def var_list(self) -> list:
        names = []
        while True:
            t = self.next()
            if t.kind != "ident" or not t.value[0].islower():
                self.error("expected variable name", t)
            names.append(t.value)
            if not self.at(","):
                return names
            self.next()

    def primary(self) -> Formula:
        t = self.peek()
        if self.at("true") or self.at("false"):
            self.next()
            return Truth(t.value == "true")
        if self.at("("):
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "ident" and self._is_predicate(t.value):
            self.next()
            args = self.arg_list() if self.at("(") else ()
            self._check_pred_arity(t, len(args))
            return Atom(t.value, args)
        left = self.term()
        if self.at("="):
            self.next()
            return Eq(left, self.term())
        if self.at("!="):
            self.next()
            return Not(Eq(left, self.term()))
        if self.at("in"):
            tok = self.next()
            self._check_pred_arity(_Tok("ident", "in", tok.pos), 2)
            return Atom("in", (left, self.term()))
        self.error("expected '=', '!=' or 'in' after term")

    def _is_predicate(self, name: str) -> bool:
        if name in self.second_order:
            return True
        if self.sig is None:
            return name[0].isupper()
        return name in self.sig.predicate_arity

    def _check_pred_arity(self, tok: _Tok, k: int):
        name = tok.value
        if name in self.second_order:
            known = self.second_order[name]
            if known is None:
                self.second_order[name] = k
            elif known != k:
                self.error(f"predicate variable {name} used with arity {k}, expected {known}", tok)
            return
        if self.sig is None:
            return
        arity = self.sig.predicate_arity.get(name)
        if arity is None:
            self.error(f"unknown predicate {name!r}", tok)
        if arity != k:
            self.error(f"arity mismatch: {name} takes {arity} arguments, got {k}", tok)

    def arg_list(self) -> tuple:
        self.expect("(")
        args = [self.term()]
        while self.at(","):
            self.next()
            args.append(self.term())
        self.expect(")")
        return tuple(args)

    def term(self) -> Term:
        t = self.next()
        if t.kind == "const":
            if self.sig is not None and not self.sig.has_constant(t.value):
                self.error(f"unknown constant {t.value!r}", t)
            return Const(t.value)
        if t.kind != "ident":
            self.error(f"expected term, found {t.value or 'end of input'!r}", t)
        if self.at("("):
            args = self.arg_list()
            if self.sig is not None:
                arity = self.sig.function_arity.get(t.value)
                if arity is None:
                    self.error(f"unknown function {t.value!r}", t)
                if arity != len(args):
                    self.error(f"arity mismatch: {t.value} takes {arity} arguments, got {len(args)}", t)
            return App(t.value, args)
        if not t.value[0].islower():
            self.error(f"unknown symbol {t.value!r}", t)
        return Var(t.value)


def parse(text: str, sig: Optional[Signature] = None) -> Formula:
    """Parse a formula.  With ``sig=None`` any capitalised name is a predicate."""
    p = _Parser(text, sig)
    f = p.formula()
    if p.peek().kind != "eof":
        p.error(f"unexpected {p.peek().value!r}")
    return f


def parse_term(text: str, sig: Optional[Signature] = None) -> Term:
    p = _Parser(text, sig)
    t = p.term()
    if p.peek().kind != "eof":
        p.error(f"unexpected {p.peek().value!r}")
    return t


# --------------------------------------------------------------- printer

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _term_text(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        if t.name.isdigit() and _BARE_NUMERALS.get():
            return t.name
        return '"' + t.name.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return f"{t.function}({', '.join(_term_text(a) for a in t.args)})"


def _prec(f) -> int:
    if isinstance(f, BINARY):
        return _PREC[type(f)]
    if isinstance(f, (Exists, Forall, SecondOrderForall)):
        return 0
    return 5


_BARE_NUMERALS = contextvars.ContextVar("bare_numerals", default=False)


def to_text(f, bare_numerals: bool = False) -> str:
    """Print a formula or term so that ``parse`` reads it back unchanged."""
    token = _BARE_NUMERALS.set(bare_numerals)
    try:
        if is_term(f):
            return _term_text(f)
        return _fmt(f, top=True)
    finally:
        _BARE_NUMERALS.reset(token)


def _fmt(f, top: bool = False) -> str:
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    if isinstance(f, Eq):
        return f"{_term_text(f.left)} = {_term_text(f.right)}"
    if isinstance(f, Atom):
        if f.predicate == "in" and len(f.args) == 2:
            return f"{_term_text(f.args[0])} in {_term_text(f.args[1])}"
        if not f.args:
            return f.predicate
        return f"{f.predicate}({', '.join(_term_text(a) for a in f.args)})"
    if isinstance(f, Not):
        inner = f.body
        if isinstance(inner, Eq):
            return f"{_term_text(inner.left)} != {_term_text(inner.right)}"
        if (isinstance(inner, Atom) and inner.predicate == "in" or _prec(inner) < 5
                or isinstance(inner, Not) and isinstance(inner.body, Eq)):
            return f"!({_fmt(inner, top=True)})"
        return "!" + _fmt(inner)
    if isinstance(f, BINARY):
        p = _PREC[type(f)]
        right_assoc = isinstance(f, (Implies, Iff))
        lp = p + 1 if right_assoc else p
        rp = p if right_assoc else p + 1
        return f"{_wrap(f.left, lp)} {_OPS[type(f)]} {_wrap(f.right, rp)}"
    if isinstance(f, (Exists, Forall)):
        kind = "exists" if isinstance(f, Exists) else "forall"
        names, body = [f.var], f.body
        while type(body) is type(f):
            names.append(body.var)
            body = body.body
        text = f"{kind} {', '.join(names)}. {_fmt(body, top=True)}"
        return text if top else f"({text})"
    if isinstance(f, SecondOrderForall):
        text = f"forall2 {f.pred}. {_fmt(f.body, top=True)}"
        return text if top else f"({text})"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f, min_prec: int) -> str:
    if _prec(f) < min_prec:
        return f"({_fmt(f, top=True)})"
    return _fmt(f)


# ------------------------------------------------------- free variables

def free_vars(f) -> frozenset:
    if isinstance(f, Var):
        return frozenset({f.name})
    if isinstance(f, Const) or isinstance(f, Truth):
        return frozenset()
    if isinstance(f, App) or isinstance(f, Atom):
        return frozenset().union(*(free_vars(a) for a in f.args)) if f.args else frozenset()
    if isinstance(f, Eq):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    if isinstance(f, SecondOrderForall):
        return free_vars(f.body)
    raise TypeError(f"unexpected node {f!r}")


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def all_vars(f) -> frozenset:
    """Free and bound variable names."""
    if isinstance(f, QUANTIFIERS):
        return all_vars(f.body) | {f.var}
    if isinstance(f, Var):
        return frozenset({f.name})
    return frozenset().union(frozenset(), *(all_vars(c) for c in _children(f)))


def _children(f) -> tuple:
    if isinstance(f, (App, Atom)):
        return f.args
    if isinstance(f, Eq) or isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, (Not, Exists, Forall, SecondOrderForall)):
        return (f.body,)
    return ()


def symbols(f) -> dict:
    """Non-logical symbols used: {'constants': set, 'functions': set, 'predicates': set}."""
    out = {"constants": set(), "functions": set(), "predicates": set()}

    def walk(g, bound_preds):
        if isinstance(g, Const):
            out["constants"].add(g.name)
        elif isinstance(g, App):
            out["functions"].add((g.function, len(g.args)))
        elif isinstance(g, Atom) and g.predicate not in bound_preds:
            out["predicates"].add((g.predicate, len(g.args)))
        if isinstance(g, SecondOrderForall):
            walk(g.body, bound_preds | {g.pred})
            return
        for c in _children(g):
            walk(c, bound_preds)

    walk(f, frozenset())
    return out


def size(f) -> int:
    """Number of AST nodes; multi-argument nodes count once."""
    return 1 + sum(size(c) for c in _children(f))


# ---------------------------------------------------------- substitution

def _fresh(base: str, avoid) -> str:
    stem = base.rstrip("0123456789") or base
    for i in itertools.count():
        cand = f"{stem}{i}"
        if cand not in avoid:
            return cand


def substitute_many(f, mapping: Mapping[str, Term]):
    """Simultaneous capture-avoiding substitution of terms for free variables."""
    for t in mapping.values():
        if not is_term(t):
            raise TypeError(f"can only substitute terms, got {t!r}")
    mapping = {v: t for v, t in mapping.items() if not (isinstance(t, Var) and t.name == v)}
    if not mapping:
        return f
    return _subst(f, mapping)


def substitute(f, var: str, t: Term):
    """Replace free occurrences of ``var`` in ``f`` by the term ``t``."""
    return substitute_many(f, {var: t})


def _subst(f, mapping):
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    if isinstance(f, (Const, Truth)):
        return f
    if isinstance(f, App):
        return App(f.function, tuple(_subst(a, mapping) for a in f.args))
    if isinstance(f, Atom):
        return Atom(f.predicate, tuple(_subst(a, mapping) for a in f.args))
    if isinstance(f, Eq):
        return Eq(_subst(f.left, mapping), _subst(f.right, mapping))
    if isinstance(f, Not):
        return Not(_subst(f.body, mapping))
    if isinstance(f, BINARY):
        return type(f)(_subst(f.left, mapping), _subst(f.right, mapping))
    if isinstance(f, SecondOrderForall):
        return SecondOrderForall(f.pred, _subst(f.body, mapping))
    if isinstance(f, QUANTIFIERS):
        inner = {v: t for v, t in mapping.items() if v != f.var}
        body_free = free_vars(f.body)
        inner = {v: t for v, t in inner.items() if v in body_free}
        if not inner:
            return f
        incoming = frozenset().union(*(free_vars(t) for t in inner.values()))
        var, body = f.var, f.body
        if var in incoming:
            new = _fresh(var, incoming | all_vars(body) | set(inner))
            body = _subst(body, {var: Var(new)})
            var = new
        return type(f)(var, _subst(body, inner))
    raise TypeError(f"unexpected node {f!r}")


@dataclass(frozen=True)
class PredTemplate:
    """A predicate given by a formula with named parameters, e.g. (x1,), x1 = "0"."""
    params: tuple
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        extra = free_vars(self.body) - set(self.params)
        if extra:
            raise ValueError(f"template has free variables {sorted(extra)} beyond its parameters")

    @property
    def arity(self) -> int:
        return len(self.params)

    def apply(self, args: Sequence[Term]) -> Formula:
        if len(args) != self.arity:
            raise ValueError(f"template of arity {self.arity} applied to {len(args)} arguments")
        return substitute_many(self.body, dict(zip(self.params, args)))


def instantiate_predicate(f: Formula, pred: str, template: PredTemplate) -> Formula:
    """Replace every atom ``pred(args)`` by the template applied to ``args``."""
    if isinstance(f, Atom):
        if f.predicate == pred:
            return template.apply(f.args)
        return f
    if isinstance(f, (Truth, Eq)):
        return f
    if isinstance(f, Not):
        return Not(instantiate_predicate(f.body, pred, template))
    if isinstance(f, BINARY):
        return type(f)(instantiate_predicate(f.left, pred, template),
                       instantiate_predicate(f.right, pred, template))
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, instantiate_predicate(f.body, pred, template))
    if isinstance(f, SecondOrderForall):
        if f.pred == pred:
            return f
        return SecondOrderForall(f.pred, instantiate_predicate(f.body, pred, template))
    raise TypeError(f"unexpected node {f!r}")


def normalize(f: Formula) -> Formula:
    """Rewrite to the connective set {!, |, exists} (plus ``forall2``)."""
    if isinstance(f, (Truth, Eq, Atom)):
        return f
    if isinstance(f, Not):
        return Not(normalize(f.body))
    if isinstance(f, Or):
        return Or(normalize(f.left), normalize(f.right))
    if isinstance(f, And):
        return Not(Or(Not(normalize(f.left)), Not(normalize(f.right))))
    if isinstance(f, Implies):
        return Or(Not(normalize(f.left)), normalize(f.right))
    if isinstance(f, Iff):
        a, b = normalize(f.left), normalize(f.right)
        both = Not(Or(Not(a), Not(b)))
        neither = Not(Or(a, b))
        return Or(both, neither)
    if isinstance(f, Exists):
        return Exists(f.var, normalize(f.body))
    if isinstance(f, Forall):
        return Not(Exists(f.var, Not(normalize(f.body))))
    if isinstance(f, SecondOrderForall):
        return SecondOrderForall(f.pred, normalize(f.body))
    raise TypeError(f"unexpected node {f!r}")


# ----------------------------------------------------------------- roles

def classify_role(text: str, sig: Optional[Signature] = None) -> Role:
    """Cast a string into exactly one role; unparseable strings are NOISE."""
    stripped = text.strip()
    if stripped in LOGICAL_SYMBOLS - {"(", ")", ",", ".", ";"}:
        return Role.LOGICAL_CONSTANT
    try:
        t = parse_term(stripped, sig)
    except ParseError:
        pass
    else:
        if isinstance(t, Var):
            return Role.VARIABLE
        return Role.OPEN_TERM if free_vars(t) else Role.CLOSED_TERM
    try:
        f = parse(stripped, sig)
    except ParseError:
        return Role.NOISE
    return Role.PREDICATE if free_vars(f) else Role.SENTENCE


# ----------------------------------------------------------- enumeration

def _compositions(total: int, parts: int) -> Iterator[tuple]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_formulas(
    sig: Signature,
    variables: Sequence[str],
    max_size: int,
    *,
    constants: Optional[Sequence[str]] = None,
    use_functions: bool = True,
    quantify: bool = True,
) -> list:
    """All formulas over {=, atoms, !, |, exists} up to ``max_size`` nodes.

    Variables (free or bound) are drawn from ``variables``.  The result is
    ordered by size, then by printed text.
    """
    consts = list(sig.constants if constants is None else constants)
    terms: dict = {1: [Var(v) for v in variables] + [Const(c) for c in consts]}
    funcs = sig.functions if use_functions else ()
    for s in range(2, max_size + 1):
        layer = []
        for name, k in funcs:
            for comp in _compositions(s - 1, k):
                for args in itertools.product(*(terms.get(c, []) for c in comp)):
                    layer.append(App(name, args))
        terms[s] = layer
    forms: dict = {}
    preds = [(n, k) for n, k in sig.predicates]
    for s in range(1, max_size + 1):
        layer = []
        if sig.includes_equality:
            for a, b in _compositions(s - 1, 2) if s >= 3 else ():
                for l in terms.get(a, []):
                    for r in terms.get(b, []):
                        layer.append(Eq(l, r))
        for name, k in preds:
            if k == 0:
                if s == 1:
                    layer.append(Atom(name, ()))
                continue
            for comp in _compositions(s - 1, k):
                for args in itertools.product(*(terms.get(c, []) for c in comp)):
                    layer.append(Atom(name, args))
        for g in forms.get(s - 1, []):
            layer.append(Not(g))
        for a, b in _compositions(s - 1, 2) if s >= 3 else ():
            for l in forms.get(a, []):
                for r in forms.get(b, []):
                    layer.append(Or(l, r))
        if quantify:
            for g in forms.get(s - 1, []):
                fv = free_vars(g)
                for v in variables:
                    if v in fv:
                        layer.append(Exists(v, g))
        layer.sort(key=to_text)
        forms[s] = layer
    return [f for s in range(1, max_size + 1) for f in forms[s]]
