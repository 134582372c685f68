"""Predicate sequences over arithmetic strings and the diagonal constructions.

Predicates are unary formulas in ``x`` (binary ones in ``y``, ``x``: row
index first) over numerals, ``s``, ``add``, ``mul`` and ``lt``.  They are
evaluated over the natural numbers; quantifiers must be bounded
(``exists v. lt(v, t) & ...`` / ``forall v. lt(v, t) -> ...``) so every
verdict is total.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import itertools
from typing import Callable, Optional, Sequence, Union

from .syntax import (
    And, Atom, Const, Eq, Exists, Forall, Formula, Iff, Implies, Not, Or,
    Signature, Truth, Var, conj, enumerate_formulas, free_vars, parse, size, to_text,
)

__all__ = [
    "ARITH", "arith_eval", "check_bounded", "UnboundedQuantifier", "PredicateSequence",
    "from_list", "enumerated_binary", "enumeration_sequence", "constant_sequence", "shift_sequence",
    "table_sequence", "diagonal_sequence", "negated", "index_of", "enumerated",
    "DiagonalPredicate", "build_dn", "UniversalTable", "build_table", "CheckResult",
    "cauchy_check", "limit_check", "universal_check", "minor_theorem_check",
    "binary_real", "bridge_check", "load_sequence", "numeral", "show",
]

ARITH = Signature(functions=(("s", 1), ("add", 2), ("mul", 2)), predicates=(("lt", 2),),
                  numerals=True)

DEFAULT_CEILING = 10_000


class UnboundedQuantifier(ValueError):
    pass


def numeral(i: int) -> Const:
    return Const(str(i))


def show(f) -> str:
    return to_text(f, bare_numerals=True)


# ------------------------------------------------------------- evaluation

def _bound_of(f, kind):
    """The bound term ``t`` of a bounded quantifier, or None."""
    body = f.body
    shape = And if kind is Exists else Implies
    if isinstance(body, shape) and isinstance(body.left, Atom) and body.left.predicate == "lt":
        v, t = body.left.args
        if v == Var(f.var) and f.var not in free_vars(Eq(t, t)):
            return t
    return None


def check_bounded(f: Formula) -> None:
    """Reject formulas with quantifiers that are not bounded by ``lt``."""
    if isinstance(f, (Exists, Forall)):
        if _bound_of(f, type(f)) is None:
            raise UnboundedQuantifier(f"unbounded quantifier in {show(f)}")
        check_bounded(f.body)
    elif isinstance(f, Not):
        check_bounded(f.body)
    elif isinstance(f, (And, Or, Implies, Iff)):
        check_bounded(f.left)
        check_bounded(f.right)
    elif isinstance(f, Atom) and f.predicate != "lt":
        raise ValueError(f"unknown arithmetic predicate {f.predicate}")
    elif not isinstance(f, (Atom, Eq, Truth)):
        raise ValueError(f"not an arithmetic formula: {f!r}")


def _term(t, env) -> int:
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Const):
        if not t.name.isdigit():
            raise ValueError(f"non-numeral constant {t.name!r}")
        return int(t.name)
    args = [_term(a, env) for a in t.args]
    if t.function == "s":
        return args[0] + 1
    if t.function == "add":
        return args[0] + args[1]
    if t.function == "mul":
        return args[0] * args[1]
    raise ValueError(f"unknown arithmetic function {t.function}")


def arith_eval(f: Formula, env: dict, ceiling: int = DEFAULT_CEILING) -> bool:
    """Truth over the natural numbers; bounded quantifiers are run exactly."""
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, Eq):
        return _term(f.left, env) == _term(f.right, env)
    if isinstance(f, Atom):
        a, b = (_term(t, env) for t in f.args)
        return a < b
    if isinstance(f, Not):
        return not arith_eval(f.body, env, ceiling)
    if isinstance(f, Or):
        return arith_eval(f.left, env, ceiling) or arith_eval(f.right, env, ceiling)
    if isinstance(f, And):
        return arith_eval(f.left, env, ceiling) and arith_eval(f.right, env, ceiling)
    if isinstance(f, Implies):
        return (not arith_eval(f.left, env, ceiling)) or arith_eval(f.right, env, ceiling)
    if isinstance(f, Iff):
        return arith_eval(f.left, env, ceiling) == arith_eval(f.right, env, ceiling)
    if isinstance(f, (Exists, Forall)):
        t = _bound_of(f, type(f))
        if t is None:
            raise UnboundedQuantifier(f"unbounded quantifier in {show(f)}")
        top = _term(t, env)
        if top > ceiling:
            raise ValueError(f"quantifier bound {top} exceeds the ceiling {ceiling}")
        body = f.body.right
        want = isinstance(f, Exists)
        for v in range(top):
            if arith_eval(body, {**env, f.var: v}, ceiling) == want:
                return want
        return not want
    raise TypeError(f"not a formula: {f!r}")


# -------------------------------------------------------------- sequences

def _load(p, arity: int) -> Formula:
    f = parse(p, ARITH) if isinstance(p, str) else p
    allowed = {"x"} if arity == 1 else {"x", "y"}
    extra = free_vars(f) - allowed
    if extra:
        raise ValueError(f"{show(f)} has free variables {sorted(extra)}; expected {sorted(allowed)}")
    check_bounded(f)
    return f


@dataclass
class PredicateSequence:
    """n -> predicate formula, with memoised values."""

    rule: Callable[[int], Union[str, Formula]]
    name: str = "sequence"
    arity: int = 1
    length: Optional[int] = None  # None: infinite
    _cache: dict = field(default_factory=dict, repr=False)

    def __call__(self, n: int) -> Formula:
        if self.length is not None and not 0 <= n < self.length:
            raise IndexError(f"{self.name} has no index {n}")
        if n not in self._cache:
            self._cache[n] = _load(self.rule(n), self.arity)
        return self._cache[n]

    def value(self, n: int, *args: int) -> bool:
        if len(args) != self.arity:
            raise ValueError(f"{self.name} takes {self.arity} argument(s)")
        env = {"x": args[0]} if self.arity == 1 else {"y": args[0], "x": args[1]}
        return arith_eval(self(n), env)


def from_list(preds: Sequence[Union[str, Formula]], name: str = "list") -> PredicateSequence:
    preds = list(preds)
    return PredicateSequence(lambda n: preds[n], name, 1, len(preds))


@lru_cache(maxsize=None)
def _enumeration_upto(max_size: int) -> tuple:
    forms = enumerate_formulas(ARITH, ("x",), max_size, constants=("0",), quantify=False)
    return tuple(f for f in forms if free_vars(f) == {"x"})


def enumerated(n: int) -> Formula:
    """p(n): the n-th unary predicate, ordered by AST size then printed text."""
    k = 3
    while True:
        forms = _enumeration_upto(k)
        if n < len(forms):
            return forms[n]
        k += 1


def index_of(f: Union[str, Formula]) -> int:
    """g = p^-1 by table lookup."""
    f = parse(f, ARITH) if isinstance(f, str) else f
    forms = _enumeration_upto(max(size(f), 3))
    try:
        return forms.index(f)
    except ValueError:
        raise ValueError(f"{show(f)} is not in the enumeration") from None


@lru_cache(maxsize=None)
def _binary_upto(max_size: int) -> tuple:
    forms = enumerate_formulas(ARITH, ("x", "y"), max_size, constants=("0",), quantify=False)
    return tuple(f for f in forms if free_vars(f) == {"x", "y"})


def enumerated_binary(n: int) -> Formula:
    """The n-th binary predicate in (y, x), same order as ``enumerated``."""
    k = 3
    while n >= len(_binary_upto(k)):
        k += 1
    return _binary_upto(k)[n]


def enumeration_sequence() -> PredicateSequence:
    return PredicateSequence(enumerated, "enumeration")


def constant_sequence(p: str = "x = x") -> PredicateSequence:
    return PredicateSequence(lambda n: p, f"constant {p}")


def shift_sequence() -> PredicateSequence:
    return PredicateSequence(lambda n: Eq(Var("x"), numeral(n)), "shift x = n")


def negated(seq: PredicateSequence) -> PredicateSequence:
    return PredicateSequence(lambda n: Not(seq(n)), f"not {seq.name}", seq.arity, seq.length)


def table_sequence(base: PredicateSequence) -> PredicateSequence:
    return PredicateSequence(lambda n: build_table(base, n).body, f"T-table of {base.name}", 2)


def diagonal_sequence(base: PredicateSequence) -> PredicateSequence:
    return PredicateSequence(lambda n: build_dn(base, n).body, f"D-diagonal of {base.name}",
                             1, base.length)


# ------------------------------------------------------- D_n and T_n

@dataclass(frozen=True)
class DiagonalPredicate:
    n: int
    body: Formula

    def value(self, i: int) -> bool:
        return arith_eval(self.body, {"x": i})

    @property
    def text(self) -> str:
        return show(self.body)


def build_dn(seq: PredicateSequence, n: int) -> DiagonalPredicate:
    """D_n(x) = (x=0 -> !P_0(x)) & ... & (x=n -> !P_n(x))."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x = Var("x")
    return DiagonalPredicate(n, conj([Implies(Eq(x, numeral(i)), Not(seq(i))) for i in range(n + 1)]))


@dataclass(frozen=True)
class UniversalTable:
    n: int
    body: Formula

    def value(self, row: int, arg: int) -> bool:
        return arith_eval(self.body, {"y": row, "x": arg})

    @property
    def text(self) -> str:
        return show(self.body)


def build_table(seq: PredicateSequence, n: int) -> UniversalTable:
    """T_0 = (y=0 -> P_0);  T_{k+1} = T_k & (y=k+1 -> P_{k+1}).  Rows 0..n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    y = Var("y")
    body = Implies(Eq(y, numeral(0)), seq(0))
    for k in range(1, n + 1):
        body = And(body, Implies(Eq(y, numeral(k)), seq(k)))
    return UniversalTable(n, body)


# ---------------------------------------------------------------- checks

@dataclass
class CheckResult:
    check: str
    passed: bool
    witness: Optional[tuple] = None
    failures: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_record(self) -> dict:
        return {"check": self.check, "verdict": self.verdict,
                "witness": list(self.witness) if self.witness is not None else None}


def _args(arity: int, top: int):
    return itertools.product(range(top + 1), repeat=arity)


def _unwrap(args: tuple):
    return args[0] if len(args) == 1 else args


def cauchy_check(seq: PredicateSequence, M: int, W: int = 4) -> CheckResult:
    """All n, m in [M, M+W] agree at every argument <= M; witness is the least (n, m, x)."""
    for n in range(M, M + W + 1):
        for m in range(n + 1, M + W + 1):
            for args in _args(seq.arity, M):
                if seq.value(n, *args) != seq.value(m, *args):
                    return CheckResult("cauchy", False, (n, m, _unwrap(args)))
    return CheckResult("cauchy", True)


def limit_check(seq: PredicateSequence, L: Union[str, Formula], M: int) -> CheckResult:
    """For every M' <= M and argument <= M': L agrees with P_M'.  All failures are listed."""
    lf = _load(L, seq.arity)
    names = ("x",) if seq.arity == 1 else ("y", "x")
    failures = []
    for k in range(M + 1):
        for args in _args(seq.arity, k):
            if arith_eval(lf, dict(zip(names, args))) != seq.value(k, *args):
                failures.append((k, _unwrap(args)))
    return CheckResult("limit", not failures, failures[0] if failures else None, failures)


def universal_check(seq: PredicateSequence, M: int) -> CheckResult:
    """T(n, m) <-> P_n(m) for all n, m < M, using the table with rows 0..M-1."""
    if M < 1:
        return CheckResult("universal", True)
    table = build_table(seq, M - 1)
    for n in range(M):
        for m in range(M):
            if table.value(n, m) != seq.value(n, m):
                return CheckResult("universal", False, (n, m))
    return CheckResult("universal", True)


def minor_theorem_check(candidates: Sequence[Union[str, Formula]]) -> list:
    """For each listed P_i, the point i where D_n (over the whole list) and P_i differ."""
    if not candidates:
        return []
    seq = from_list(candidates)
    d = build_dn(seq, len(candidates) - 1)
    out = []
    for i in range(len(candidates)):
        p_val, d_val = seq.value(i, i), d.value(i)
        if p_val == d_val:
            raise AssertionError(f"diagonal agrees with candidate {i} at {i}")
        out.append({"predicate": show(seq(i)), "witness": i, "P": p_val, "D": d_val})
    return out


# --------------------------------------------------- binary-expansion bridge

def binary_real(seq: PredicateSequence, n: int, bits: int) -> Fraction:
    """sum over k < bits of [P_n(k)] / 2^(k+1)."""
    return sum((Fraction(1, 2 ** (k + 1)) for k in range(bits) if seq.value(n, k)), Fraction(0))


def bridge_check(seq: PredicateSequence, M: int, W: int = 4, bits: Optional[int] = None) -> bool:
    """If the window agrees below M, the binary reals of its members are within 2^-(M+1)."""
    if seq.arity != 1:
        raise ValueError("binary expansion needs a unary sequence")
    bits = bits if bits is not None else M + 16
    if not cauchy_check(seq, M, W).passed:
        return True
    reals = [binary_real(seq, n, bits) for n in range(M, M + W + 1)]
    return all(abs(a - b) <= Fraction(1, 2 ** (M + 1)) for a in reals for b in reals)


# ------------------------------------------------------------- file format

BUILTINS = {
    "enumeration": enumeration_sequence,
    "constant": constant_sequence,
    "shift": shift_sequence,
}


def load_sequence(text: str) -> PredicateSequence:
    """Either one predicate per line, or a single ``rule:`` line.

    Rules: ``enumeration``, ``constant``, ``shift``, ``T-table <rule>``,
    ``D-diagonal-of <rule>``.  ``#`` starts a comment.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) == 1 and lines[0].startswith("rule:"):
        return _rule(lines[0][len("rule:"):].split())
    if any(ln.startswith("rule:") for ln in lines):
        raise ValueError("a rule line must be the only entry")
    return from_list(lines)


def _rule(words: list) -> PredicateSequence:
    if not words:
        raise ValueError("empty rule")
    head, rest = words[0], words[1:]
    if head == "T-table":
        return table_sequence(_rule(rest or ["enumeration"]))
    if head == "D-diagonal-of":
        return diagonal_sequence(_rule(rest or ["enumeration"]))
    if head in BUILTINS and not rest:
        return BUILTINS[head]()
    raise ValueError(f"unknown sequence rule {' '.join(words)!r}")
