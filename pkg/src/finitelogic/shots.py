"""Finite membership structures, EXTEN and shots.

A structure on elements ``0..k-1`` is a k x k table with ``mem[x][y]``
meaning x is a member of y.  The column of y is its member set; distinct
elements must have distinct columns (extensionality).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence, Union

from .syntax import (
    And, Atom, Const, Eq, Exists, Forall, Formula, Iff, Implies, Not, Or, Signature,
    Truth, Var, free_vars, parse, to_text,
)

__all__ = [
    "MembershipStructure", "SetPredicate", "enumerate_structures", "brute_force_structures",
    "count_structures", "exten", "Shot", "shot_search", "UNCONSTRAINED", "BOOLEAN",
    "is_boolean", "core_check", "CoreReport", "finite_comprehension_check",
    "ComprehensionReport", "separation_counterexample", "diagonal_parallel",
    "DEFAULT_POOL", "DEFAULT_CAP", "CapExceeded", "load_pool",
]

SET_SIG = Signature(predicates=(("in", 2),), numerals=True)
DEFAULT_CAP = 5
UNCONSTRAINED, BOOLEAN = "unconstrained", "boolean"

DEFAULT_POOL = (
    "x = x", "!(x = x)", "x in x", "!(x in x)",
    "exists y. y in x", "!(exists y. y in x)", "forall y. y in x",
)


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class MembershipStructure:
    k: int
    mem: tuple  # mem[x][y]: x is a member of y

    def __post_init__(self):
        object.__setattr__(self, "mem", tuple(tuple(bool(b) for b in row) for row in self.mem))
        if len(self.mem) != self.k or any(len(r) != self.k for r in self.mem):
            raise ValueError("membership table must be k x k")

    def column(self, y: int) -> tuple:
        return tuple(self.mem[x][y] for x in range(self.k))

    @property
    def columns(self) -> tuple:
        return tuple(self.column(y) for y in range(self.k))

    @property
    def extensional(self) -> bool:
        return len(set(self.columns)) == self.k

    def element_with(self, col: Sequence[bool]) -> Optional[int]:
        col = tuple(col)
        for y in range(self.k):
            if self.column(y) == col:
                return y
        return None

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[bool]]) -> "MembershipStructure":
        k = len(cols)
        return cls(k, tuple(tuple(cols[y][x] for y in range(k)) for x in range(k)))

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> "MembershipStructure":
        """Rows of 0/1 characters; row x, position y is mem[x][y]."""
        return cls(len(rows), tuple(tuple(c == "1" for c in r) for r in rows))

    def bit_rows(self) -> list:
        return ["".join("1" if b else "0" for b in row) for row in self.mem]


# ------------------------------------------------------------ enumeration

def _check_cap(k: int, cap: int) -> None:
    if k < 0:
        raise ValueError("k must be >= 0")
    if k > cap:
        raise CapExceeded(f"k = {k} is over the cap of {cap}")


def enumerate_structures(k: int, cap: int = DEFAULT_CAP) -> Iterator[MembershipStructure]:
    """Extensional structures of size k in canonical order.

    Canonical order is the integer order of the table read column by
    column; it coincides with lexicographic order of distinct column tuples.
    """
    _check_cap(k, cap)
    vectors = [tuple(bool(v >> (k - 1 - i) & 1) for i in range(k)) for v in range(2 ** k)]
    for cols in itertools.permutations(vectors, k):
        yield MembershipStructure.from_columns(cols)


def brute_force_structures(k: int) -> list:
    """All 2^(k*k) tables filtered by extensionality (an independent enumeration)."""
    out = []
    for bits in itertools.product((False, True), repeat=k * k):
        ms = MembershipStructure(k, tuple(tuple(bits[x * k:(x + 1) * k]) for x in range(k)))
        if ms.extensional:
            out.append(ms)
    return out


def count_structures(k: int) -> int:
    n = 1
    for i in range(k):
        n *= 2 ** k - i
    return n


def _all_structures(k_max: int, cap: int) -> Iterator[MembershipStructure]:
    for k in range(k_max + 1):
        yield from enumerate_structures(k, cap)


# ---------------------------------------------------------------- predicates

@dataclass(frozen=True)
class SetPredicate:
    """Unary formula over membership and equality, free variable ``x``.

    Numerals denote elements by index, so ``x in 0`` is a parameter use.
    """

    formula: Formula
    var: str = "x"
    text: str = ""
    _fn: Callable = field(default=None, compare=False, repr=False)

    @classmethod
    def of(cls, p: Union[str, Formula, "SetPredicate"]) -> "SetPredicate":
        if isinstance(p, SetPredicate):
            return p
        f = parse(p, SET_SIG) if isinstance(p, str) else p
        fv = free_vars(f)
        if len(fv) > 1:
            raise ValueError(f"set predicate must have one free variable, has {sorted(fv)}")
        var = next(iter(fv)) if fv else "x"
        return cls(f, var, to_text(f, bare_numerals=True), _compile(f))

    def holds(self, ms: MembershipStructure, e: int) -> bool:
        return self._fn(ms, {self.var: e})

    def vector(self, ms: MembershipStructure) -> tuple:
        return tuple(self.holds(ms, e) for e in range(ms.k))


def _compile_term(t):
    if isinstance(t, Var):
        name = t.name
        return lambda ms, env: env[name]
    if isinstance(t, Const) and t.name.isdigit():
        idx = int(t.name)

        def param(ms, env):
            if idx >= ms.k:
                raise ValueError(f"parameter {idx} outside a structure of size {ms.k}")
            return idx
        return param
    raise ValueError(f"unevaluable term {to_text(t)}")


def _compile(f) -> Callable:
    if isinstance(f, Truth):
        v = f.value
        return lambda ms, env: v
    if isinstance(f, Eq):
        a, b = _compile_term(f.left), _compile_term(f.right)
        return lambda ms, env: a(ms, env) == b(ms, env)
    if isinstance(f, Atom):
        if f.predicate != "in" or len(f.args) != 2:
            raise ValueError(f"unevaluable atom {to_text(f)}")
        a, b = (_compile_term(t) for t in f.args)
        return lambda ms, env: ms.mem[a(ms, env)][b(ms, env)]
    if isinstance(f, Not):
        g = _compile(f.body)
        return lambda ms, env: not g(ms, env)
    if isinstance(f, (And, Or, Implies, Iff)):
        l, r = _compile(f.left), _compile(f.right)
        if isinstance(f, And):
            return lambda ms, env: l(ms, env) and r(ms, env)
        if isinstance(f, Or):
            return lambda ms, env: l(ms, env) or r(ms, env)
        if isinstance(f, Implies):
            return lambda ms, env: (not l(ms, env)) or r(ms, env)
        return lambda ms, env: l(ms, env) == r(ms, env)
    if isinstance(f, (Exists, Forall)):
        g, v = _compile(f.body), f.var
        if isinstance(f, Exists):
            return lambda ms, env: any(g(ms, {**env, v: e}) for e in range(ms.k))
        return lambda ms, env: all(g(ms, {**env, v: e}) for e in range(ms.k))
    raise ValueError(f"unevaluable formula {to_text(f)}")


def exten(ms: MembershipStructure, p) -> Optional[int]:
    """First element whose column is exactly the extension of ``p``, else None."""
    return ms.element_with(SetPredicate.of(p).vector(ms))


# --------------------------------------------------------------------- shots

def is_boolean(ms: MembershipStructure) -> bool:
    """Columns closed under complement and pairwise intersection."""
    cols = set(ms.columns)
    for c in cols:
        if tuple(not b for b in c) not in cols:
            return False
    for c, d in itertools.combinations(cols, 2):
        if tuple(a and b for a, b in zip(c, d)) not in cols:
            return False
    return True


@dataclass
class Shot:
    pool: tuple
    profile: str
    k_max: int
    assignment: dict  # predicate text -> EXTEN verdict
    witness: Optional[MembershipStructure]
    audit_passed: bool = False
    realizable: int = 0  # distinct realizable assignments seen

    def to_record(self) -> dict:
        return {
            "profile": self.profile, "k_max": self.k_max,
            "assignment": dict(self.assignment),
            "structure": self.witness.bit_rows() if self.witness is not None else None,
            "maximality_audit": "PASS" if self.audit_passed else "FAIL",
        }


def _realizable(pool, k_max, profile, cap):
    """Assignment (frozenset of positive indices) -> first realizing structure."""
    seen: dict = {}
    for ms in _all_structures(k_max, cap):
        if profile == BOOLEAN and not is_boolean(ms):
            continue
        cols = set(ms.columns)
        pos = frozenset(i for i, p in enumerate(pool) if p.vector(ms) in cols)
        seen.setdefault(pos, ms)
    return seen


def shot_search(pool: Sequence = DEFAULT_POOL, k_max: int = 3, profile: str = UNCONSTRAINED,
                cap: int = DEFAULT_CAP) -> Shot:
    """A maximal realizable EXTEN assignment over the pool.

    Among assignments maximal under inclusion, the one first realized in
    canonical structure order wins.
    """
    if profile not in (UNCONSTRAINED, BOOLEAN):
        raise ValueError(f"unknown profile {profile!r}")
    preds = tuple(SetPredicate.of(p) for p in pool)
    seen = _realizable(preds, k_max, profile, cap)
    if not seen:
        return Shot(tuple(p.text for p in preds), profile, k_max, {}, None, True, 0)
    maximal = [a for a in seen if not any(a < b for b in seen)]
    order = {id(ms): i for i, ms in enumerate(_order_key(seen))}
    best = min(maximal, key=lambda a: order[id(seen[a])])
    shot = Shot(tuple(p.text for p in preds), profile, k_max,
                {p.text: i in best for i, p in enumerate(preds)}, seen[best], realizable=len(seen))
    shot.audit_passed = _audit(best, seen, len(preds))
    return shot


def _order_key(seen: dict) -> list:
    return sorted(seen.values(), key=lambda ms: (ms.k, ms.mem))


def _audit(best: frozenset, seen: dict, n: int) -> bool:
    """No single extra positive atom is realizable on top of ``best``."""
    for i in range(n):
        if i in best:
            continue
        if any(best | {i} <= a for a in seen):
            return False
    return True


# ------------------------------------------------------------------- core

@dataclass
class CoreReport:
    total: dict                # function name -> total?
    equation_pairs: int = 0    # (x, y) where s(x) and s(x) & y exist
    equation_holds: bool = True
    failures: list = field(default_factory=list)

    def to_record(self) -> dict:
        return {"total": dict(self.total), "equation_pairs": self.equation_pairs,
                "equation_holds": self.equation_holds}


def _singleton(ms, x):
    return ms.element_with(tuple(i == x for i in range(ms.k)))


def core_check(ms: MembershipStructure) -> CoreReport:
    """Totality of empty set, V, union, intersection, complement, singleton; conversion equation."""
    k, cols = ms.k, ms.columns
    have = set(cols)
    union = all(tuple(a or b for a, b in zip(c, d)) in have for c in cols for d in cols)
    inter = all(tuple(a and b for a, b in zip(c, d)) in have for c in cols for d in cols)
    total = {
        "empty": (False,) * k in have,
        "V": (True,) * k in have,
        "union": union,
        "intersection": inter,
        "complement": all(tuple(not b for b in c) in have for c in cols),
        "s": all(_singleton(ms, x) is not None for x in range(k)),
    }
    report = CoreReport(total)
    for x in range(k):
        sx = _singleton(ms, x)
        if sx is None:
            continue
        for y in range(k):
            meet = tuple(a and b for a, b in zip(cols[sx], cols[y]))
            if meet not in have:
                continue
            report.equation_pairs += 1
            if ms.mem[x][y] != (meet == cols[sx]):
                report.equation_holds = False
                report.failures.append((x, y))
    return report


# --------------------------------------------------- finite comprehension

@dataclass
class ComprehensionReport:
    passed: bool
    closed_under_s_union: bool
    locally_closed: bool
    missing: Optional[tuple] = None  # (a, subset as a tuple of members)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_record(self) -> dict:
        return {"verdict": self.verdict, "closed_under_s_union": self.closed_under_s_union,
                "locally_closed": self.locally_closed,
                "missing": list(map(list, self.missing)) if self.missing else None}


def _members(ms, a):
    return [x for x in range(ms.k) if ms.mem[x][a]]


def finite_comprehension_check(ms: MembershipStructure) -> ComprehensionReport:
    """Every subset of every element's member set is itself an element.

    Reported with two closure flags: global (empty set exists, s and union
    total) and local (for each a: the empty set and s(x) for x in a exist,
    and unions of existing subsets of a exist).  Either flag implies PASS.
    """
    have = set(ms.columns)
    missing = None
    for a in range(ms.k):
        members = _members(ms, a)
        for r in range(len(members) + 1):
            for sub in itertools.combinations(members, r):
                col = tuple(x in sub for x in range(ms.k))
                if col not in have:
                    missing = (a, sub)
                    break
            if missing:
                break
        if missing:
            break
    core = core_check(ms).total
    closed = core["empty"] and core["s"] and core["union"]
    return ComprehensionReport(missing is None, closed, _locally_closed(ms), missing)


def _locally_closed(ms: MembershipStructure) -> bool:
    have = set(ms.columns)
    if ms.k and (False,) * ms.k not in have:
        return False
    for a in range(ms.k):
        inside = set(_members(ms, a))
        if any(_singleton(ms, x) is None for x in inside):
            return False
        subs = [c for c in have if all(x in inside for x in range(ms.k) if c[x])]
        for c, d in itertools.combinations(subs, 2):
            if tuple(p or q for p, q in zip(c, d)) not in have:
                return False
    return True


# ------------------------------------------------------- derived properties

def separation_counterexample(pool: Sequence = DEFAULT_POOL + ("false",), k_max: int = 2,
                              cap: int = DEFAULT_CAP) -> Optional[dict]:
    """A structure with Q -> P pointwise, EXTEN(P) true and EXTEN(Q) false."""
    preds = [SetPredicate.of(p) for p in pool]
    for ms in _all_structures(k_max, cap):
        vecs = [p.vector(ms) for p in preds]
        cols = set(ms.columns)
        for (p, vp), (q, vq) in itertools.product(zip(preds, vecs), repeat=2):
            if all(b <= a for a, b in zip(vp, vq)) and vp in cols and vq not in cols:
                return {"structure": ms.bit_rows(), "P": p.text, "Q": q.text}
    return None


def diagonal_parallel(ms: MembershipStructure) -> Optional[dict]:
    """Where V exists: the Russell set differs from every column at the diagonal point."""
    v = exten(ms, "x = x")
    if v is None:
        return None
    cols = ms.columns
    russell = tuple(not ms.mem[x][x] for x in range(ms.k))
    injective = len(set(cols)) == ms.k
    differs_at_diagonal = all(russell[y] != cols[y][y] for y in range(ms.k))
    return {"V": v, "injective": injective, "russell_missing": russell not in set(cols),
            "differs_at_diagonal": differs_at_diagonal}


def load_pool(text: str) -> list:
    """One formula per line; ``#`` starts a comment."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    return [SetPredicate.of(ln) for ln in lines if ln]
