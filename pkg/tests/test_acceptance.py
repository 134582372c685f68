"""One test per acceptance criterion.

Each prints a PASS/FAIL line with its elapsed time against the target;
the lines are collected again in the terminal summary.
"""

import itertools
import time
from contextlib import contextmanager

import pytest

from conftest import ACCEPTANCE_LINES
from finitelogic.cli import run
from finitelogic.concat import check_nested, generate_concat_n, simplified_concat2
from finitelogic.diagonal import (
    build_dn, cauchy_check, constant_sequence, diagonal_sequence, enumerated,
    enumeration_sequence, limit_check, minor_theorem_check, negated, shift_sequence, show,
    universal_check,
)
from finitelogic.modelling import (
    TOTALITY, automorphisms, compose, godel_embedding_check, identity_map, inverse, peano_check,
    permutation_map, toy_decidable_theory, verify,
)
from finitelogic.paradox import (
    OUT, PRESETS, Bottom, ConsistentLanguage, circular_language, derive_collapse, derive_concat,
    derive_general_paradox, preset_language, replay_wild, tamed_eval, traces_unify,
)
from finitelogic.shots import (
    BOOLEAN, DEFAULT_POOL, MembershipStructure, core_check, enumerate_structures, exten,
    finite_comprehension_check, shot_search,
)
from finitelogic.structures import decide
from finitelogic.syntax import parse
from finitelogic.theoryfile import load_theory
from test_cli import INVOCATIONS, argv


@contextmanager
def criterion(number: int, title: str, bound: float):
    t0 = time.perf_counter()
    status = "FAIL"
    try:
        yield
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - t0
        if status == "PASS" and elapsed >= bound:
            status = "FAIL"
        line = f"[{number:2d}] {status}  {title}  ({elapsed:.2f}s, target < {bound:g}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert elapsed < bound, f"criterion {number} took {elapsed:.2f}s (target {bound}s)"


def test_01_concat2_replay():
    with criterion(1, "CONCAT_2 replay", 1):
        th = simplified_concat2()
        assert len(th.axioms) == 3 and th.failing_axioms() == []
        code, out, _ = run(["concat", "gen", "--simplified"])
        assert code == 0
        loaded = load_theory(out)
        assert loaded.failing_axioms() == [] and len(loaded.axioms) == 3
        queries = ['C("0","\'","0\'")', 'exists z. C("0","0",z)',
                   'forall x. x = "0" | x = "\'" | x = "0\'"']
        assert [decide(th, parse(q, th.sig)) for q in queries] == [True, False, True]


def test_02_nested_models():
    with criterion(2, "nested models", 30):
        theories = {n: generate_concat_n(("0", "'"), n) for n in range(1, 5)}
        for m, n in itertools.combinations(range(1, 5), 2):
            r = check_nested(theories[m], theories[n], m, n, depth=2)
            assert r.passed, (m, n, r.divergences[:1])
        r = check_nested(theories[2], theories[3], 2, 3, relativized=False)
        assert not r.passed
        assert any(d[0] == 'forall x. exists y. C(x, "\'", y)' for d in r.divergences)


def test_03_self_model():
    with criterion(3, "self-model and automorphism group", 5):
        for n in (2, 3):
            th = generate_concat_n(("0", "'"), n)
            assert verify(identity_map(th)).valid
        plain = generate_concat_n(("0", "'"), 2, defined=False)
        swap = permutation_map(plain, {"0": "'", "'": "0"})
        assert verify(swap).valid
        assert verify(compose(swap, swap)).valid
        assert verify(inverse(swap)).valid
        group = automorphisms(plain)
        key = lambda mm: tuple(sorted((c, str(t)) for c, t in mm.const_map.items()))  # noqa: E731
        keys = {key(g) for g in group}
        ident = key(identity_map(plain))
        assert ident in keys
        for a in group:
            assert key(inverse(a)) in keys
            assert key(compose(a, inverse(a))) == ident
            for b in group:
                assert key(compose(a, b)) in keys
                for c in group:
                    assert key(compose(a, compose(b, c))) == key(compose(compose(a, b), c))


def test_04_peano_embedding():
    with criterion(4, "Peano embedding", 10):
        r = peano_check(n=4)
        rows = {row["axiom"]: row for row in r.rows}
        for label, row in rows.items():
            if label == TOTALITY:
                assert row["failing_at"] == [r.longest_numeral] == ["0'''"]
            else:
                assert row["verdict"], label
        assert r.passed and r.pool_size > 0


def test_05_bounded_godel_embedding():
    with criterion(5, "bounded Goedel embedding", 30):
        th = toy_decidable_theory()
        assert len(th.structure.universe) <= 3
        r = godel_embedding_check(th, bound=50)
        assert r.verdict == "PASS"
        assert len(r.obligations) == 2 * 3
        assert all(o["length"] <= 50 and not o["opposite_found"] for o in r.obligations)


def test_06_diagonal_identities():
    with criterion(6, "diagonal identities", 30):
        seqs = [enumeration_sequence(), shift_sequence(), constant_sequence()]
        for seq in seqs:
            for n in range(17):
                d = build_dn(seq, n)
                for i in range(n + 1):
                    assert d.value(i) == (not seq.value(i, i))
        assert universal_check(enumeration_sequence(), 8).passed
        dseq = diagonal_sequence(enumeration_sequence())
        for k in range(17):
            r = limit_check(dseq, enumerated(k), k)
            assert not r.passed and (k, k) in r.failures
        for seq in seqs:
            for M in range(6):
                a, b = cauchy_check(seq, M), cauchy_check(negated(seq), M)
                assert (a.passed, a.witness) == (b.passed, b.witness)


def test_07_cantor_minor_theorem():
    with criterion(7, "Cantor minor theorem", 5):
        preds = [enumerated(i) for i in range(32)]
        out = minor_theorem_check(preds)
        assert len(out) == 32
        for i, row in enumerate(out):
            assert row["witness"] == i and row["P"] != row["D"]
            assert row["predicate"] == show(preds[i])


def test_08_russell_emptiness():
    with criterion(8, "Russell emptiness", 60):
        count = 0
        for k in range(5):
            for ms in enumerate_structures(k):
                assert exten(ms, "!(x in x)") is None
                count += 1
        assert count == 1 + 2 + 12 + 336 + 43680
        self_membered = MembershipStructure.from_rows(["1"])
        assert exten(self_membered, "x = x") == 0


def test_09_boolean_shot():
    with criterion(9, "Boolean shot", 60):
        shot = shot_search(DEFAULT_POOL, k_max=4, profile=BOOLEAN)
        assert shot.assignment["x in x"] is False
        assert shot.audit_passed


def test_10_core_and_finite_comprehension():
    with criterion(10, "core and finite comprehension", 60):
        closed = locally = 0
        for k in range(5):
            for ms in enumerate_structures(k):
                core = core_check(ms)
                assert core.equation_holds and core.failures == []
                fc = finite_comprehension_check(ms)
                if fc.closed_under_s_union:
                    closed += 1
                    assert fc.passed
                if fc.locally_closed:
                    locally += 1
                    assert fc.passed
        # k singletons plus the empty set need k + 1 distinct columns, so global
        # closure is empty at every finite size; local closure is the real test
        assert closed == 0
        assert locally > 100
        # without the empty set, s and union alone do not give comprehension
        no_empty = MembershipStructure.from_rows(["1"])
        assert core_check(no_empty).total["s"] and core_check(no_empty).total["union"]
        assert finite_comprehension_check(no_empty).missing == (0, ())


def test_11_paradox_derivations():
    with criterion(11, "paradox derivations", 10):
        circ = circular_language()
        assert replay_wild(circ, derive_concat(circ))
        d = derive_collapse(circ)
        assert isinstance(d.conclusion, Bottom) and replay_wild(circ, d)
        for terms in ((), ("a",)):
            with pytest.raises(ConsistentLanguage):
                derive_collapse(circular_language(terms))
        canonical = derive_general_paradox()
        for preset in ("canonical", "naive-set", "tarski", "liar"):
            assert preset in PRESETS
            g = derive_general_paradox(preset=preset)
            assert isinstance(g.conclusion, Bottom)
            assert replay_wild(preset_language(preset), g)
            assert traces_unify(canonical, g)
        lang = preset_language()
        names = ["A", "B", "C", "D", "E", "F"]
        for k in range(1, 7):
            dom = names[:k]
            assert tamed_eval(lang, dom, "FSSB(FSSB)") == OUT
            ext = {"A": set(dom[::2])}
            for a, b in itertools.product(dom, repeat=2):
                for s in (f"SUB({a}, {b})", f"FSSB({b})", f"TRUE({a} = {b})"):
                    v, nv = tamed_eval(lang, dom, s, ext), tamed_eval(lang, dom, f"!{s}", ext)
                    assert not (v == "true" and nv == "true")


def test_12_determinism():
    with criterion(12, "determinism", 60):
        for key in sorted(INVOCATIONS):
            for fmt in ("text", "json"):
                assert run(argv(key, fmt)) == run(argv(key, fmt)), key
