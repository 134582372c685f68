import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finitelogic.concat import (
    InstanceCapExceeded, check_nested, generate_concat_n, simplified_concat2, strings_upto,
)
from finitelogic.inductive import (
    AlphabetError, eval_inductive, letter_predicate, numeral_predicate, saturate,
)
from finitelogic.proofs import (
    NOT_FOUND, PROVED, ends, proof_predicate, proof_string, prov, prov_via_strings, replay_proof,
)
from finitelogic.structures import EvaluationError, FiniteStructure, Theory, decide, evaluate
from finitelogic.syntax import Atom, Const, Eq, Not, Or, Signature, parse, to_text
from strategies import close, plain_formulas

CONCAT_2 = simplified_concat2()


def q(text, th=CONCAT_2):
    return decide(th, parse(text, th.sig))


# ----------------------------------------------------------------- decide

def test_decide_positive_instance():
    assert q('C("0","\'","0\'")') is True


def test_decide_partiality():
    assert q('exists z. C("0","0",z)') is False


def test_decide_universe_axiom():
    assert q('forall x. x = "0" | x = "\'" | x = "0\'"') is True


def test_simplified_axioms_hold():
    assert CONCAT_2.failing_axioms() == []
    assert len(CONCAT_2.axioms) == 3


@pytest.mark.parametrize("f", [
    Atom("Q", (Const("0"),)),
    Eq(Const("9"), Const("0")),
    Atom("C", (Const("0"),)),
])
def test_decide_rejects_foreign_symbols(f):
    with pytest.raises(EvaluationError, match="outside the signature"):
        decide(CONCAT_2, f)


def test_decide_needs_pool_for_second_order():
    sig = CONCAT_2.sig.extend(predicates=(("X", 1),))
    th = Theory(sig, (), CONCAT_2.structure)
    with pytest.raises(EvaluationError):
        decide(th, parse("forall2 X. forall x. X(x) -> X(x)", sig))


def test_theory_requires_sentences():
    with pytest.raises(ValueError):
        Theory(CONCAT_2.sig, (parse('C(x, "0", "0")', CONCAT_2.sig),))


@given(plain_formulas)
def test_exactly_one_of_s_and_not_s(f):
    s = close(f)
    assert decide(CONCAT_2, s) != decide(CONCAT_2, Not(s))


@given(plain_formulas, plain_formulas)
def test_disjunction_clause(f, g):
    s, t = close(f), close(g)
    assert decide(CONCAT_2, Or(s, t)) == (decide(CONCAT_2, s) or decide(CONCAT_2, t))


# -------------------------------------------------------------- generator

def test_concat2_universe_size():
    th = generate_concat_n(("0", "'"), 2)
    assert len(th.structure.universe) == 2 + 2 ** 2
    assert decide(th, parse('C("0","\'","0\'")', th.sig))


def test_single_letter_length_one():
    th = generate_concat_n(("a",), 1)
    assert th.structure.universe == ("a",)
    assert th.structure.relation_tables["C"] == frozenset()


def test_generated_axioms_true_in_structure():
    for n in (1, 2, 3):
        assert generate_concat_n(("0", "'"), n).failing_axioms() == []


def test_instance_cap():
    with pytest.raises(InstanceCapExceeded):
        generate_concat_n(("0", "'"), 6, cap=1000)


def test_rejects_bad_bounds():
    with pytest.raises(ValueError):
        generate_concat_n(("0",), 0)
    with pytest.raises(ValueError):
        generate_concat_n((), 2)


alphabets = st.sampled_from([("0", "'"), ("a",), ("a", "b", "c"), ("0",)])


@given(alphabets, st.integers(1, 3))
def test_c_matches_string_concatenation(letters, n):
    th = generate_concat_n(letters, n)
    universe = strings_upto(letters, n)
    # oracle: z = xy within the bound, computed independently
    expected = {(x, y, x + y) for x in universe for y in universe if len(x + y) <= n}
    assert set(th.structure.relation_tables["C"]) == expected


@given(alphabets, st.integers(1, 3))
def test_c_is_partial_function_and_injective(letters, n):
    rel = generate_concat_n(letters, n).structure.relation_tables["C"]
    outputs = {}
    for x, y, z in rel:
        assert outputs.setdefault((x, y), z) == z
    for fixed in (0, 1):
        seen = {}
        for t in rel:
            key = (t[fixed], t[2])
            assert seen.setdefault(key, t[1 - fixed]) == t[1 - fixed]


@given(alphabets, st.integers(1, 3))
def test_letters_are_primitive(letters, n):
    rel = generate_concat_n(letters, n).structure.relation_tables["C"]
    assert not any(len(z) == 1 for _, _, z in rel)


# ---------------------------------------------------------------- nested

def test_nested_relativized_pass_2_3():
    r = check_nested(generate_concat_n(("0", "'"), 2), generate_concat_n(("0", "'"), 3), 2, 3)
    assert r.passed and r.checked > 0


def test_nested_same_theory():
    th = generate_concat_n(("0", "'"), 2)
    assert check_nested(th, th, 2, 2).passed


def test_nested_unrelativized_divergence():
    r = check_nested(generate_concat_n(("0", "'"), 2), generate_concat_n(("0", "'"), 3), 2, 3,
                     relativized=False)
    assert not r.passed
    assert ('forall x. exists y. C(x, "\'", y)', False, True) in r.divergences


def test_nested_rejects_m_above_n():
    th = generate_concat_n(("0", "'"), 2)
    with pytest.raises(ValueError):
        check_nested(th, th, 3, 2)


# ------------------------------------------------------------- inductive

def test_numeral_examples():
    p = numeral_predicate()
    assert eval_inductive(p, "0''")
    assert not eval_inductive(p, "'0")


def test_numeral_wrong_alphabet():
    with pytest.raises(AlphabetError):
        eval_inductive(numeral_predicate(), "01")


def test_numeral_saturation_is_least():
    assert saturate(numeral_predicate(), 3) == {"0", "0'", "0''"}


@given(st.text(alphabet="0'", max_size=7))
def test_numeral_matches_regex(s):
    assert eval_inductive(numeral_predicate(), s, 7) == bool(re.fullmatch(r"0'*", s))


def test_letter_predicate():
    p = letter_predicate(("0", "'"))
    assert eval_inductive(p, "0") and not eval_inductive(p, "0'")


# ---------------------------------------------------------------- proofs

PROP = Signature(predicates=(("A", 0), ("B", 0)))
TOY = Theory(PROP, (parse("A", PROP), parse("A -> B", PROP)))


def test_prov_modus_ponens():
    r = prov(TOY, parse("B", PROP), 3)
    assert r.status == PROVED and len(r.derivation) == 3
    assert replay_proof(TOY, r.derivation)


def test_prov_axiom_is_a_proof():
    r = prov(TOY, parse("A", PROP), 1)
    assert r.proved and len(r.derivation) == 1


def test_prov_not_found():
    th = Theory(PROP, (parse("A", PROP),))
    assert prov(th, parse("B", PROP), 10).status == NOT_FOUND


def test_prov_bound_too_small():
    assert prov(TOY, parse("B", PROP), 2).status == NOT_FOUND


def test_proof_predicate_example():
    assert eval_inductive(proof_predicate(TOY), "A;A -> B;B")
    assert not eval_inductive(proof_predicate(TOY), "B")


def test_prov_via_strings_agrees():
    # the bound is on proof-string length in characters
    assert prov_via_strings(TOY, parse("B", PROP), 9) is None
    s = prov_via_strings(TOY, parse("B", PROP), 10)
    assert s is not None and ends("B", s) and len(s) == 10
    assert eval_inductive(proof_predicate(TOY), s)
    assert len(proof_string(prov(TOY, parse("B", PROP), 3).derivation)) == len(s)


def test_prov_first_order_instantiation():
    sig = Signature(constants=("a",), predicates=(("P", 1), ("Q", 1)))
    th = Theory(sig, tuple(parse(t, sig) for t in ('P("a")', "forall x. P(x) -> Q(x)")))
    r = prov(th, parse('Q("a")', sig), 4)
    assert r.proved
    assert [s.rule for s in r.derivation.steps] == ["axiom", "axiom", "inst", "mp"]
    assert replay_proof(th, r.derivation)


goals = st.sampled_from(["A", "B", "A -> B", "B -> A", "A | B"])
axiom_sets = st.lists(st.sampled_from(["A", "A -> B", "B -> A", "B"]), unique=True, max_size=3)


@given(axiom_sets, goals, st.integers(1, 5))
def test_prov_soundness(axioms, goal, bound):
    th = Theory(PROP, tuple(parse(a, PROP) for a in axioms))
    r = prov(th, parse(goal, PROP), bound)
    if r.proved:
        assert len(r.derivation) <= bound
        assert replay_proof(th, r.derivation)
        assert to_text(r.derivation.conclusion) == to_text(parse(goal, PROP))
        # the structure-free derivation is also semantically sound in every model of th
        for a_val in (False, True):
            for b_val in (False, True):
                st_ = FiniteStructure(("*",), {}, {}, {"A": {()} if a_val else set(),
                                                       "B": {()} if b_val else set()})
                if all(evaluate(st_, ax) for ax in th.axioms):
                    assert evaluate(st_, r.derivation.conclusion)
