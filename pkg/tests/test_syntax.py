import itertools

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from finitelogic.structures import FiniteStructure, evaluate
from finitelogic.syntax import (
    And, App, Atom, Const, Eq, Exists, Forall, Iff, Implies, Not, Or, ParseError, PredTemplate,
    Role, SecondOrderForall, Signature, Var, classify_role, free_vars, instantiate_predicate,
    is_sentence, normalize, parse, parse_term, substitute, to_text,
)
from strategies import SIG, close, formulas, plain_formulas, terms

CONCAT_SIG = Signature(letters=("0", "'"), constants=("0", "'", "0'"), predicates=(("C", 3),))

# two elements, constants folded onto them, an arbitrary ternary C
TWO = FiniteStructure(
    ("a", "b"), {"0": "a", "'": "b", "0'": "a"}, {},
    {"C": frozenset({("a", "b", "a"), ("b", "b", "b"), ("a", "a", "b")})},
)


def test_parse_concat_atom():
    f = parse('C("0","\'","0\'")', CONCAT_SIG)
    assert f == Atom("C", (Const("0"), Const("'"), Const("0'")))


def test_parse_identity_axiom():
    assert parse("forall x. x = x") == Forall("x", Eq(Var("x"), Var("x")))


def test_free_variables_of_open_formula():
    f = parse("exists z. C(x,y,z)", CONCAT_SIG)
    assert free_vars(f) == {"x", "y"}
    assert not is_sentence(f)


def test_precedence():
    f = parse("!P(x) & P(y) | P(z) -> P(x) <-> P(y)", SIG)
    px, py, pz = (Atom("P", (Var(v),)) for v in "xyz")
    assert f == Iff(Implies(Or(And(Not(px), py), pz), px), py)


@pytest.mark.parametrize("text,pos", [
    ("forall x. (x = x", 16),
    ('C("0", "\'")', 0),
    ("x = = y", 4),
])
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as e:
        parse(text, CONCAT_SIG)
    assert e.value.pos == pos
    assert f"position {pos}" in str(e.value)


def test_unknown_symbol_rejected():
    with pytest.raises(ParseError):
        parse("Q(x)", CONCAT_SIG)
    with pytest.raises(ParseError):
        parse('C("1", x, x)', CONCAT_SIG)


def test_substitute_free_occurrence():
    f = parse('x = "0"', CONCAT_SIG)
    assert substitute(f, "x", Const("0'")) == Eq(Const("0'"), Const("0"))


def test_substitute_leaves_bound_occurrence():
    f = parse("exists x. C(x,y,z)", CONCAT_SIG)
    assert substitute(f, "x", Const("0")) == f


def test_substitute_avoids_capture():
    f = parse("forall y. x = y")
    g = substitute(f, "x", Var("y"))
    assert to_text(g) == "forall y0. y = y0"
    # oracle: both sides agree in a 2-element structure for every value of y
    for e in TWO.universe:
        assert evaluate(TWO, g, {"y": e}) == evaluate(TWO, f, {"x": e})


def test_substitute_rejects_non_terms():
    with pytest.raises(TypeError):
        substitute(parse("x = x"), "x", parse("x = x"))


@pytest.mark.parametrize("text,role", [
    ('"0\'"', Role.CLOSED_TERM),
    ("x", Role.VARIABLE),
    ("C(x,y,z)", Role.PREDICATE),
    ('C("0", "\'", "0\'")', Role.SENTENCE),
    (")(x=", Role.NOISE),
    ("&", Role.LOGICAL_CONSTANT),
])
def test_classify_role(text, role):
    assert classify_role(text, CONCAT_SIG) is role


def test_and_prints_flat_when_left_nested():
    f = parse("P(x) & P(y) & P(z)", SIG)
    assert to_text(f) == "P(x) & P(y) & P(z)"


def test_double_negated_inequality_keeps_parentheses():
    f = Not(Not(Eq(Var("x"), Var("x"))))
    assert to_text(f) == "!(x != x)"
    assert parse(to_text(f)) == f


def test_second_order_round_trip():
    f = SecondOrderForall("X", Forall("x", Implies(Atom("X", (Var("x"),)), Atom("X", (Var("x"),)))))
    sig = SIG.extend(predicates=(("X", 1),))
    assert parse(to_text(f), sig) == f


def test_instantiate_predicate_template():
    f = parse("forall x. P(x) -> P(c(x, x))", SIG)
    t = PredTemplate(("x1",), parse('x1 = "0"', SIG))
    g = instantiate_predicate(f, "P", t)
    assert to_text(g) == 'forall x. x = "0" -> c(x, x) = "0"'


# ----------------------------------------------------------- properties

@given(formulas)
def test_round_trip(f):
    assert parse(to_text(f), SIG) == f


@given(terms)
def test_term_round_trip(t):
    assert parse_term(to_text(t), SIG) == t


@given(formulas, st.sampled_from(("x", "y", "z")), terms)
def test_substitution_homomorphism(f, v, t):
    s = lambda g: substitute(g, v, t)  # noqa: E731
    assert s(Not(f)) == Not(s(f))
    assert s(Or(f, f)) == Or(s(f), s(f))
    for w in ("x", "y", "z"):
        if w != v and w not in free_vars(t):
            assert s(Exists(w, f)) == Exists(w, s(f))
    assert s(Exists(v, f)) == Exists(v, f)


@given(plain_formulas, st.sampled_from(("x", "y", "z")),
       st.sampled_from([Var("x"), Var("y"), Var("z"), Const("0"), Const("'")]))
def test_substitution_semantics(f, v, t):
    """f[v := t] under env equals f under env with v set to t's value."""
    g = substitute(f, v, t)
    names = ("x", "y", "z")
    for vals in itertools.product(TWO.universe, repeat=3):
        env = dict(zip(names, vals))
        tv = env[t.name] if isinstance(t, Var) else TWO.constant_map[t.name]
        assert evaluate(TWO, g, env) == evaluate(TWO, f, {**env, v: tv})


@given(plain_formulas)
def test_normalize_preserves_meaning(f):
    n = normalize(f)
    ops = {type(x).__name__ for x in _nodes(n)}
    assert not ops & {"And", "Implies", "Iff", "Forall"}
    for vals in itertools.product(TWO.universe, repeat=3):
        env = dict(zip(("x", "y", "z"), vals))
        assert evaluate(TWO, n, env) == evaluate(TWO, f, env)


def _nodes(f):
    yield f
    for attr in ("body", "left", "right"):
        child = getattr(f, attr, None)
        if child is not None and not isinstance(child, (Var, Const, App)):
            yield from _nodes(child)


@given(formulas)
def test_role_of_printed_formula(f):
    role = classify_role(to_text(f), SIG)
    assert role in (Role.PREDICATE, Role.SENTENCE)
    assert (role is Role.SENTENCE) == is_sentence(f)
    assert classify_role(to_text(close(f)), SIG) is Role.SENTENCE


@given(terms)
def test_role_of_printed_term(t):
    role = classify_role(to_text(t), SIG)
    expected = (Role.VARIABLE if isinstance(t, Var)
                else Role.OPEN_TERM if free_vars(t) else Role.CLOSED_TERM)
    assert role is expected


@given(st.text(alphabet='xyzC"0\'(),.=!&|<->  ', max_size=14))
def test_role_is_total(text):
    roles = [r for r in Role if classify_role(text, CONCAT_SIG) is r]
    assert len(roles) == 1


@given(formulas)
def test_printing_is_stable(f):
    assume(len(to_text(f)) < 400)
    assert to_text(parse(to_text(f), SIG)) == to_text(f)
