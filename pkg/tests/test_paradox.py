import pytest
from hypothesis import given
from hypothesis import strategies as st

from finitelogic.derivation import Derivation, ReplayError, Step
from finitelogic.paradox import (
    FLAGGED_RULES, MERGES, OUT, PRESETS, All, Apply, Bottom, ConsistentLanguage, Equal, Equiv,
    MissingFunctor, Name, Neg, NotCircular, Some, WildLanguage, circular_language, derive_collapse,
    derive_concat, derive_general_paradox, derive_substitution_lemma, derive_truth_lemma,
    load_language, parse_wild, preset_language, replay_wild, show, tamed_eval, traces_unify,
)

CIRC = circular_language()
CANON = preset_language()


# ------------------------------------------------------------- circular

def test_concat_derivation():
    d = derive_concat(CIRC)
    assert len(d) == 3
    assert show(d.conclusion) == "exists c. forall x, y. c(x, y) = xy"
    assert replay_wild(CIRC, d)


def test_concat_needs_circular_language():
    with pytest.raises(NotCircular):
        derive_concat(CANON)


def test_collapse_reaches_bottom():
    d = derive_collapse(CIRC)
    assert len(d) <= 6
    assert isinstance(d.conclusion, Bottom)
    assert replay_wild(CIRC, d)
    assert any(s.note.startswith("flagged") for s in d.steps)


@pytest.mark.parametrize("terms", [(), ("a",)])
def test_collapse_needs_two_terms(terms):
    with pytest.raises(ConsistentLanguage):
        derive_collapse(circular_language(terms))


def test_collapse_rejects_equal_terms():
    with pytest.raises(ValueError):
        derive_collapse(CIRC, "a", "a")


def test_tampered_derivation_fails_replay():
    d = derive_collapse(CIRC)
    steps = list(d.steps)
    s = steps[4]
    steps[4] = Step(Equal(Name("b"), Name("b")), s.rule, s.premises, s.params, s.note)
    with pytest.raises(ReplayError, match="step 5"):
        replay_wild(CIRC, Derivation(tuple(steps)))


# -------------------------------------------------------------- lemmas

def test_truth_lemma_replays():
    d = derive_truth_lemma(CIRC)
    assert show(d.conclusion) == "forall S. TRUE(S) <-> S"
    assert replay_wild(CIRC, d)


def test_substitution_lemma_flags_last_step():
    d = derive_substitution_lemma(CIRC)
    assert replay_wild(CIRC, d)
    last = d.to_records()[-1]
    assert last["rule"] == "eq-to-iff"
    assert last["note"] == "flagged: " + FLAGGED_RULES["eq-to-iff"]


# ---------------------------------------------------- general paradox

@pytest.mark.parametrize("preset", sorted(PRESETS))
def test_general_paradox_replays_and_unifies(preset):
    d = derive_general_paradox(preset=preset)
    assert isinstance(d.conclusion, Bottom)
    assert replay_wild(preset_language(preset), d)
    assert traces_unify(d, derive_general_paradox())


def test_presets_display():
    lines = {p: derive_general_paradox(preset=p).to_text().splitlines() for p in PRESETS}
    assert "IS(R in R) <-> R(R)" in lines["naive-set"][-3]
    assert "This_Sentence(Is_False)" in lines["liar"][-3]
    assert "True(g(sub(Fssb, g(Fssb))))" in lines["tarski"][-3]


def test_liar_display_off_diagonal():
    assert PRESETS["liar"]["display"]["ssb"](("a", "b")) == "ssb(a, b)"


def test_truth_without_substitution_is_blocked():
    lang = WildLanguage("t", frozenset(MERGES[:2]), (("TRUE", "forall X. TRUE(X) <-> X"),))
    with pytest.raises(MissingFunctor):
        derive_general_paradox(lang)


def test_substitution_without_truth_is_blocked():
    lang = WildLanguage("s", frozenset(MERGES[:2]), (("SUB", "forall P, X. P(X) <-> SUB(P, X)"),))
    with pytest.raises(MissingFunctor):
        derive_general_paradox(lang)


def test_traces_distinguish_different_derivations():
    assert not traces_unify(derive_collapse(CIRC), derive_general_paradox())


def test_renamed_functors_are_found_by_schema():
    lang = WildLanguage("r", frozenset(MERGES[:2]),
                        (("Holds", "forall X. Holds(X) <-> X"),
                         ("At", "forall P, X. P(X) <-> At(P, X)")))
    d = derive_general_paradox(lang)
    assert replay_wild(lang, d) and traces_unify(d, derive_general_paradox())


# --------------------------------------------------------------- tamed

def test_tamed_quoted_identity():
    assert tamed_eval(CANON, ["A"], 'TRUE("A is A")') == "true"


def test_tamed_diagonal_is_out_of_scope():
    assert tamed_eval(CANON, ["A"], "FSSB(FSSB)") == OUT


def test_tamed_substitution_uses_extensions():
    assert tamed_eval(CANON, ["A", "P"], "SUB(P, A)", {"P": {"A"}}) == "true"
    assert tamed_eval(CANON, ["A", "P"], "SUB(P, P)", {"P": {"A"}}) == "false"


def test_tamed_refocus_changes_scope():
    # the same sentence is out of scope until its referent joins the domain
    s = "forall x. x = B <-> !!(x = B)"
    assert tamed_eval(CANON, ["A"], s) == OUT
    assert tamed_eval(CANON, ["A", "B"], s) == "true"


def test_tamed_rejects_defined_objects():
    with pytest.raises(ValueError):
        tamed_eval(CANON, ["FSSB"], "FSSB = FSSB")


NAMES = ["A", "B", "C", "D", "E", "F"]


@st.composite
def tamed_sentences(draw, depth=3):
    atom = st.one_of(
        st.builds(lambda a, b: Equal(Name(a), Name(b)), st.sampled_from(NAMES), st.sampled_from(NAMES)),
        st.builds(lambda p, a: Apply(Name("SUB"), (Name(p), Name(a))),
                  st.sampled_from(NAMES), st.sampled_from(NAMES)),
        st.builds(lambda a: Apply(Name("FSSB"), (Name(a),)), st.sampled_from(NAMES + ["FSSB"])),
    )
    if depth == 0:
        return draw(atom)
    sub = tamed_sentences(depth - 1)
    return draw(st.one_of(
        atom,
        st.builds(Neg, sub),
        st.builds(Equiv, sub, sub),
        st.builds(lambda b: Apply(Name("TRUE"), (b,)), sub),
    ))


@given(st.integers(1, 6), tamed_sentences(),
       st.dictionaries(st.sampled_from(NAMES), st.sets(st.sampled_from(NAMES))))
def test_tamed_evaluation_is_consistent(k, s, ext):
    domain = NAMES[:k]
    ext = {p: v for p, v in ext.items() if p in domain}
    a, b = tamed_eval(CANON, domain, s, ext), tamed_eval(CANON, domain, Neg(s), ext)
    if a == OUT:
        assert b == OUT
    else:
        assert {a, b} == {"true", "false"}


@given(st.integers(1, 6), tamed_sentences())
def test_tamed_truth_schema_holds_in_scope(k, s):
    domain = NAMES[:k]
    v = tamed_eval(CANON, domain, s)
    assert tamed_eval(CANON, domain, Apply(Name("TRUE"), (s,))) == v


# --------------------------------------------------------------- parsing

def test_parse_wild_juxtaposition():
    f = parse_wild("forall x, y. c(x, y) = xy")
    assert isinstance(f, All) and f.vars == ("x", "y")
    assert show(f) == "forall x, y. c(x, y) = xy"


def test_parse_wild_exists():
    assert isinstance(parse_wild("exists c. c = c"), Some)


def test_load_language():
    lang = load_language(
        "language demo\n"
        "merge open-term=predicate closed-term=sentence  # wild\n"
        "functor TRUE : forall X. TRUE(X) <-> X\n"
        "functor SUB : forall P, X. P(X) <-> SUB(P, X)\n"
        "terms a, b\n")
    assert lang.wild and not lang.circular and lang.terms == ("a", "b")
    assert replay_wild(lang, derive_general_paradox(lang))


@pytest.mark.parametrize("text,line", [
    ("language a\nmerge bogus\n", 2),
    ("language a\n\nfunctor T : forall X. (\n", 3),
    ("nonsense\n", 1),
])
def test_load_language_errors_carry_line(text, line):
    with pytest.raises(ValueError, match=f"^line {line}:"):
        load_language(text)
