import pytest

from finitelogic.concat import generate_concat_n, simplified_concat2
from finitelogic.modelling import (
    ModellingMap, peano_theory, toy_decidable_theory, verify,
)
from finitelogic.structures import decide
from finitelogic.syntax import Const, PredTemplate, parse, to_text
from finitelogic.theoryfile import TheoryFileError, dump_theory, load_map, load_theory, quote

SIMPLE = simplified_concat2()
PLAIN2 = generate_concat_n(("0", "'"), 2, defined=False)

THEORIES = {
    "simplified": SIMPLE,
    "concat2": generate_concat_n(("0", "'"), 2),
    "plain2": PLAIN2,
    "toy": toy_decidable_theory(),
    "peano": peano_theory(),
}


@pytest.mark.parametrize("name", sorted(THEORIES))
def test_round_trip(name):
    th = THEORIES[name]
    back = load_theory(dump_theory(th), name=th.name)
    assert back.sig == th.sig
    assert [to_text(a) for a in back.axioms] == [to_text(a) for a in th.axioms]
    assert back.structure == th.structure
    assert dump_theory(back) == dump_theory(th)


def test_hand_written_file_with_brackets_and_comments():
    th = load_theory(
        '# two strings\n'
        'signature {\n'
        '  letters: "0", "\'";\n'
        '  constants: "0", "\'", "0\'";\n'
        '  predicates: C/3;\n'
        '}\n'
        'axiom C("0", "\'", "0\'");  # the one instance\n'
        'structure {\n'
        '  universe: ["0", "\'", "0\'"];\n'
        '  rel C: [("0", "\'", "0\'")];\n'
        '}\n')
    assert th.failing_axioms() == []
    assert decide(th, parse('C("0", "\'", "0\'")', th.sig))
    assert not decide(th, parse('exists z. C("0", "0", z)', th.sig))


def test_quote_escapes():
    assert quote('a"b') == '"a\\"b"'
    th = load_theory('signature { constants: "a\\"b"; }\n')
    assert th.sig.constants == ('a"b',)


@pytest.mark.parametrize("text,line,col", [
    ('signature {\n  colours: "0";\n}\n', 2, 3),
    ('signature { predicates: P/1; }\naxiom Q("0");\n', 2, 1),
    ('signature { predicates: P/1; }\n\naxiom P(x;\n', 3, 1),
    ('signature {\n  letters: "0;\n', 2, 12),
    ("structure {\n", 2, 1),
    ("}\n", 1, 1),
    ("axiom true\n", 1, 1),
])
def test_errors_carry_line_and_column(text, line, col):
    with pytest.raises(TheoryFileError) as e:
        load_theory(text)
    assert (e.value.line, e.value.col) == (line, col)
    assert str(e.value).startswith(f"{line}:{col}: ")


# ------------------------------------------------------------------ maps

def test_map_defaults_to_identity():
    mm = load_map("map { }\n", PLAIN2, PLAIN2)
    assert verify(mm).valid
    assert set(mm.const_map) == set(PLAIN2.sig.constants)


def test_map_file_matches_programmatic_map():
    text = "# C to the empty relation\nmap {\n  pred C -> x1 != x1;\n}\n"
    from_file = verify(load_map(text, SIMPLE, SIMPLE), stop_at_first=True)
    by_hand = verify(ModellingMap(
        SIMPLE, SIMPLE, {c: Const(c) for c in SIMPLE.sig.constants}, {},
        {"C": PredTemplate(("x1", "x2", "x3"), parse("x1 != x1"))}), stop_at_first=True)
    assert from_file.verdict == by_hand.verdict == "INVALID"
    assert from_file.counterexample == by_hand.counterexample == 'C("0", "\'", "0\'")'


def test_map_permutation_file():
    flip = str.maketrans("0'", "'0")
    text = "map {\n" + "".join(
        f"  const {quote(c)} -> {quote(c.translate(flip))};\n" for c in PLAIN2.sig.constants) + "}\n"
    mm = load_map(text, PLAIN2, PLAIN2)
    assert verify(mm).valid


@pytest.mark.parametrize("text,line", [
    ("pred C -> x1 = x1;\n", 1),
    ("map {\n  pred Z -> x1 = x1;\n}\n", 2),
    ("map {\n\n  pred C x1 = x1;\n}\n", 3),
    ("map {\n  relabel C -> x1 = x1;\n}\n", 2),
])
def test_map_errors(text, line):
    with pytest.raises(TheoryFileError) as e:
        load_map(text, PLAIN2, PLAIN2)
    assert e.value.line == line
