import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finitelogic.shots import (
    BOOLEAN, DEFAULT_POOL, UNCONSTRAINED, CapExceeded, MembershipStructure, SetPredicate,
    brute_force_structures, core_check, count_structures, diagonal_parallel, enumerate_structures,
    exten, finite_comprehension_check, is_boolean, load_pool, separation_counterexample,
    shot_search,
)


def structures_upto(k_max):
    for k in range(k_max + 1):
        yield from enumerate_structures(k)


@st.composite
def structures(draw, k_max=4):
    k = draw(st.integers(0, k_max))
    cols = draw(st.permutations(list(itertools.product((False, True), repeat=k))))
    return MembershipStructure.from_columns(cols[:k])


# ------------------------------------------------------------ enumeration

@pytest.mark.parametrize("k,n", [(0, 1), (1, 2), (2, 12), (3, 336), (4, 43680)])
def test_structure_counts(k, n):
    assert count_structures(k) == n == math.perm(2 ** k, k)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_enumeration_matches_brute_force(k):
    fast = list(enumerate_structures(k))
    assert len(fast) == len(set(fast)) == count_structures(k)
    assert set(fast) == set(brute_force_structures(k))


def test_enumeration_order_is_canonical():
    cols = [ms.columns for ms in enumerate_structures(2)]
    assert cols == sorted(cols)


def test_one_element_structures():
    assert [ms.bit_rows() for ms in enumerate_structures(1)] == [["0"], ["1"]]


def test_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_structures(6))
    with pytest.raises(CapExceeded):
        shot_search(k_max=4, cap=3)


def test_non_square_rejected():
    with pytest.raises(ValueError):
        MembershipStructure(2, ((True,), (False, True)))


# ------------------------------------------------------------------ EXTEN

def test_russell_never_has_an_extension():
    for ms in structures_upto(4):
        assert exten(ms, "!(x in x)") is None


@given(structures())
def test_universe_extension_iff_full_column(ms):
    assert (exten(ms, "x = x") is not None) == ((True,) * ms.k in ms.columns)


@given(structures())
def test_false_names_the_empty_column(ms):
    e = exten(ms, "false")
    assert (e is not None) == ((False,) * ms.k in ms.columns)
    if e is not None:
        assert not any(ms.column(e))


@given(structures())
def test_extensionality_makes_exten_unique(ms):
    for p in DEFAULT_POOL:
        vec = SetPredicate.of(p).vector(ms)
        assert sum(col == vec for col in ms.columns) <= 1


def test_parameters_are_indices():
    ms = MembershipStructure.from_rows(["01", "10"])
    assert SetPredicate.of("x in 0").vector(ms) == (False, True)
    with pytest.raises(ValueError):
        SetPredicate.of("x in 5").vector(ms)


def test_set_predicate_needs_one_free_variable():
    with pytest.raises(ValueError):
        SetPredicate.of("x in y")


# ------------------------------------------------------------------ shots

def test_boolean_shot_excludes_self_membership():
    shot = shot_search(k_max=4, profile=BOOLEAN)
    assert shot.assignment["x in x"] is False
    assert shot.audit_passed


def test_unconstrained_shot_audit():
    shot = shot_search(k_max=3)
    assert shot.audit_passed
    assert shot.assignment["!(x in x)"] is False
    rec = shot.to_record()
    assert rec["maximality_audit"] == "PASS" and rec["profile"] == UNCONSTRAINED


def test_shot_assignment_is_realized_by_witness():
    shot = shot_search(k_max=3)
    ms = shot.witness
    for text, verdict in shot.assignment.items():
        assert (exten(ms, text) is not None) == verdict


def test_empty_pool():
    shot = shot_search(pool=(), k_max=2)
    assert shot.assignment == {} and shot.audit_passed


def test_unknown_profile():
    with pytest.raises(ValueError):
        shot_search(profile="nope")


@given(structures(3))
def test_boolean_profile_oracle(ms):
    cols = set(ms.columns)
    closed = all(tuple(not b for b in c) in cols for c in cols) and all(
        tuple(a and b for a, b in zip(c, d)) in cols for c in cols for d in cols)
    assert is_boolean(ms) == closed


# ------------------------------------------------------------------- core

def test_core_on_von_neumann_two():
    # 0 = {}, 1 = {0}: no V, no complement, singleton of 1 missing
    ms = MembershipStructure.from_rows(["01", "00"])
    r = core_check(ms)
    assert r.total["empty"] and not r.total["V"] and not r.total["s"]
    assert r.equation_holds


def test_core_on_powerset_of_one():
    # columns {} and {0, 1}: empty and V present, complement total, singletons absent
    ms = MembershipStructure.from_columns([(False, False), (True, True)])
    r = core_check(ms)
    assert r.total["empty"] and r.total["V"] and r.total["complement"]
    assert not r.total["s"] and r.equation_pairs == 0


@given(structures())
def test_conversion_equation_always_holds(ms):
    r = core_check(ms)
    assert r.equation_holds and r.failures == []


# -------------------------------------------------- finite comprehension

def test_fincomp_single_empty_set():
    r = finite_comprehension_check(MembershipStructure.from_rows(["0"]))
    assert r.passed and r.locally_closed
    # s(0) = {0} does not exist, so the global closure flag is off
    assert not r.closed_under_s_union


def test_fincomp_missing_singleton():
    # element 1 = {0, 1} but no {1}
    ms = MembershipStructure.from_columns([(False, False), (True, True)])
    r = finite_comprehension_check(ms)
    assert not r.passed
    assert r.missing == (1, (0,))


@given(structures(3))
def test_closure_flags_imply_comprehension(ms):
    r = finite_comprehension_check(ms)
    if r.closed_under_s_union or r.locally_closed:
        assert r.passed
    # oracle: every subset of every member set is a column
    have = set(ms.columns)
    expect = all(
        tuple(x in sub for x in range(ms.k)) in have
        for a in range(ms.k)
        for r_ in range(ms.k + 1)
        for sub in itertools.combinations([x for x in range(ms.k) if ms.mem[x][a]], r_)
    )
    assert r.passed == expect


# ------------------------------------------------------- derived checks

def test_separation_counterexample_found():
    out = separation_counterexample()
    assert out is not None
    ms = MembershipStructure.from_rows(out["structure"])
    assert exten(ms, out["P"]) is not None and exten(ms, out["Q"]) is None


@given(structures())
def test_diagonal_parallel(ms):
    d = diagonal_parallel(ms)
    if (True,) * ms.k not in ms.columns:
        assert d is None
    else:
        assert d["injective"] and d["russell_missing"] and d["differs_at_diagonal"]


def test_load_pool():
    pool = load_pool("# pool\nx in x\n\n!(x in x)  # russell\n")
    assert [p.text for p in pool] == ["x in x", "!(x in x)"]
