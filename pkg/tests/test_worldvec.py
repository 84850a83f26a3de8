"""Vector and Pareto-front semantics, checked against brute-force set math."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paretoplay.worldvec import (EMPTY_FRONT, ParetoFront, Status, Vector, WorldMarks,
                                 cmp_value, front_dominates, front_insert, front_max,
                                 front_min, mu_score, vec_min, worlds_forced_zero)

from oracles import brute_front_dominates, brute_min, brute_reduce, brute_union

V = Vector.parse
F = ParetoFront.parse


def cmp_tuple(v):
    return v.cmp_tuple()


# ---- status mapping ---------------------------------------------------------

def test_cmp_value_mapping():
    assert cmp_value(Status.WIN) == 1
    assert cmp_value(Status.IMPOSSIBLE) == 1  # may still be a win higher up
    assert cmp_value(Status.LOSS) == 0
    assert cmp_value(Status.USELESS) == 0     # zero is safe for dead worlds


def test_parse_render_roundtrip():
    for text in ("[1 x 0]", "[- 1 0]", "[1 1 1]", "[x - 0]"):
        assert Vector.parse(text).render() == text
    assert F("{[1 1 0],[0 1 1]}").render() == "{[1 1 0],[0 1 1]}"


# ---- dominance --------------------------------------------------------------

def test_dominance_paper_cases():
    # the three canonical comparisons for fronts with impossible worlds
    assert not V("[1 0 0]").weakly_dominates(V("[1 x 0]"))
    assert V("[1 1 0]").weakly_dominates(V("[1 x 0]"))
    assert V("[1 x -]").weakly_dominates(V("[1 x 0]"))


def test_weak_dominance_examples():
    assert V("[1 1 0]").weakly_dominates(V("[1 x 0]"))
    assert not V("[1 0 0]").weakly_dominates(V("[1 x 0]"))
    v = V("[1 x -]")
    assert v.weakly_dominates(v)


def test_strict_dominance_examples():
    assert V("[1 1 0]").strictly_dominates(V("[1 0 0]"))
    v = V("[1 0 1]")
    assert not v.strictly_dominates(v)
    # equal after mapping: not strict
    assert not V("[1 1 0]").strictly_dominates(V("[1 x 0]"))


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        V("[1 0]").weakly_dominates(V("[1 0 0]"))
    with pytest.raises(ValueError):
        vec_min(V("[1 0]"), V("[1 0 0]"))


# ---- vec_min ----------------------------------------------------------------

def test_vec_min_examples():
    assert vec_min(V("[1 1 1]"), V("[x 1 0]")) == V("[1 1 0]")
    v = V("[1 0 x]")
    assert vec_min(v, v) == v
    assert vec_min(V("[x x 1]"), V("[x x 1]")) == V("[x x 1]")


def test_vec_min_useless_propagates():
    assert vec_min(V("[- 1 0]"), V("[1 1 1]")) == V("[- 1 0]")
    assert vec_min(V("[x 0 0]"), V("[- 1 0]")) == V("[- 0 0]")


# ---- front operations -------------------------------------------------------

def test_front_insert_examples():
    assert front_insert(F("{[1 1 0]}"), V("[0 1 1]")) == F("{[1 1 0],[0 1 1]}")
    assert front_insert(F("{[1 1 0]}"), V("[1 0 0]")) == F("{[1 1 0]}")
    assert front_insert(EMPTY_FRONT, V("[0 0 0]")) == F("{[0 0 0]}")


def test_front_insert_removes_dominated():
    f = front_insert(F("{[1 0 0],[0 1 0]}"), V("[1 1 0]"))
    assert f == F("{[1 1 0]}")


def test_front_max_examples():
    assert front_max(F("{[1 1 0]}"), F("{[0 1 1]}")) == F("{[1 1 0],[0 1 1]}")
    f = F("{[1 0 0],[0 1 0]}")
    assert front_max(f, EMPTY_FRONT) == f
    assert front_max(F("{[1 0 0]}"), F("{[1 1 0]}")) == F("{[1 1 0]}")


def test_front_min_examples():
    assert front_min(F("{[1 1 1]}"), F("{[x 1 0]}")) == F("{[1 1 0]}")
    f = F("{[1 0 1]}")
    assert front_min(EMPTY_FRONT, f) == f
    assert front_min(f, EMPTY_FRONT) == f
    # pairwise minima then reduction; frozen from the brute-force oracle
    got = front_min(F("{[1 0],[0 1]}"), F("{[1 1]}"))
    assert got == F("{[1 0],[0 1]}")


def test_front_dominates_examples():
    f1 = F("{[1 1 0],[0 1 1]}")
    assert front_dominates(f1, F("{[1 1 0]}"))
    assert front_dominates(f1, EMPTY_FRONT)
    assert not front_dominates(F("{[1 0 0]}"), f1)


def test_mu_score_examples():
    assert mu_score(F("{[1 1 0]}"), 3) == Fraction(2, 3)
    assert mu_score(F("{[1 1 0],[0 1 1]}"), 3) == Fraction(2, 3)
    assert mu_score(F("{[0 0 0]}"), 3) == 0
    with pytest.raises(ValueError):
        mu_score(F("{[1 1 0]}"), 0)


def test_mu_counts_wins_not_impossible():
    # impossible compares as 1 but is not a win
    assert mu_score(F("{[1 x 0]}"), 3) == Fraction(1, 3)
    assert mu_score(F("{[1 - 0]}"), 3) == Fraction(1, 3)


def test_worlds_forced_zero_examples():
    assert worlds_forced_zero(F("{[1 1 0],[0 1 1]}")) == 0
    assert worlds_forced_zero(F("{[1 0 0],[0 0 1]}")) == 0b010
    assert worlds_forced_zero(F("{[0 0 0]}")) == 0b111
    # impossible maps to 1: not forced
    assert worlds_forced_zero(F("{[0 x 0]}")) == 0b101


# ---- marks ------------------------------------------------------------------

def test_marks_render_and_transitions():
    m = WorldMarks(3)
    assert m.render() == "[? ? ?]"
    m2 = m.with_impossible(0b001).with_useless(0b100)
    assert m2.render() == "[x ? -]"
    assert m2.live == 0b010
    # useless worlds stay useless even if a move is impossible there
    m3 = m2.with_impossible(0b100)
    assert m3.render() == "[x ? -]"


def test_marks_outcome_vector():
    m = WorldMarks(4).with_impossible(0b0001).with_useless(0b1000)
    v = m.outcome_vector(0b0010)
    assert v.render() == "[x 1 0 -]"


# ---- randomized properties vs brute force -----------------------------------

STATUS_CHARS = "10x-"


def vec_strategy(n):
    return st.tuples(*[st.sampled_from(STATUS_CHARS) for _ in range(n)]).map(
        lambda chars: Vector.parse("[" + " ".join(chars) + "]"))


def front_strategy(n, max_members=4):
    return st.lists(vec_strategy(n), min_size=0, max_size=max_members).map(ParetoFront)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 6).flatmap(lambda n: st.tuples(front_strategy(n), vec_strategy(n))))
def test_insert_keeps_antichain(args):
    f, v = args
    out = front_insert(f, v)
    for a in out.members:
        for b in out.members:
            assert a is b or not a.weakly_dominates(b)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(front_strategy(n), front_strategy(n))))
def test_front_max_matches_brute(args):
    f1, f2 = args
    got = {v.cmp_tuple() for v in front_max(f1, f2).members}
    want = brute_union({v.cmp_tuple() for v in f1}, {v.cmp_tuple() for v in f2})
    assert got == want


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(front_strategy(n), front_strategy(n))))
def test_front_min_matches_brute(args):
    f1, f2 = args
    got = {v.cmp_tuple() for v in front_min(f1, f2).members}
    want = brute_min({v.cmp_tuple() for v in f1}, {v.cmp_tuple() for v in f2})
    assert got == want


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(front_strategy(n), front_strategy(n))))
def test_front_max_commutative_idempotent(args):
    f1, f2 = args
    a = front_max(f1, f2).mapped_canonical()
    b = front_max(f2, f1).mapped_canonical()
    assert a == b
    assert front_max(f1, f1).mapped_canonical() == f1.mapped_canonical()


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 5).flatmap(
    lambda n: st.tuples(front_strategy(n), front_strategy(n), front_strategy(n))))
def test_front_max_associative(args):
    f1, f2, f3 = args
    a = front_max(front_max(f1, f2), f3).mapped_canonical()
    b = front_max(f1, front_max(f2, f3)).mapped_canonical()
    assert a == b


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(vec_strategy(n), vec_strategy(n))))
def test_vec_min_commutative(args):
    a, b = args
    assert vec_min(a, b) == vec_min(b, a)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 5).flatmap(
    lambda n: st.tuples(vec_strategy(n), vec_strategy(n), vec_strategy(n))))
def test_vec_min_associative(args):
    a, b, c = args
    assert vec_min(vec_min(a, b), c) == vec_min(a, vec_min(b, c))


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 6).flatmap(
    lambda n: st.tuples(front_strategy(n), front_strategy(n))))
def test_front_dominates_matches_brute_and_union_bound(args):
    f1, f2 = args
    got = front_dominates(f1, f2)
    want = brute_front_dominates({v.cmp_tuple() for v in f1},
                                 {v.cmp_tuple() for v in f2})
    assert got == want
    assert front_dominates(front_max(f1, f2), f1)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 6).flatmap(lambda n: front_strategy(n, max_members=3)))
def test_front_dominates_preorder(f):
    assert front_dominates(f, f)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 5).flatmap(
    lambda n: st.tuples(front_strategy(n, 3), front_strategy(n, 3), front_strategy(n, 3))))
def test_front_dominates_transitive(args):
    f1, f2, f3 = args
    if front_dominates(f1, f2) and front_dominates(f2, f3):
        assert front_dominates(f1, f3)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(front_strategy(n, 3), vec_strategy(n))))
def test_mu_invariant_under_dominated_insert(args):
    f, v = args
    if not f.members:
        return
    if any(m.weakly_dominates(v) for m in f.members):
        n = f.members[0].n
        assert mu_score(front_insert(f, v), n) == mu_score(f, n)
