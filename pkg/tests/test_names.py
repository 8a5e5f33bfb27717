import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from oracles import (SUFFIXES, corresponds_oracle, leaf_members, member, overlaps_oracle,
                     random_term, rewrite, to_name)
from qnet.formats import format_name, parse_name
from qnet.names import (Atom, Dot, Join, Leaf, MalformedName, Or, Renaming, corresponds, descend,
                        in_closure, join, name, negate, normalize, overlaps, regions)

keys = st.sampled_from([1, 2, 3, -1, -2, -3])
suffixes = st.sampled_from(SUFFIXES)


def _terms(depth=4):
    base = st.builds(Atom, keys)
    return st.recursive(base, lambda t: st.one_of(
        st.builds(Dot, t, suffixes),
        st.builds(Or, t, t),
        t.map(lambda x: Or(Dot(x, "l"), Dot(x, "r"))),
    ), max_leaves=depth)


terms = _terms()
names = terms.map(normalize)
name_sets = st.lists(names, max_size=3).map(tuple)
renamings = st.permutations([1, 2, 3, 4]).map(lambda p: Renaming(dict(zip([1, 2, 3, 4], p))))


# normalize ---------------------------------------------------------------------

@pytest.mark.parametrize("term, expected", [
    (Dot(Or(Atom(2), Atom(4)), "l"), "2"),
    (Dot(Atom(7), ""), "7"),
    (Or(Dot(Atom(3), "l"), Dot(Atom(3), "r")), "3"),
    (Dot(Or(Or(Dot(Atom(3), "l"), Dot(Atom(8), "rl")), Atom(-2)), "r"), "-2"),
])
def test_normalize_examples(term, expected):
    assert str(normalize(term)) == expected


def test_descend_examples():
    assert descend(name("(2|4)"), "l") == Leaf(2)
    assert descend(Leaf(5), "lr") == Leaf(5, "lr")
    assert descend(name("(2|4)"), "") == name("(2|4)")


def test_collapse_is_bottom_up():
    t = Or(Or(Dot(Atom(1), "ll"), Dot(Atom(1), "lr")), Dot(Atom(1), "r"))
    assert normalize(t) == Leaf(1)


def test_malformed():
    with pytest.raises(MalformedName):
        Leaf(0)
    with pytest.raises(MalformedName):
        Leaf(1, "x")


@settings(max_examples=300)
@given(terms, terms)
def test_projection_axioms(u, v):
    assert normalize(Dot(Or(u, v), "l")) == normalize(u)
    assert normalize(Dot(Or(u, v), "r")) == normalize(v)


@settings(max_examples=300)
@given(terms)
def test_empty_suffix_and_sibling_axioms(u):
    assert normalize(Dot(u, "")) == normalize(u)
    assert normalize(Or(Dot(u, "l"), Dot(u, "r"))) == normalize(u)


@settings(max_examples=200)
@given(terms)
def test_normalize_idempotent(u):
    n = normalize(u)
    assert normalize(n) == n


@settings(max_examples=200)
@given(terms, st.integers(0, 2**32))
def test_any_rewrite_order_reaches_normalize(u, seed):
    rng = random.Random(seed)
    assert to_name(rewrite(u, rng)) == normalize(u)


@settings(max_examples=200)
@given(terms)
def test_serialize_roundtrip(u):
    n = normalize(u)
    assert parse_name(format_name(n)) == n
    assert name(str(n)) == n


@settings(max_examples=200)
@given(names)
def test_canonical_has_no_sibling_leaves(u):
    def walk(x):
        if isinstance(x, Join):
            a, b = x.left, x.right
            assert not (isinstance(a, Leaf) and isinstance(b, Leaf) and a.key == b.key
                        and a.suffix[:-1] == b.suffix[:-1] and a.suffix[-1:] == "l" and b.suffix[-1:] == "r")
            walk(a)
            walk(b)
    walk(u)


# negate --------------------------------------------------------------------------

def test_negate_examples():
    assert negate(Leaf(2)) == Leaf(-2)
    assert negate(name("(2.l|-3)")) == name("(-2.l|3)")


@given(names)
def test_negate_involution(u):
    assert negate(negate(u)) == u
    assert normalize(negate(u)) == negate(u)


# regions ---------------------------------------------------------------------------

def test_regions_examples():
    assert regions([name("2.l"), name("2.r")]) == {(2, "")}
    assert regions([name("(1|2)")]) == {(1, ""), (2, "")}
    assert regions([name("2.ll")]) == {(2, "ll")}


@pytest.mark.parametrize("V, W, expected", [
    (["2"], ["2.l", "2.r"], True),
    (["2"], ["2.l"], False),
    (["1", "2"], ["(1|2)"], True),
])
def test_corresponds_examples(V, W, expected):
    V, W = [name(x) for x in V], [name(x) for x in W]
    assert corresponds(V, W) is expected
    assert corresponds_oracle(V, W) is expected


@pytest.mark.parametrize("V, W, expected", [
    (["2.l"], ["2.ll"], True),
    (["2"], ["-2"], False),
    (["(1|2)"], ["2.r"], True),
])
def test_overlaps_examples(V, W, expected):
    V, W = [name(x) for x in V], [name(x) for x in W]
    assert overlaps(V, W) is expected
    assert overlaps_oracle(V, W) is expected


def test_closure_oracle_membership():
    m = leaf_members([name("2.l")])
    assert not member(Leaf(2), m)
    assert member(Leaf(2, "lr"), m)
    assert member(Leaf(2), leaf_members([name("2.l"), name("2.r")]))


def test_corresponds_matches_closure_on_small_sets():
    base = [Leaf(k, t) for k in (1, -2) for t in SUFFIXES]
    sets = [()] + [(a,) for a in base] + list(combinations(base, 2))
    for V in sets[::3]:
        for W in sets:
            assert corresponds(V, W) == corresponds_oracle(V, W), (V, W)
            assert overlaps(V, W) == overlaps_oracle(V, W), (V, W)


@given(name_sets, name_sets)
def test_overlaps_symmetric(V, W):
    assert overlaps(V, W) == overlaps(W, V)


@given(name_sets, name_sets, name_sets)
def test_corresponds_equivalence(U, V, W):
    assert corresponds(U, U)
    assert corresponds(U, V) == corresponds(V, U)
    if corresponds(U, V) and corresponds(V, W):
        assert corresponds(U, W)


@given(name_sets, name_sets)
def test_in_closure_matches_oracle(V, W):
    m = leaf_members(W, depth=8)
    for v in V:
        assert in_closure(v, W) == member(v, m)


# renamings ---------------------------------------------------------------------------

def test_renaming_examples():
    r = Renaming.swap(1, 2)
    assert r(name("(1.l|-2)")) == name("(2.l|-1)")
    assert Renaming()(name("(1.l|-2)")) == name("(1.l|-2)")
    assert r.inverse() == r
    assert Renaming().inverse() == Renaming()
    assert Renaming({1: 2, 2: 3, 3: 1}).inverse() == Renaming({1: 3, 3: 2, 2: 1})


def test_renaming_rejects_non_permutation():
    with pytest.raises(ValueError):
        Renaming({1: 2})


@given(renamings, names, names)
def test_renaming_homomorphic(r, u, v):
    assert r(join(u, v)) == join(r(u), r(v))
    assert r(negate(u)) == negate(r(u))
    assert r.inverse()(r(u)) == u
    assert r(descend(u, "l")) == descend(r(u), "l")


@given(renamings, name_sets, name_sets)
def test_renaming_preserves_correspondence(r, V, W):
    assert corresponds(V, W) == corresponds([r(v) for v in V], [r(w) for w in W])


@given(renamings, renamings, names)
def test_renaming_then(r, s, u):
    assert r.then(s)(u) == s(r(u))
