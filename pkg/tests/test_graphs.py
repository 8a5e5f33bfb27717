from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from oracles import directed_edges_oracle, well_named_oracle
from qnet.formats import parse_graph
from qnet.graphs import (EMPTY, Graph, System, UniverseSpec, UniverseTooLarge, WellNamednessViolation,
                         chain_names, enumerate_universe, graph_union, induced_edges, is_well_named,
                         make_graph, pm_support, rename_graph, support)
from qnet.names import Renaming, corresponds, name, negate

FIG_U = name("((3.l|8.rl)|-2)")
FIG_V = name("(2|4)")
FIG = parse_graph("{white.((3.l|8.rl)|-2), black.(2|4)}")


def test_make_graph_examples():
    g = make_graph([("white", FIG_U), ("black", FIG_V)])
    assert g == FIG
    with pytest.raises(WellNamednessViolation) as e:
        make_graph([("a", name("2")), ("b", name("2.l"))])
    assert e.value.witness is not None
    assert make_graph([]) == EMPTY


def test_supports():
    g = parse_graph("{w.2}")
    assert support(g) == {name("2")}
    assert pm_support(g) == {name("2"), name("-2")}
    assert support(EMPTY) == set() and pm_support(EMPTY) == set()
    assert support(FIG) == {FIG_U, FIG_V}
    assert pm_support(FIG) == {FIG_U, negate(FIG_U), FIG_V, negate(FIG_V)}


def test_edges_examples():
    assert induced_edges(FIG, oriented=False) == {frozenset({FIG_U, FIG_V})}
    assert induced_edges(FIG, oriented=True) == {(FIG_U, FIG_V)}
    assert induced_edges(parse_graph("{w.5}")) == set()
    u1, u2, u3 = name("(1|-2)"), name("(2|-3)"), name("3")
    g = make_graph([("w", u1), ("w", u2), ("w", u3)])
    assert induced_edges(g) == {(u1, u2), (u2, u3)}


def test_union_examples():
    assert graph_union(parse_graph("{w.1}"), parse_graph("{b.2}")) == parse_graph("{w.1, b.2}")
    with pytest.raises(WellNamednessViolation):
        graph_union(parse_graph("{w.1}"), parse_graph("{b.1.l}"))
    assert graph_union(FIG, EMPTY) == FIG


def test_rename_examples():
    g = parse_graph("{w.1, b.-2}")
    assert rename_graph(Renaming.swap(1, 2), g) == parse_graph("{w.2, b.-1}")
    assert rename_graph(Renaming(), g) == g


def test_enumerate_examples():
    u = enumerate_universe(UniverseSpec(keys=(1,), depth=0, max_systems=1))
    expected = {"{}", "{0.1}", "{1.1}", "{0.-1}", "{1.-1}"}
    assert {str(g) for g in u} == expected and len(u) == 5
    assert [str(g) for g in enumerate_universe(UniverseSpec(max_systems=0))] == ["{}"]
    with pytest.raises(UniverseTooLarge):
        enumerate_universe(UniverseSpec(keys=(1, 2, 3), depth=2, max_systems=4), cap=1000)


def test_enumeration_monotone():
    base = dict(keys=(1,), depth=0, alphabet=("0",), max_systems=1)
    n0 = len(enumerate_universe(UniverseSpec(**base)))
    for k, v in [("keys", (1, 2)), ("depth", 1), ("alphabet", ("0", "1")), ("max_systems", 2)]:
        assert len(enumerate_universe(UniverseSpec(**{**base, k: v}))) >= n0


def test_default_universe():
    u = enumerate_universe()
    assert len(u) == 257
    assert list(u.graphs) == sorted(set(u.graphs))
    for g in u.graphs:
        assert make_graph(g.systems) == g


def _spec_systems(family):
    spec = UniverseSpec(keys=(1, 2), depth=1, family=family)
    return [System(a, v) for v in spec.names() for a in ("0", "1")]


@pytest.mark.parametrize("family", ["leaves", "joins"])
def test_well_named_matches_descent_oracle(family):
    systems = _spec_systems(family)
    count = 0
    for k in (1, 2):
        for combo in combinations(systems, k):
            count += 1
            assert is_well_named(combo) == well_named_oracle(combo), combo
    assert count > 100


def test_single_overlapping_name_rejected():
    bad = System("w", name("(2|2.l)"))
    assert not well_named_oracle([bad])
    assert not is_well_named([bad])


@pytest.mark.parametrize("family", ["leaves", "joins"])
def test_edges_match_oracle(family):
    u = enumerate_universe(UniverseSpec(keys=(1, 2), depth=1, family=family, alphabet=("0",), max_systems=2))
    for g in u.graphs[::5]:
        want = {(a.name, b.name) for a, b in directed_edges_oracle(g.systems)}
        assert induced_edges(g, True) == want
        assert induced_edges(g, False) == {frozenset(e) for e in want}


def test_chain_edges():
    ns = chain_names(3)
    g = make_graph([("e", v) for v in ns])
    assert induced_edges(g) == {(ns[0], ns[1]), (ns[1], ns[2])}


U = enumerate_universe()
graphs = st.sampled_from(U.graphs)
renamings = st.permutations([1, 2, 3]).map(lambda p: Renaming(dict(zip([1, 2, 3], p))))


@given(graphs, renamings)
def test_rename_commutes_with_edges(g, r):
    h = rename_graph(r, g)
    assert is_well_named(h.systems)
    assert induced_edges(h) == {(r(a), r(b)) for a, b in induced_edges(g)}


@given(graphs)
def test_unoriented_is_symmetrised(g):
    assert induced_edges(g, False) == {frozenset(e) for e in induced_edges(g, True)}


def test_complement_names_lemma():
    from qnet.laws import default_restrictions
    checked = 0
    for chi in default_restrictions(U)[:4]:
        for g in U.graphs[::3]:
            for h in U.graphs[::3]:
                gc, hc = chi(g), chi(h)
                if corresponds(g.names, h.names) and corresponds(gc.names, hc.names):
                    checked += 1
                    assert corresponds(set(g.names) - set(gc.names), set(h.names) - set(hc.names))
    assert checked > 0
