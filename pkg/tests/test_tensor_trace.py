import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fixtures import strictness_example
from oracles import dense_trace_oracle, local_form_oracle, tensor_oracle
from qnet.dynamics import walk_chain_universe
from qnet.formats import parse_graph
from qnet.graphs import EMPTY, UniverseSpec, chain_names, enumerate_universe
from qnet.hilbert import IDENTITY, OperatorMatrix, full_trace, is_unitary_on, ket
from qnet.laws import default_restrictions, run_law
from qnet.names import corresponds, name
from qnet.restrict import EMPTY_R, FULL, Disk, VertexSelect, comprehended
from qnet.sampling import (consistent_family, random_cp_operator, random_density, random_np_density, random_operator,
                           rng_for)
from qnet.tensor_trace import (LocalizedOperator, consistency, consistent_preserving,
                               dense_partial_trace, partial_trace, partial_trace_tensored,
                               tensor_basis, tensor_operators, tensor_states)

U = enumerate_universe()
# any union of two default graphs lives here, so the scan cannot miss a hit
WIDE = enumerate_universe(UniverseSpec(max_systems=4), cap=10**5)
R = default_restrictions(U)
graphs = st.sampled_from(U.graphs)
restrictions = st.sampled_from(R)
seeds = st.integers(0, 2**31)


# partial trace -------------------------------------------------------------------

def test_trace_vanishes_on_mismatched_complement():
    chi = VertexSelect(name("1"))
    g, h = parse_graph("{0.1, 0.2}"), parse_graph("{0.1, 1.2}")
    assert not partial_trace(OperatorMatrix.dyad(g, h), chi).entries


@settings(max_examples=60)
@given(seeds, restrictions)
def test_trace_matches_dense_oracle(seed, chi):
    rho = random_density(U, rng_for(seed))
    got = partial_trace(rho, chi).dense(U)
    assert np.allclose(got, dense_trace_oracle(rho.dense(U), chi, U), atol=1e-13)
    assert np.allclose(dense_partial_trace(rho.dense(U), chi, U), got, atol=1e-13)
    assert abs(partial_trace(rho, chi).trace() - rho.trace()) < 1e-12


@given(seeds)
def test_boundary_restrictions(seed):
    rho = random_density(U, rng_for(seed))
    assert partial_trace(rho, FULL).close_to(rho, 1e-14)
    e = partial_trace(rho, EMPTY_R)
    assert set(e.entries) <= {(EMPTY, EMPTY)}
    assert abs(e[(EMPTY, EMPTY)] - full_trace(rho)) < 1e-12


@settings(max_examples=60)
@given(seeds, restrictions, restrictions)
def test_tensored_trace(seed, chi, zeta):
    rho = random_np_density(U, rng_for(seed))
    assert partial_trace_tensored(rho, chi, FULL).close_to(partial_trace(rho, chi), 1e-13)
    out = partial_trace_tensored(rho, chi, zeta)
    gs = sorted(out.graphs())
    if gs:
        m = np.array([[out[(g, h)] for h in gs] for g in gs])
        assert np.linalg.eigvalsh((m + m.conj().T) / 2).min() >= -1e-10
    assert all(corresponds(g.names, h.names) for g, h in out.entries)


# tensor ----------------------------------------------------------------------------

@settings(max_examples=200)
@given(graphs, restrictions)
def test_split_then_tensor_round_trip(g, chi):
    a, b = chi.split(g)
    assert tensor_states(ket(a), ket(b), chi).close_to(ket(g))


@settings(max_examples=100, deadline=None)
@given(graphs, graphs, restrictions)
def test_tensor_basis_matches_scan(h, k, chi):
    assert tensor_basis(h, k, chi) == tensor_oracle(h, k, chi, WIDE)


def test_overlapping_parts_tensor_to_zero():
    g, m, h = parse_graph("{0.1}"), parse_graph("{0.2}"), parse_graph("{0.-1}")
    gm = parse_graph("{0.1, 0.2}")
    mh = parse_graph("{0.2, 0.-1}")
    for chi in R:
        assert not tensor_states(ket(gm), ket(mh), chi)
    assert m.systems[0] in gm and m.systems[0] in mh and h.systems[0] in mh and g.systems[0] in gm


def test_non_split_pair_tensors_to_zero():
    chain = walk_chain_universe(3)
    v = chain_names(3)[1]
    chi = Disk(VertexSelect(v), 1)
    centre = parse_graph("{e.(2|-3)}")
    far = parse_graph("{e.(3|-4)}")
    assert not tensor_states(ket(centre), ket(far), chi)
    assert tensor_oracle(centre, far, chi, chain) is None


def test_identity_splits():
    for chi in R:
        i_chi = OperatorMatrix({(g, g): 1 for g in (U[i] for i in U.fixed(chi))})
        comp = sorted({chi.split(g)[1] for g in U.graphs})
        i_bar = OperatorMatrix({(g, g): 1 for g in comp})
        t = tensor_operators(i_chi, i_bar, chi)
        # the glued identity may reach past U, but it must stay diagonal with unit entries
        assert all(g == h and abs(x - 1) < 1e-15 for (g, h), x in t.entries.items())
        assert set(U.graphs) <= {g for g, _ in t.entries}
        assert np.allclose(tensor_operators(i_chi, IDENTITY, chi).matrix(U), np.eye(len(U)))


def test_localized_swap_is_unitary():
    e = strictness_example()
    assert is_unitary_on(e.u, e.universe)[0]


@settings(max_examples=40)
@given(seeds, restrictions)
def test_localized_entry_formula(seed, chi):
    rng = rng_for(seed)
    fixed = U.fixed(chi)
    inner = random_operator(U, rng, among=fixed, cols=min(6, len(fixed)))
    loc = LocalizedOperator(inner, chi).matrix(U, truncate=True)
    assert np.allclose(loc, local_form_oracle(inner.dense(U), chi, U), atol=1e-14)


# consistency ---------------------------------------------------------------------

def test_consistency_examples():
    chi = VertexSelect(name("1"))
    g = parse_graph("{0.1, 1.2}")
    a, b = chi.split(g)
    assert consistency(ket(a), ket(b), chi)
    r = consistency(ket(parse_graph("{0.1, 0.2}")), ket(parse_graph("{0.2}")), chi)
    assert not r and r.witness is not None
    e = strictness_example()
    assert not consistency(ket(e.one), ket(e.two), e.chi)
    assert consistency(ket(e.zero), ket(e.two), e.chi)


def test_consistent_preserving_examples():
    for chi in R:
        assert consistent_preserving(IDENTITY, chi, U)
    e = strictness_example()
    r = consistent_preserving(e.a, e.chi, e.universe)
    assert not r
    assert (r.witness["G"], r.witness["H"]) == (str(e.zero_two), str(e.one))


@settings(max_examples=30, deadline=None)
@given(seeds, restrictions)
def test_class_respecting_operators_are_consistent_preserving(seed, chi):
    rng = rng_for(seed)
    a = random_cp_operator(U, chi, rng)
    assert consistent_preserving(a, chi, U)
    assert consistent_preserving(a.adjoint(), chi, U)


# laws ------------------------------------------------------------------------------

def test_tensor_bracket_law():
    rep = run_law("L2", U)
    assert rep.status == "PASS" and rep.satisfied > 0


def test_nested_trace_law_reports_vacuous_pairs():
    chain = walk_chain_universe(3)
    v = VertexSelect(chain_names(3)[0])
    z1, z2 = Disk(v, 1), Disk(v, 2)
    assert not comprehended(z1, z2, chain)
    rep = run_law("L8", chain, restrictions=[z1, z2])
    assert rep.vacuous > 0 and rep.status == "PASS"


def test_interchange_law():
    rep = run_law("L11", U, seed=3)
    assert rep.status == "PASS" and rep.satisfied > 0


@pytest.mark.parametrize("k", range(4))
def test_trace_of_tensor(k):
    rng = rng_for(k)
    chi = R[2 + k]
    parts, comps = consistent_family(U, chi, rng)
    rho = random_density(U, rng, graphs=parts)
    sigma = random_density(U, rng, graphs=comps)
    glued = tensor_operators(rho, sigma, chi)
    got = partial_trace(glued, chi)
    assert got.close_to(rho.scaled(sigma.trace()), 1e-12)
