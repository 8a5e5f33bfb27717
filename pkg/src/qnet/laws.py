"""Catalogue of algebraic laws, each checked over a finite universe.

A law is an implication: inputs whose hypothesis fails are counted as
vacuous, never as failures.  A run where every input was vacuous is
INCONCLUSIVE.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import product

import numpy as np

from .checks import is_causal, is_local
from .graphs import Graph, Universe
from .hilbert import IDENTITY, OperatorMatrix, max_entry_diff
from .names import Leaf
from .reports import LawReport
from .restrict import (EMPTY_R, FULL, Compose, Disk, Namewise, Not, Restriction, StateSelect,
                       Union, VertexSelect, commutes, comprehended, validate_restriction)
from .sampling import (complement_graphs, consistent_family, random_cp_operator, random_density,
                       random_np_density, random_operator, rng_for)
from .tensor_trace import (LocalizedOperator, TensorOperator, consistency, consistent_preserving,
                           dense_partial_trace, localized_dense, partial_trace,
                           partial_trace_tensored, tensor_basis, tensor_operators)

TOL = 1e-10


def default_restrictions(universe: Universe) -> list[Restriction]:
    """A spread of restrictions built from the names the universe uses."""
    names = sorted({u for g in universe.graphs for u in g.names})
    leaves = [u for u in names if isinstance(u, Leaf)]
    states = sorted({s.state for g in universe.graphs for s in g.systems})
    out: list[Restriction] = [FULL, EMPTY_R]
    out += [StateSelect(a) for a in states[:2]]
    if leaves:
        keys = sorted({abs(u.key) for u in leaves})
        k1, k2 = keys[0], keys[-1]
        v = Leaf(k1)
        out += [VertexSelect(v), VertexSelect(Leaf(-k1)), VertexSelect(Leaf(k2)),
                VertexSelect(v, "overlap"), VertexSelect(Leaf(k2), "overlap")]
        if any(u.suffix for u in leaves):
            out.append(VertexSelect(Leaf(k1, "l")))
        out += [Disk(VertexSelect(v), 1), Disk(VertexSelect(v, "overlap"), 1, oriented=True),
                Disk(VertexSelect(v, "overlap"), 2), Namewise([v])]
        if states:
            out += [Union(StateSelect(states[0]), VertexSelect(Leaf(k2))),
                    Compose(StateSelect(states[0]), Disk(VertexSelect(v, "overlap"), 1))]
    else:
        v = names[0]
        out += [VertexSelect(v), Disk(VertexSelect(v), 1), Disk(VertexSelect(v), 1, oriented=True),
                Disk(VertexSelect(v), 2)]
        if len(names) > 1:
            out += [VertexSelect(names[-1]), Union(VertexSelect(v), VertexSelect(names[-1]))]
    return out


@dataclass
class LawContext:
    universe: Universe
    restrictions: list
    rng: np.random.Generator
    np_only: bool = False
    tol: float = TOL
    n_random: int = 4
    operators: list | None = None


def _rs(x) -> str:
    return str(x)


def _pw(ctx):
    return [r for r in ctx.restrictions if r.pointwise]


def _dense(rho: OperatorMatrix, u: Universe):
    return rho.dense(u)


# --------------------------------------------------------------------------------

def law_L1(ctx, rep):
    """V(G) ≏ V(H) and V(G_χ) ≏ V(H_χ) imply V(G_χ̄) ≏ V(H_χ̄)."""
    u = ctx.universe
    nc = u.name_classes
    same = nc[:, None] == nc[None, :]
    for chi in ctx.restrictions:
        part, comp = u.split(chi)
        hyp = same & (nc[part][:, None] == nc[part][None, :])
        concl = nc[comp][:, None] == nc[comp][None, :]
        rep.checked += hyp.size
        rep.satisfied += int(hyp.sum())
        rep.vacuous += int(hyp.size - hyp.sum())
        for i, j in np.argwhere(hyp & ~concl)[:3]:
            rep.fail({"chi": _rs(chi), "G": u[i].text, "H": u[j].text},
                     u[comp[i]].text, u[comp[j]].text)


def law_L2(ctx, rep):
    """⟨H|G⟩ = ⟨H_χ|G_χ⟩⟨H_χ̄|G_χ̄⟩, and G = G_χ ⊗χ G_χ̄."""
    u = ctx.universe
    n = len(u)
    eye = np.eye(n, dtype=bool)
    for chi in ctx.restrictions:
        part, comp = u.split(chi)
        rhs = (part[:, None] == part[None, :]) & (comp[:, None] == comp[None, :])
        rep.checked += n * n
        rep.satisfied += n * n
        for i, j in np.argwhere(rhs != eye)[:3]:
            rep.fail({"chi": _rs(chi), "G": u[i].text, "H": u[j].text}, int(eye[i, j]), int(rhs[i, j]))
        for g in u.graphs:
            a, b = chi.split(g)
            rep.checked += 1
            rep.satisfied += 1
            if tensor_basis(a, b, chi) != g:
                rep.fail({"chi": _rs(chi), "G": g.text, "what": "split round trip"},
                         g.text, str(tensor_basis(a, b, chi)))


def law_L3(ctx, rep):
    """χχ = χ, χχ̄ = ∅; every disk obeys the restriction law."""
    u = ctx.universe
    for chi in ctx.restrictions:
        part, _ = u.split(chi)
        rep.checked += len(u)
        rep.satisfied += len(u)
        for i in np.flatnonzero(part[part] != part)[:3]:
            rep.fail({"chi": _rs(chi), "G": u[i].text}, u[part[part[i]]].text, u[part[i]].text)
        if isinstance(chi, Disk):
            r = validate_restriction(chi, u)
            rep.checked += 1
            rep.satisfied += 1
            if not r:
                rep.fail({"chi": _rs(chi)}, r.witness)


def law_L4(ctx, rep):
    """Pointwise maps and their complements are restrictions, and act system by system."""
    u = ctx.universe
    for mu in _pw(ctx):
        for r in (mu, Not(mu)):
            v = validate_restriction(r, u)
            rep.checked += 1
            rep.satisfied += 1
            if not v:
                rep.fail({"mu": _rs(r)}, v.witness)
            for g in u.graphs:
                rep.checked += 1
                rep.satisfied += 1
                singles = set()
                for s in g.systems:
                    singles |= set(r(Graph([s], check=False)).systems)
                if set(r(g).systems) != singles:
                    rep.fail({"mu": _rs(r), "G": g.text}, r(g).text, sorted(x.text for x in singles))


def law_L5(ctx, rep):
    """χ ∪ ζ, μχ and ξ = μχ ∪ μ̄ζ are restrictions; μ, ξ and complements commute."""
    u = ctx.universe
    rs = ctx.restrictions
    pws = [m for m in _pw(ctx) if not isinstance(m, (type(FULL), type(EMPTY_R)))] or _pw(ctx)
    picks = [rs[int(i)] for i in ctx.rng.choice(len(rs), size=min(6, len(rs)), replace=False)]
    for chi in picks:
        for zeta in picks:
            r = validate_restriction(Union(chi, zeta), u)
            rep.checked += 1
            rep.satisfied += 1
            if not r:
                rep.fail({"union": [_rs(chi), _rs(zeta)]}, r.witness)
    for mu in pws:
        for chi in picks[:3]:
            for zeta in picks[3:]:
                xi = Union(Compose(mu, chi), Compose(Not(mu), zeta))
                for r in (Compose(mu, chi), xi):
                    v = validate_restriction(r, u)
                    rep.checked += 1
                    rep.satisfied += 1
                    if not v:
                        rep.fail({"restriction": _rs(r)}, v.witness)
                c = commutes(mu, xi, u, with_complements=True)
                rep.checked += 1
                rep.satisfied += 1
                if not c:
                    rep.fail({"mu": _rs(mu), "xi": _rs(xi)}, c.witness)


def law_L6(ctx, rep):
    """Entrywise ⟨G|A ⊗χ B|H⟩ = A_{G_χ H_χ} B_{G_χ̄ H_χ̄}; A ⊗χ I = A ⊗χ I_χ̄;
    I = I_χ ⊗χ I_χ̄."""
    u = ctx.universe
    for chi in ctx.restrictions:
        fixed = u.fixed(chi)
        comps = complement_graphs(u, chi)
        i_chi = OperatorMatrix({(u[int(i)], u[int(i)]): 1 for i in fixed})
        i_bar = OperatorMatrix({(u[int(i)], u[int(i)]): 1 for i in comps})
        for _ in range(ctx.n_random):
            a = random_operator(u, ctx.rng, among=fixed, cols=6)
            b = random_operator(u, ctx.rng, among=comps, cols=6, label="B")
            definitional = tensor_operators(a, b, chi).dense(u) if _inside(tensor_operators(a, b, chi), u) else None
            part, comp = u.split(chi)
            am, bm = _sub_dense(a, u), _sub_dense(b, u)
            entry = am[np.ix_(part, part)] * bm[np.ix_(comp, comp)]
            rep.checked += 1
            rep.satisfied += 1
            if definitional is not None and np.abs(definitional - entry).max() > ctx.tol:
                rep.fail({"chi": _rs(chi), "law": "entry formula"}, float(np.abs(definitional - entry).max()))
            loc = LocalizedOperator(a, chi).matrix(u, truncate=True)
            expl = tensor_operators(a, i_bar, chi)
            rep.checked += 1
            rep.satisfied += 1
            d = np.abs(loc - _sub_dense(expl, u)).max()
            if d > ctx.tol:
                rep.fail({"chi": _rs(chi), "law": "A(x)I = A(x)I_bar"}, float(d))
        ident = tensor_operators(i_chi, i_bar, chi)
        rep.checked += 1
        rep.satisfied += 1
        d = np.abs(_sub_dense(ident, u) - np.eye(len(u))).max()
        if d > ctx.tol:
            rep.fail({"chi": _rs(chi), "law": "I = I_chi (x) I_chibar"}, float(d))


def _inside(a: OperatorMatrix, u: Universe) -> bool:
    return all(k in u and b in u for k, b in a.entries)


def _sub_dense(a: OperatorMatrix, u: Universe):
    """Dense matrix of the entries that lie inside the universe."""
    return OperatorMatrix({kb: x for kb, x in a.entries.items() if kb[0] in u and kb[1] in u}).dense(u)


def _four_way(chi, zeta, u):
    return bool(commutes(chi, zeta, u, with_complements=True))


def law_L7(ctx, rep):
    """(A ⊗ζ B) ⊗χ (C ⊗ζ D) = (A ⊗χ C) ⊗ζ (B ⊗χ D) when χ, ζ and their
    complements commute."""
    u = ctx.universe
    for chi, zeta in product(ctx.restrictions, repeat=2):
        rep.checked += 1
        if not _four_way(chi, zeta, u):
            rep.vacuous += 1
            continue
        rep.satisfied += 1
        for _ in range(max(1, ctx.n_random // 2)):
            ops = [{}, {}, {}, {}]
            for _ in range(3):
                g = u[int(ctx.rng.integers(len(u)))]
                h = u[int(ctx.rng.integers(len(u)))]
                gs = [chi.split(g)[0], chi.split(g)[1]]
                hs = [chi.split(h)[0], chi.split(h)[1]]
                for n, (x, y) in enumerate(product((0, 1), repeat=2)):
                    a, b = zeta.split(gs[x])[y], zeta.split(hs[x])[y]
                    ops[n][(a, b)] = complex(ctx.rng.normal(), ctx.rng.normal())
            A, B, C, D = (OperatorMatrix(o) for o in ops)
            lhs = tensor_operators(tensor_operators(A, B, zeta), tensor_operators(C, D, zeta), chi)
            rhs = tensor_operators(tensor_operators(A, C, chi), tensor_operators(B, D, chi), zeta)
            d = max_entry_diff(lhs, rhs)
            if d > ctx.tol:
                rep.fail({"chi": _rs(chi), "zeta": _rs(zeta)}, len(lhs), len(rhs))


def law_L8(ctx, rep):
    """ζ ⊑ χ implies (ρ_{|χ})_{|ζ} = ρ_{|ζ}, and ζ-local operators are χ-local."""
    u = ctx.universe
    for zeta, chi in product(ctx.restrictions, repeat=2):
        rep.checked += 1
        if not comprehended(zeta, chi, u, np_only=ctx.np_only):
            rep.vacuous += 1
            continue
        rep.satisfied += 1
        for _ in range(ctx.n_random):
            rho = (random_np_density if ctx.np_only else random_density)(u, ctx.rng)
            m = _dense(rho, u)
            lhs = dense_partial_trace(dense_partial_trace(m, chi, u), zeta, u)
            rhs = dense_partial_trace(m, zeta, u)
            d = np.abs(lhs - rhs).max()
            if d > ctx.tol:
                rep.fail({"zeta": _rs(zeta), "chi": _rs(chi), "rho": _rho_json(rho)}, float(d), 0.0)
        fixed = u.fixed(zeta)
        inner = random_operator(u, ctx.rng, among=fixed, cols=6)
        if ctx.np_only:
            nc = u.name_classes
            inner = OperatorMatrix({(k, b): x for (k, b), x in inner.entries.items()
                                    if nc[u.idx(k)] == nc[u.idx(b)]})
        a = localized_dense(_sub_dense(inner, u), zeta, u)
        r = is_local(a, chi, u, ctx.tol)
        if not r:
            rep.fail({"zeta": _rs(zeta), "chi": _rs(chi), "what": "zeta-local not chi-local"}, r.witness)


def _rho_json(rho):
    return {f"{k.text}|{b.text}": complex(x) for (k, b), x in list(rho.entries.items())[:8]}


def _consistent_pair(ctx, chi):
    u = ctx.universe
    parts, comps = consistent_family(u, chi, ctx.rng)
    rho = random_density(u, ctx.rng, graphs=parts, support=len(parts))
    sigma = random_density(u, ctx.rng, graphs=comps, support=len(comps))
    return rho, sigma


def law_L9(ctx, rep):
    """For χ-consistent ρ, σ: (ρ ⊗χ σ)_{|χ} = ρ·tr σ, and (ρ ⊗χ σ)_{|ζ} = ρ_{|ζ}·tr σ when ζ ⊑ χ."""
    u = ctx.universe
    for zeta, chi in product(ctx.restrictions, repeat=2):
        same = zeta == chi
        if not same and not comprehended(zeta, chi, u):
            rep.checked += 1
            rep.vacuous += 1
            continue
        for _ in range(max(1, ctx.n_random // 2)):
            rho, sigma = _consistent_pair(ctx, chi)
            rep.checked += 1
            if not consistency(rho, sigma, chi):
                rep.vacuous += 1
                continue
            rep.satisfied += 1
            t = tensor_operators(rho, sigma, chi)
            lhs = partial_trace(t, zeta)
            rhs = partial_trace(rho, zeta).scaled(sigma.trace())
            d = max_entry_diff(lhs, rhs)
            if d > ctx.tol:
                rep.fail({"zeta": _rs(zeta), "chi": _rs(chi)}, float(d))


def law_L10(ctx, rep):
    """(ρ ⊗χ σ)_{|ζ} = ρ_{|ζ} ⊗χ σ_{|ζ} for χ-consistent ρ, σ when χ, ζ and
    their complements commute."""
    u = ctx.universe
    for chi, zeta in product(ctx.restrictions, repeat=2):
        if not _four_way(chi, zeta, u):
            rep.checked += 1
            rep.vacuous += 1
            continue
        for _ in range(max(1, ctx.n_random // 2)):
            rho, sigma = _consistent_pair(ctx, chi)
            rep.checked += 1
            if not consistency(rho, sigma, chi):
                rep.vacuous += 1
                continue
            rep.satisfied += 1
            lhs = partial_trace(tensor_operators(rho, sigma, chi), zeta)
            rhs = tensor_operators(partial_trace(rho, zeta), partial_trace(sigma, zeta), chi)
            d = max_entry_diff(lhs, rhs)
            if d > ctx.tol:
                rep.fail({"chi": _rs(chi), "zeta": _rs(zeta)}, float(d))


def law_L11(ctx, rep):
    """Interchange laws for A ⊗χ I, I ⊗χ B and A ⊗χ B."""
    u = ctx.universe
    tol = ctx.tol
    for chi in ctx.restrictions:
        fixed = u.fixed(chi)
        comps = complement_graphs(u, chi)
        for _ in range(max(1, ctx.n_random // 2)):
            # (A ⊗χ I)|G⟩ = A|G_χ⟩ ⊗χ |G_χ̄⟩ against the entry formula
            a = random_operator(u, ctx.rng, among=fixed, cols=6)
            rep.checked += 1
            rep.satisfied += 1
            d = np.abs(LocalizedOperator(a, chi).matrix(u) - localized_dense(_sub_dense(a, u), chi, u)).max()
            if d > tol:
                rep.fail({"chi": _rs(chi), "part": 1}, float(d))

            cp_a = random_cp_operator(u, chi, ctx.rng)
            cp_a2 = random_cp_operator(u, chi, ctx.rng, label="A'")
            cp_b = random_cp_operator(u, chi, ctx.rng, side="right", label="B")
            cp_b2 = random_cp_operator(u, chi, ctx.rng, side="right", label="B'")
            gen_b = random_operator(u, ctx.rng, among=comps, cols=6, label="B")
            for A, B in ((cp_a, gen_b), (a, cp_b), (a, gen_b)):
                rep.checked += 1
                if not (consistent_preserving(A, chi, u) or consistent_preserving(B, chi, u, "right")):
                    rep.vacuous += 1
                    continue
                rep.satisfied += 1
                lhs = LocalizedOperator(A, chi).matrix(u) @ TensorOperator(IDENTITY, B, chi).matrix(u)
                rhs = _sub_dense(tensor_operators(A, B, chi), u)
                d = np.abs(lhs - rhs).max()
                if d > tol:
                    rep.fail({"chi": _rs(chi), "part": 2}, float(d))

            for A, A2 in ((cp_a, cp_a2), (a, cp_a2)):
                rep.checked += 1
                if not (consistent_preserving(A, chi, u) and consistent_preserving(A2, chi, u)):
                    rep.vacuous += 1
                    continue
                rep.satisfied += 1
                lhs = LocalizedOperator(A2, chi).matrix(u) @ LocalizedOperator(A, chi).matrix(u)
                prod = A2.compose(A)
                rhs = LocalizedOperator(prod, chi).matrix(u)
                d = np.abs(lhs - rhs).max()
                if d > tol:
                    rep.fail({"chi": _rs(chi), "part": 3}, float(d))
                if not consistent_preserving(prod, chi, u):
                    rep.fail({"chi": _rs(chi), "part": 4}, "A'A not consistent-preserving")

            rep.checked += 1
            if not (consistent_preserving(cp_a, chi, u) and consistent_preserving(cp_a2, chi, u)
                    and consistent_preserving(cp_b, chi, u, "right")
                    and consistent_preserving(cp_b2, chi, u, "right")):
                rep.vacuous += 1
                continue
            rep.satisfied += 1
            lhs = tensor_operators(cp_a2, cp_b2, chi).compose(tensor_operators(cp_a, cp_b, chi))
            rhs = tensor_operators(cp_a2.compose(cp_a), cp_b2.compose(cp_b), chi)
            d = max_entry_diff(lhs, rhs)
            if d > tol:
                rep.fail({"chi": _rs(chi), "part": 5}, float(d))


def law_P1(ctx, rep):
    """ρ ↦ ρ_{|χ} tensored back along ζ keeps positivity, keeps the trace when
    every G_ζχ ⊗ζ G_ζ̄ is nonzero, and keeps name preservation."""
    u = ctx.universe
    nc = u.name_classes
    pairs = list(product(ctx.restrictions, repeat=2))
    for chi, zeta in pairs:
        for np_state in (False, True):
            for _ in range(max(1, ctx.n_random // 2)):
                rho = (random_np_density if np_state else random_density)(u, ctx.rng)
                out = partial_trace_tensored(rho, chi, zeta)
                rep.checked += 1
                rep.satisfied += 1
                gs = sorted(out.graphs())
                if gs:
                    sub = np.array([[out[(g, h)] for h in gs] for g in gs])
                    lo = float(np.linalg.eigvalsh((sub + sub.conj().T) / 2).min())
                    if lo < -ctx.tol or np.abs(sub - sub.conj().T).max() > ctx.tol:
                        rep.fail({"chi": _rs(chi), "zeta": _rs(zeta), "what": "positivity"}, lo)
                diag = {g for (g, h) in rho.entries if g == h}
                keeps = all(tensor_basis(zeta.split(g)[0] and chi.split(zeta.split(g)[0])[0] or Graph(),
                                         zeta.split(g)[1], zeta) is not None for g in diag)
                if keeps:
                    drift = abs(out.trace() - rho.trace())
                    if drift > 1e-12:
                        rep.fail({"chi": _rs(chi), "zeta": _rs(zeta), "what": "trace"}, drift)
                if np_state:
                    for (g, h) in out.entries:
                        if nc[u.idx(g)] != nc[u.idx(h)]:
                            rep.fail({"chi": _rs(chi), "zeta": _rs(zeta), "what": "name preservation"},
                                     g.text, h.text)
                            break


def law_P2(ctx, rep):
    """If χζ = ζ then ζ ⊑ χ on the name-preserving sector, and
    (ρ_{|χ})_{|ζ} = ρ_{|ζ} for name-preserving ρ."""
    u = ctx.universe
    for zeta in ctx.restrictions:
        for chi in [Disk(zeta, 1), Disk(zeta, 2), Disk(zeta, 1, oriented=True), FULL] + list(ctx.restrictions):
            pc, _ = u.split(chi)
            pz, _ = u.split(zeta)
            rep.checked += 1
            if not np.array_equal(pz[pc], pz):
                rep.vacuous += 1
                continue
            rep.satisfied += 1
            c = comprehended(zeta, chi, u, np_only=True)
            if not c:
                rep.fail({"zeta": _rs(zeta), "chi": _rs(chi)}, c.witness)
                continue
            for _ in range(max(1, ctx.n_random // 2)):
                m = _dense(random_np_density(u, ctx.rng), u)
                d = np.abs(dense_partial_trace(dense_partial_trace(m, chi, u), zeta, u)
                           - dense_partial_trace(m, zeta, u)).max()
                if d > ctx.tol:
                    rep.fail({"zeta": _rs(zeta), "chi": _rs(chi), "what": "trace-trace"}, float(d))


def _chain_ops():
    from .dynamics import Coin, ParticleStep
    from .hilbert import Product
    return {"I": IDENTITY, "M": ParticleStep(), "C": Coin(np.pi / 5),
            "MC": Product([ParticleStep(), Coin(np.pi / 5)])}


def _chain_vertices(u):
    return sorted({v for g in u.graphs for v in g.names})


def law_P8(ctx, rep):
    """U (ζ^k → ζ^n)-causal and V (ζ^m → ζ^k)-causal give UV (ζ^m → ζ^n)-causal."""
    u = ctx.universe
    ops = ctx.operators or _chain_ops()
    np_s = True
    for v in _chain_vertices(u)[:2]:
        z = VertexSelect(v)
        disk = lambda r: z if r == 0 else Disk(z, r)
        cache = {}

        def causal(name, op, m, n):
            key = (name, m, n)
            if key not in cache:
                cache[key] = bool(is_causal(op, disk(m), disk(n), u, np_s, ctx.tol))
            return cache[key]

        for (nu, U), (nv, V) in product(ops.items(), repeat=2):
            for m, k, n in [(1, 0, 0), (2, 1, 0), (1, 1, 0), (2, 1, 1)]:
                rep.checked += 1
                if not (causal(nu, U, k, n) and causal(nv, V, m, k)):
                    rep.vacuous += 1
                    continue
                rep.satisfied += 1
                r = is_causal(U @ V, disk(m), disk(n), u, np_s, ctx.tol)
                if not r:
                    rep.fail({"U": nu, "V": nv, "v": str(v), "m": m, "k": k, "n": n}, r.witness)


def law_P10a(ctx, rep):
    """U χ'ζ'-causal with χ' ⊑ χ and ζ ⊑ ζ' is χζ-causal."""
    u = ctx.universe
    ops = ctx.operators or _chain_ops()
    for v in _chain_vertices(u)[:2]:
        z = VertexSelect(v)
        cands = [z, Disk(z, 1), Disk(z, 2), FULL, EMPTY_R]
        for name, U in ops.items():
            known = {}

            def causal(chi, zeta):
                key = (chi, zeta)
                if key not in known:
                    known[key] = is_causal(U, chi, zeta, u, True, ctx.tol)
                return known[key]

            for chi_p, zeta_p in product(cands, repeat=2):
                if not causal(chi_p, zeta_p):
                    continue
                for chi, zeta in product(cands, repeat=2):
                    rep.checked += 1
                    if not (comprehended(chi_p, chi, u, np_only=True)
                            and comprehended(zeta, zeta_p, u, np_only=True)):
                        rep.vacuous += 1
                        continue
                    rep.satisfied += 1
                    r = causal(chi, zeta)
                    if not r:
                        rep.fail({"U": name, "chi'": _rs(chi_p), "zeta'": _rs(zeta_p),
                                  "chi": _rs(chi), "zeta": _rs(zeta)}, r.witness)


LAWS = {
    "L1": law_L1, "L2": law_L2, "L3": law_L3, "L4": law_L4, "L5": law_L5, "L6": law_L6,
    "L7": law_L7, "L8": law_L8, "L9": law_L9, "L10": law_L10, "L11": law_L11,
    "P1": law_P1, "P2": law_P2, "P8": law_P8, "P10a": law_P10a,
}
ALIASES = {
    "complement-names": "L1", "tensor-bracket": "L2", "idempotence": "L3", "special-restrictions": "L4",
    "combining": "L5", "tensor-expansion": "L6", "tensor-tensor": "L7", "trace-trace": "L8",
    "tensor-trace-1": "L9", "tensor-trace-2": "L10", "interchange": "L11", "traceout": "P1",
    "np-comprehension": "P2", "causal-composability": "P8", "causal-weakening": "P10a",
}
GRAPH_LAWS = ["L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8", "L9", "L10", "L11", "P1", "P2"]
CHAIN_LAWS = ["P8", "P10a"]


def run_law(law: str, universe: Universe, restrictions=None, seed: int = 0, np_only: bool = False,
            tol: float = TOL, n_random: int = 4, operators=None) -> LawReport:
    key = ALIASES.get(law, law)
    if key not in LAWS:
        raise KeyError(f"unknown law {law!r}")
    ctx = LawContext(universe, list(restrictions) if restrictions else default_restrictions(universe),
                     rng_for(seed), np_only, tol, n_random, operators)
    rep = LawReport(law=key, universe=universe.describe(), seed=seed)
    t0 = time.perf_counter()
    LAWS[key](ctx, rep)
    rep.millis = (time.perf_counter() - t0) * 1000
    return rep
