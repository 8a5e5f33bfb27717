"""Independent reference implementations used to cross-check the library.

None of these import the code paths they check: rewriting is done on raw
terms rule by rule, closures are generated by brute force, and dense
operator identities are evaluated with explicit loops over graphs.
"""

from __future__ import annotations

import random
from itertools import product

import numpy as np

from qnet.names import Atom, Dot, Join, Leaf, Or, leaves

SUFFIXES = ["", "l", "r", "ll", "lr", "rl", "rr"]


# raw terms ------------------------------------------------------------------

def random_term(rng: random.Random, keys=(1, 2, -1, -2), budget: int = 12):
    """Random raw term with at most ``budget`` grammar nodes.  Sibling pairs
    x.l | x.r are planted on purpose so the collapse rule fires often."""
    if budget <= 1:
        return Atom(rng.choice(keys))
    pick = rng.random()
    if pick < 0.25:
        return Atom(rng.choice(keys))
    if pick < 0.5 or budget < 3:
        return Dot(random_term(rng, keys, budget - 1), rng.choice(SUFFIXES))
    if pick < 0.65 and budget >= 5:
        x = random_term(rng, keys, (budget - 3) // 2)
        return Or(Dot(x, "l"), Dot(x, "r"))
    left = rng.randint(1, budget - 2)
    return Or(random_term(rng, keys, left), random_term(rng, keys, budget - 1 - left))


def size(term) -> int:
    if isinstance(term, Atom):
        return 1
    if isinstance(term, Dot):
        return 1 + size(term.term)
    return 1 + size(term.left) + size(term.right)


def _redexes(term, path=()):
    out = []
    if isinstance(term, Dot):
        inner = term.term
        if term.suffix == "":
            out.append((path, "eps"))
        elif isinstance(inner, Or):
            out.append((path, "project"))
        if isinstance(inner, Dot):
            out.append((path, "fuse"))
        out += _redexes(inner, path + ("term",))
    elif isinstance(term, Or):
        a, b = term.left, term.right
        if (isinstance(a, Dot) and isinstance(b, Dot) and a.term == b.term and a.suffix and b.suffix
                and a.suffix[-1] == "l" and b.suffix[-1] == "r" and a.suffix[:-1] == b.suffix[:-1]):
            out.append((path, "collapse"))
        out += _redexes(a, path + ("left",))
        out += _redexes(b, path + ("right",))
    return out


def _fire(term, rule):
    if rule == "eps":
        return term.term
    if rule == "project":
        j = term.term
        side = j.left if term.suffix[0] == "l" else j.right
        return Dot(side, term.suffix[1:])
    if rule == "fuse":
        return Dot(term.term.term, term.term.suffix + term.suffix)
    # u.t.l | u.t.r  ->  u.t
    return Dot(term.left.term, term.left.suffix[:-1])


def _at(term, path, fn):
    if not path:
        return fn(term)
    step, rest = path[0], path[1:]
    if step == "term":
        return Dot(_at(term.term, rest, fn), term.suffix)
    if step == "left":
        return Or(_at(term.left, rest, fn), term.right)
    return Or(term.left, _at(term.right, rest, fn))


def rewrite(term, rng: random.Random, max_steps: int = 10_000):
    """Apply the four equations left to right, picking a random redex each
    step, until none is left."""
    for _ in range(max_steps):
        rs = _redexes(term)
        if not rs:
            return term
        path, rule = rng.choice(rs)
        term = _at(term, path, lambda t: _fire(t, rule))
    raise RuntimeError("rewriting did not terminate")


def to_name(term):
    """Read a rewrite normal form as a canonical tree."""
    if isinstance(term, Atom):
        return Leaf(term.key)
    if isinstance(term, Dot) and isinstance(term.term, Atom):
        return Leaf(term.term.key, term.suffix)
    if isinstance(term, Or):
        return Join(to_name(term.left), to_name(term.right))
    raise AssertionError(f"not a normal form: {term!r}")


# closure ----------------------------------------------------------------------

def leaf_members(V, depth: int = 3) -> frozenset:
    """Leaf-shaped members of the algebra generated by V, suffixes up to
    ``depth``: close V under both projections and under joining two sibling
    leaves into their parent, by brute force."""
    found = set()
    todo = list(V)
    while todo:
        u = todo.pop()
        if isinstance(u, Join):
            todo += [u.left, u.right]
        elif len(u.suffix) <= depth and (u.key, u.suffix) not in found:
            found.add((u.key, u.suffix))
            todo += [Leaf(u.key, u.suffix + "l"), Leaf(u.key, u.suffix + "r")]
    changed = True
    while changed:
        changed = False
        for k, t in list(found):
            if t.endswith("l") and (k, t[:-1] + "r") in found and (k, t[:-1]) not in found:
                found.add((k, t[:-1]))
                changed = True
    return frozenset(found)


def member(u, members) -> bool:
    """A name belongs to the algebra iff each of its leaves does."""
    return all((lf.key, lf.suffix) in members for lf in leaves(u))


def corresponds_oracle(V, W, depth: int = 3) -> bool:
    mv, mw = leaf_members(V, depth), leaf_members(W, depth)
    return all(member(v, mw) for v in V) and all(member(w, mv) for w in W)


def overlaps_oracle(V, W, depth: int = 3) -> bool:
    return bool(leaf_members(V, depth) & leaf_members(W, depth))


# well-namedness and edges ----------------------------------------------------------

ALL_SUFFIXES = [""] + ["".join(p) for n in range(1, 5) for p in product("lr", repeat=n)]


def _descend(u, t):
    for i, c in enumerate(t):
        if isinstance(u, Join):
            u = u.left if c == "l" else u.right
        else:
            return Leaf(u.key, u.suffix + t[i:])
    return u


def descent_table(u, suffixes=ALL_SUFFIXES) -> list:
    return [str(_descend(u, t)) for t in suffixes]


def well_named_oracle(systems) -> bool:
    """v.t = v'.t' only when the two systems and the two suffixes coincide."""
    tables = [descent_table(s.name) for s in systems]
    for tab in tables:
        if len(set(tab)) != len(tab):
            return False
    for i in range(len(tables)):
        for j in range(i + 1, len(tables)):
            if set(tables[i]) & set(tables[j]):
                return False
    return True


def directed_edges_oracle(systems, max_len: int = 3) -> set:
    """(v, v') whenever some v.t is -x.s and some v'.t' is x.s."""
    sufs = [t for t in ALL_SUFFIXES if len(t) <= max_len]
    out = set()
    for a in systems:
        for b in systems:
            if a == b:
                continue
            hit = False
            for t in sufs:
                x = _descend(a.name, t)
                if not isinstance(x, Leaf) or x.key > 0:
                    continue
                for t2 in sufs:
                    y = _descend(b.name, t2)
                    if isinstance(y, Leaf) and y.key == -x.key and y.suffix == x.suffix:
                        hit = True
                        break
                if hit:
                    break
            if hit:
                out.add((a, b))
    return out


# dense formulas over a universe ---------------------------------------------------

def dense_trace_oracle(rho: np.ndarray, chi, universe) -> np.ndarray:
    """Σ ρ[G,H] |G_χ⟩⟨H_χ| over pairs with equal complements, by loops."""
    n = len(universe)
    out = np.zeros((n, n), dtype=complex)
    for i, g in enumerate(universe.graphs):
        gp, gc = chi.split(g)
        for j, h in enumerate(universe.graphs):
            if rho[i, j] == 0:
                continue
            hp, hc = chi.split(h)
            if gc == hc:
                out[universe.index[gp], universe.index[hp]] += rho[i, j]
    return out


def local_form_oracle(m: np.ndarray, chi, universe) -> np.ndarray:
    """⟨H_χ|A|G_χ⟩⟨H_χ̄|G_χ̄⟩ entry by entry."""
    n = len(universe)
    out = np.zeros((n, n), dtype=complex)
    for i, h in enumerate(universe.graphs):
        hp, hc = chi.split(h)
        for j, g in enumerate(universe.graphs):
            gp, gc = chi.split(g)
            if hc == gc:
                out[i, j] = m[universe.index[hp], universe.index[gp]]
    return out


def tensor_oracle(h, k, chi, universe):
    """The universe graph splitting into (h, k), found by scanning."""
    hits = [g for g in universe.graphs if chi.split(g) == (h, k)]
    assert len(hits) <= 1
    return hits[0] if hits else None


def causal_oracle(m: np.ndarray, chi, zeta, universe, np_mask=None) -> bool:
    """Compare Tr_ζ̄(U|G⟩⟨H|U†) with Tr_ζ̄(U (|G⟩⟨H|)_{|χ} U†) for every dyad.

    L[a, b, G, H] is built by looping over output pairs (G', H') that share a
    ζ-complement; the traced-out dyad (|G⟩⟨H|)_{|χ} is |G_χ⟩⟨H_χ| when the
    χ-complements agree, so the right side is a re-indexing of L."""
    n = len(universe)
    L = np.zeros((n, n, n, n), dtype=complex)
    split = [zeta.split(g) for g in universe.graphs]
    for i in range(n):
        for j in range(n):
            if split[i][1] != split[j][1]:
                continue
            a, b = universe.index[split[i][0]], universe.index[split[j][0]]
            L[a, b] += np.outer(m[i], m[j].conj())
    chis = [chi.split(g) for g in universe.graphs]
    for g in range(n):
        for h in range(n):
            if np_mask is not None and not np_mask[g, h]:
                continue
            if chis[g][1] == chis[h][1]:
                rhs = L[:, :, universe.index[chis[g][0]], universe.index[chis[h][0]]]
            else:
                rhs = 0
            if np.abs(L[:, :, g, h] - rhs).max() > 1e-9:
                return False
    return True


def is_local_oracle(m: np.ndarray, chi, universe) -> bool:
    return np.allclose(m, local_form_oracle(m, chi, universe), atol=1e-12)
