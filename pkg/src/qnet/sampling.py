"""Seeded random operators and states over a universe, for law checking."""

from __future__ import annotations

import numpy as np

from .graphs import Graph, Universe
from .hilbert import OperatorMatrix, StateVector
from .restrict import Restriction
from .tensor_trace import tensor_basis


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _cnum(rng, size=None):
    return rng.normal(size=size) + 1j * rng.normal(size=size)


def random_operator(universe: Universe, rng, cols: int | None = None, per_col: int = 2,
                    among=None, label="A") -> OperatorMatrix:
    """Sparse operator whose entries only link graphs with equal system counts,
    so products and adjoints stay inside the universe."""
    idx = np.arange(len(universe)) if among is None else np.asarray(among)
    sizes = universe.sizes
    by_size = {}
    for i in idx:
        by_size.setdefault(int(sizes[i]), []).append(int(i))
    cols = cols or max(1, len(idx) // 3)
    ent = {}
    for j in rng.choice(idx, size=min(cols, len(idx)), replace=False):
        pool = by_size[int(sizes[j])]
        for i in rng.choice(pool, size=min(per_col, len(pool)), replace=False):
            ent[(universe[int(i)], universe[int(j)])] = _cnum(rng)
    return OperatorMatrix(ent, label=label)


def complement_graphs(universe: Universe, chi: Restriction) -> np.ndarray:
    """Indices of graphs that occur as some G_χ̄."""
    return np.unique(universe.split(chi)[1])


def consistency_classes(universe: Universe, chi: Restriction, side: str = "left") -> list[list[int]]:
    """Group χ-parts (or complements, for ``side='right'``) by which partners
    they tensor with.  Operators that only link graphs within one class are
    consistent-preserving, and so are their adjoints and products."""
    fixed = universe.fixed(chi)
    comps = complement_graphs(universe, chi)
    own, other = (fixed, comps) if side == "left" else (comps, fixed)
    groups: dict[tuple, list[int]] = {}
    for i in own:
        g = universe[int(i)]
        sig = tuple(int(k) for k in other
                    if (tensor_basis(g, universe[int(k)], chi) if side == "left"
                        else tensor_basis(universe[int(k)], g, chi)) is not None)
        groups.setdefault((len(g), sig), []).append(int(i))
    return list(groups.values())


def random_cp_operator(universe: Universe, chi: Restriction, rng, side: str = "left", n: int = 6,
                       label="A") -> OperatorMatrix:
    """Random operator linking only consistency-equivalent graphs."""
    classes = [c for c in consistency_classes(universe, chi, side) if c]
    ent = {}
    for _ in range(n):
        c = classes[rng.integers(len(classes))]
        i, j = rng.choice(c, size=2, replace=True)
        ent[(universe[int(i)], universe[int(j)])] = _cnum(rng)
    return OperatorMatrix(ent, label=label)


def random_vector(graphs, rng) -> StateVector:
    v = _cnum(rng, len(graphs))
    v /= np.linalg.norm(v)
    return StateVector(zip(graphs, v))


def random_density(universe: Universe, rng, support: int = 6, rank: int | None = None,
                   graphs=None) -> OperatorMatrix:
    """Mixture of at most four random pure states on a random support."""
    pool = list(universe.graphs) if graphs is None else list(graphs)
    rank = rank or int(rng.integers(1, 5))
    acc = OperatorMatrix(label="rho")
    weights = rng.dirichlet(np.ones(rank))
    for w in weights:
        k = min(support, len(pool))
        pick = [pool[i] for i in rng.choice(len(pool), size=k, replace=False)]
        psi = random_vector(pick, rng)
        acc = acc.plus(OperatorMatrix.outer(psi, psi).scaled(w))
    acc.label = "rho"
    return acc


def random_np_density(universe: Universe, rng, support: int = 6, rank: int | None = None) -> OperatorMatrix:
    """Like :func:`random_density` but each pure component stays inside one
    name class, so the result is name-preserving."""
    nc = universe.name_classes
    classes: dict[int, list[Graph]] = {}
    for i, g in enumerate(universe.graphs):
        classes.setdefault(int(nc[i]), []).append(g)
    big = [c for c in classes.values() if len(c) > 1] or list(classes.values())
    rank = rank or int(rng.integers(1, 5))
    acc = OperatorMatrix(label="rho")
    for w in rng.dirichlet(np.ones(rank)):
        c = big[rng.integers(len(big))]
        k = min(support, len(c))
        psi = random_vector([c[i] for i in rng.choice(len(c), size=k, replace=False)], rng)
        acc = acc.plus(OperatorMatrix.outer(psi, psi).scaled(w))
    acc.label = "rho"
    return acc


def consistent_family(universe: Universe, chi: Restriction, rng, size: int = 3):
    """χ-parts A and complements K with every a ⊗χ k nonzero, grown greedily
    from a random universe graph."""
    g = universe[int(rng.integers(len(universe)))]
    a0, k0 = chi.split(g)
    parts, comps = [a0], [k0]
    fixed = [universe[int(i)] for i in universe.fixed(chi)]
    cgraphs = [universe[int(i)] for i in complement_graphs(universe, chi)]
    for x in rng.permutation(len(fixed)):
        if len(parts) >= size:
            break
        a = fixed[int(x)]
        if a not in parts and all(tensor_basis(a, k, chi) is not None for k in comps):
            parts.append(a)
    for x in rng.permutation(len(cgraphs)):
        if len(comps) >= size:
            break
        k = cgraphs[int(x)]
        if k not in comps and all(tensor_basis(a, k, chi) is not None for a in parts):
            comps.append(k)
    return parts, comps
