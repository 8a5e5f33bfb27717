"""Restrictions: maps G ↦ G_χ ⊆ G that pick the part of a network an
operation looks at.  The complement G_χ̄ is whatever is left over.

Restrictions are closed constructor terms so they hash, print as literals
and can be cached per graph.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Callable, Iterable

import numpy as np

from .graphs import EMPTY, Graph, System, Universe
from .names import Name, in_closure, leaves, negate, overlaps, regions
from .reports import CheckResult, verdict


class Restriction:
    """Base class.  Subclasses implement :meth:`_select`."""

    pointwise = False

    def __init__(self):
        self._memo: dict[Graph, tuple[Graph, Graph]] = {}

    def _select(self, g: Graph) -> Iterable[System]:
        raise NotImplementedError

    def split(self, g: Graph) -> tuple[Graph, Graph]:
        """(G_χ, G_χ̄)."""
        hit = self._memo.get(g)
        if hit is None:
            keep = set(self._select(g))
            hit = (g.sub(s for s in g.systems if s in keep),
                   g.sub(s for s in g.systems if s not in keep))
            if len(self._memo) > 200_000:
                self._memo.clear()
            self._memo[g] = hit
        return hit

    def __call__(self, g: Graph) -> Graph:
        return self.split(g)[0]

    def complement_of(self, g: Graph) -> Graph:
        return self.split(g)[1]

    def key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.key() == other.key()

    def __hash__(self):
        return hash((type(self).__name__, self.key()))

    def __repr__(self):
        return str(self)


class Full(Restriction):
    pointwise = True

    def _select(self, g):
        return g.systems

    def key(self):
        return ()

    def __str__(self):
        return "full"


class Empty(Restriction):
    pointwise = True

    def _select(self, g):
        return ()

    def key(self):
        return ()

    def __str__(self):
        return "empty"


class Pointwise(Restriction):
    """Keep each system on its own merits.  ``pred`` sees one system."""

    pointwise = True

    def __init__(self, pred: Callable[[System], bool], label: str):
        super().__init__()
        self.pred = pred
        self.label = label

    def _select(self, g):
        return [s for s in g.systems if self.pred(s)]

    def key(self):
        return (self.label, self.pred)

    def __str__(self):
        return f"pointwise({self.label})"


class StateSelect(Pointwise):
    def __init__(self, state: str):
        self.state = state
        super().__init__(lambda s: s.state == state, f"state={state}")

    def key(self):
        return (self.state,)


class AncillaSelect(Pointwise):
    """Keep systems whose ancilla bit (state prefix ``b_``) equals ``bit``."""

    def __init__(self, bit: int = 0):
        self.bit = bit
        prefix = f"{bit}_"
        super().__init__(lambda s: s.state.startswith(prefix), f"b={bit}")

    def key(self):
        return (self.bit,)

    def __str__(self):
        return f"ancilla(b={self.bit})"


class Not(Pointwise):
    """Complement of a pointwise restriction, itself pointwise."""

    def __init__(self, inner: Restriction):
        if not inner.pointwise:
            raise ValueError("only pointwise restrictions have a pointwise complement")
        self.inner = inner
        super().__init__(lambda s, f=inner: not f(Graph([s], check=False)), f"not {inner}")

    def key(self):
        return (self.inner,)

    def __str__(self):
        return f"not({self.inner})"


_PREDICATES: dict[str, Callable[[System], bool]] = {}


def register_predicate(name: str, fn: Callable[[System], bool]):
    """Make ``pointwise(pred=name)`` available to literals."""
    _PREDICATES[name] = fn


class NamedPointwise(Pointwise):
    def __init__(self, pred_name: str):
        if pred_name not in _PREDICATES:
            raise KeyError(f"no predicate registered as {pred_name!r}")
        self.pred_name = pred_name
        super().__init__(_PREDICATES[pred_name], f"pred={pred_name}")

    def key(self):
        return (self.pred_name,)


MODES = ("exact", "overlap", "overlap_pm")


class VertexSelect(Pointwise):
    """ζ_v: systems at vertex v (``exact``), or whose name shares a region
    with v (``overlap``) or with v or its sign flip (``overlap_pm``)."""

    def __init__(self, v: Name, mode: str = "exact"):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.v = v
        self.mode = mode
        if mode == "exact":
            pred = lambda s: s.name == v
        else:
            target = [v, negate(v)] if mode == "overlap_pm" else [v]
            pred = lambda s: overlaps([s.name], target)
        super().__init__(pred, "")

    def key(self):
        return (self.v, self.mode)

    def __str__(self):
        m = "" if self.mode == "exact" else f",mode={self.mode}"
        return f"zeta(v={self.v}{m})"


class Namewise(Pointwise):
    """Keep systems whose name is not buildable from V±(S)."""

    def __init__(self, S: Iterable[Name]):
        self.S = frozenset(S)
        pm = list(self.S) + [negate(u) for u in self.S]
        super().__init__(lambda s: not in_closure(s.name, pm), "")

    def key(self):
        return (self.S,)

    def __str__(self):
        return "namewise(S={" + ",".join(str(u) for u in sorted(self.S)) + "})"


class KeyParity(Pointwise):
    """Keep systems whose name is not built only from keys of the given parity."""

    def __init__(self, parity: int = 1):
        self.parity = parity
        super().__init__(lambda s: not all(abs(lf.key) % 2 == parity for lf in leaves(s.name)), "")

    def key(self):
        return (self.parity,)

    def __str__(self):
        return f"keyparity(avoid={'odd' if self.parity else 'even'})"


class Disk(Restriction):
    """The base part plus everything within ``r`` edges of it.

    Oriented disks only walk edges backwards, collecting the systems that can
    signal into the base.
    """

    def __init__(self, base: Restriction, r: int, oriented: bool = False):
        super().__init__()
        if r < 0:
            raise ValueError("radius must be non-negative")
        self.base = base
        self.r = r
        self.oriented = oriented

    def _select(self, g):
        start = set(self.base(g).systems)
        if self.r == 0 or not start:
            return start
        nbrs: dict[System, list[System]] = {}
        if self.oriented:
            for a, b in g.edges(True):
                nbrs.setdefault(b, []).append(a)
        else:
            for e in g.edges(False):
                a, b = tuple(e)
                nbrs.setdefault(a, []).append(b)
                nbrs.setdefault(b, []).append(a)
        dist = {s: 0 for s in start}
        todo = deque(start)
        while todo:
            s = todo.popleft()
            if dist[s] == self.r:
                continue
            for t in nbrs.get(s, ()):
                if t not in dist:
                    dist[t] = dist[s] + 1
                    todo.append(t)
        return dist.keys()

    def key(self):
        return (self.base, self.r, self.oriented)

    def __str__(self):
        return f"disk({self.base},r={self.r},oriented={'true' if self.oriented else 'false'})"


class Union(Restriction):
    def __init__(self, a: Restriction, b: Restriction):
        super().__init__()
        self.a, self.b = a, b
        self.pointwise = a.pointwise and b.pointwise

    def _select(self, g):
        return set(self.a(g).systems) | set(self.b(g).systems)

    def key(self):
        return (self.a, self.b)

    def __str__(self):
        return f"union({self.a},{self.b})"


class Compose(Restriction):
    """``G ↦ (G_a)_b``."""

    def __init__(self, a: Restriction, b: Restriction):
        super().__init__()
        self.a, self.b = a, b
        self.pointwise = a.pointwise and b.pointwise

    def _select(self, g):
        return self.b(self.a(g)).systems

    def key(self):
        return (self.a, self.b)

    def __str__(self):
        return f"compose({self.a},{self.b})"


class FunctionRestriction(Restriction):
    """Arbitrary subgraph selector, not assumed to obey the restriction law."""

    def __init__(self, fn: Callable[[Graph], Iterable[System]], label: str):
        super().__init__()
        self.fn = fn
        self.label = label

    def _select(self, g):
        return self.fn(g)

    def key(self):
        return (self.label, self.fn)

    def __str__(self):
        return f"fn({self.label})"


FULL = Full()
EMPTY_R = Empty()


def zeta(v: Name, mode: str = "exact") -> VertexSelect:
    return VertexSelect(v, mode)


def disk(base: Restriction, r: int, oriented: bool = False) -> Disk:
    return Disk(base, r, oriented)


def combine(chi: Restriction, zeta_: Restriction, how: str = "union") -> Restriction:
    if how == "union":
        return Union(chi, zeta_)
    if how == "compose":
        return Compose(chi, zeta_)
    raise ValueError("how must be 'union' or 'compose'")


def apply_restriction(chi: Restriction, g: Graph) -> tuple[Graph, Graph]:
    return chi.split(g)


# set-level helpers -----------------------------------------------------------

def _side(chi: Restriction, bar: bool):
    if bar:
        return lambda g: chi.split(g)[1]
    return lambda g: chi.split(g)[0]


def _subsets(systems):
    for k in range(len(systems) + 1):
        yield from combinations(systems, k)


def validate_restriction(chi: Restriction, universe: Universe) -> CheckResult:
    """The restriction law on every universe graph, plus χχ = χ and χχ̄ = ∅."""
    checked = 0
    for g in universe.graphs:
        part, rest = chi.split(g)
        if not set(part.systems) <= set(g.systems):
            return verdict("restriction", False, {"graph": str(g), "reason": "not a subgraph"})
        for extra in _subsets(rest.systems):
            h = g.sub(part.systems + extra)
            checked += 1
            if chi(h) != part:
                return verdict("restriction", False,
                               {"G": str(g), "H": str(h), "G_chi": str(part), "H_chi": str(chi(h))},
                               checked=checked)
        # χχ = χ; then χχ̄ = G_χ ∖ G_χχ = ∅ follows
        if chi(part) != part:
            return verdict("restriction", False, {"graph": str(g), "reason": "not idempotent"})
    return verdict("restriction", True, checked=checked)


def commutes(chi: Restriction, zeta_: Restriction, universe: Universe,
             with_complements: bool = False) -> CheckResult:
    """G_χζ = G_ζχ for all G; optionally also for χ̄ and ζ̄ at set level."""
    pairs = [(False, False)]
    if with_complements:
        pairs += [(True, False), (False, True), (True, True)]
    for g in universe.graphs:
        for bc, bz in pairs:
            f, h = _side(chi, bc), _side(zeta_, bz)
            a, b = h(f(g)), f(h(g))
            if a != b:
                return verdict("commutes", False, {"graph": str(g), "chi_bar": bc, "zeta_bar": bz,
                                                   "chi_then_zeta": str(a), "zeta_then_chi": str(b)})
    return verdict("commutes", True)


def comprehended(zeta_: Restriction, chi: Restriction, universe: Universe,
                 np_only: bool = False) -> CheckResult:
    """ζ ⊑ χ: G_χζ = G_ζ and ⟨H_ζ̄|G_ζ̄⟩ = ⟨H_χζ̄|G_χζ̄⟩⟨H_χ̄|G_χ̄⟩.

    With ``np_only`` the bracket identity is only required when V(G) ≏ V(H).
    """
    pc, cc = universe.split(chi)
    pz, cz = universe.split(zeta_)
    for i, g in enumerate(universe.graphs):
        if pz[pc[i]] != pz[i]:
            return verdict("comprehended", False, {"graph": str(g), "reason": "G_chi_zeta != G_zeta",
                                                   "G_chi_zeta": str(universe[pz[pc[i]]]),
                                                   "G_zeta": str(universe[pz[i]])})
    inner_c = cz[pc]
    lhs = cz[:, None] == cz[None, :]
    rhs = (inner_c[:, None] == inner_c[None, :]) & (cc[:, None] == cc[None, :])
    bad = lhs != rhs
    if np_only:
        nc = universe.name_classes
        bad &= nc[:, None] == nc[None, :]
    if bad.any():
        i, j = np.argwhere(bad)[0]
        return verdict("comprehended", False, {"G": str(universe[i]), "H": str(universe[j]),
                                               "lhs": int(lhs[i, j]), "rhs": int(rhs[i, j])})
    return verdict("comprehended", True)
