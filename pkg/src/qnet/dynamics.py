"""Quantum-walk style dynamics on named graphs, and the constructive
decomposition of causal unitaries into local blocks.

Walk states: ``e`` (no particle), ``R`` (right mover), ``L`` (left mover),
``LR`` (both), ``D`` (a merged pair that can split into two half-leaves).
Any other state is an inert wall.  With an ancilla, a state is written
``b_σ`` with ``b`` in {0, 1}; walk operators act on σ and keep ``b``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product
from math import cos, sin

import numpy as np
from .checks import is_causal, is_local, is_strictly_local
from .graphs import Graph, System, Universe, chain_universe, rename_graph
from .hilbert import (TOL, Operator, StateVector, is_name_preserving, is_renaming_invariant,
                      is_unitary_on, ket, RenamingOperator)
from .names import Leaf, Name, Renaming, leaves
from .reports import PreconditionFailed, jsonable
from .restrict import (AncillaSelect, Compose, Disk, Namewise, Not, Restriction, Union,
                       VertexSelect)
from .tensor_trace import LocalizedOperator

WALK = ("e", "R", "L", "LR")
WALK_SPLIT = WALK + ("D",)
_OCC = {"e": (0, 0), "R": (1, 0), "L": (0, 1), "LR": (1, 1)}
_STATE = {v: k for k, v in _OCC.items()}
# the merge/split pattern and coin signs are one faithful choice among several
DYNAMICS_NOTE = "representative dynamics"


class UniverseMismatch(ValueError):
    pass


def split_state(s: str) -> tuple[str | None, str]:
    """(ancilla bit prefix or None, walk state)."""
    if len(s) > 2 and s[1] == "_" and s[0] in "01":
        return s[:2], s[2:]
    return None, s


def _with(prefix, base):
    return base if prefix is None else prefix + base


def with_bit(bit: int, s: str) -> str:
    return f"{bit}_{split_state(s)[1]}"


def flip_bit(s: str) -> str:
    p, base = split_state(s)
    if p is None:
        raise UniverseMismatch(f"state {s!r} has no ancilla bit")
    return ("1_" if p == "0_" else "0_") + base


# particle step ------------------------------------------------------------------

def _walk_links(g: Graph):
    walkers = [s for s in g.systems if split_state(s.state)[1] in _OCC]
    ws = set(walkers)
    succ, pred = {}, {}
    for a, b in g.edges(True):
        if a in ws and b in ws:
            if a in succ or b in pred:
                raise UniverseMismatch(f"{g} is not a line: branching at {a.text if a in succ else b.text}")
            succ[a] = b
            pred[b] = a
    return walkers, succ, pred


class ParticleStep(Operator):
    """M: right movers hop along edges, left movers against them, and a mover
    with nowhere to go turns around in place."""

    def __init__(self, inverse: bool = False):
        self.inverse = inverse
        self.label = "M†" if inverse else "M"

    def apply_basis(self, g):
        walkers, succ, pred = _walk_links(g)
        fwd, back = (pred, succ) if self.inverse else (succ, pred)
        occ: dict[System, list[int]] = {}

        def put(node, slot):
            occ.setdefault(node, [0, 0])[slot] += 1

        for s in walkers:
            r, l = _OCC[split_state(s.state)[1]]
            if r:
                t = fwd.get(s)
                put(s, 1) if t is None else put(t, 0)
            if l:
                t = back.get(s)
                put(s, 0) if t is None else put(t, 1)
        out = []
        for s in g.systems:
            p, base = split_state(s.state)
            if base not in _OCC:
                out.append(s)
                continue
            r, l = occ.get(s, (0, 0))
            if r > 1 or l > 1:
                raise AssertionError("particle step is not a bijection on slots")
            out.append(System(_with(p, _STATE[(r, l)]), s.name))
        return ket(Graph(out, check=False))

    def adjoint(self):
        return ParticleStep(not self.inverse)


class Coin(Operator):
    """C(θ): on every node R ↦ cos R + sin L and L ↦ cos L − sin R."""

    def __init__(self, theta: float):
        self.theta = float(theta)
        self.label = f"C({self.theta:g})"

    def apply_basis(self, g):
        c, s_ = cos(self.theta), sin(self.theta)
        options = []
        for s in g.systems:
            p, base = split_state(s.state)
            if base == "R":
                options.append([(System(_with(p, "R"), s.name), c), (System(_with(p, "L"), s.name), s_)])
            elif base == "L":
                options.append([(System(_with(p, "L"), s.name), c), (System(_with(p, "R"), s.name), -s_)])
            else:
                options.append([(s, 1.0)])
        acc = {}
        for combo in product(*options):
            amp = 1.0
            for _, a in combo:
                amp *= a
            if amp != 0:
                gg = Graph((x for x, _ in combo), check=False)
                acc[gg] = acc.get(gg, 0) + amp
        return StateVector(acc)

    def adjoint(self):
        return Coin(-self.theta)


def _merge_split_sites(g: Graph, merged: str, left: str, right: str):
    """Pattern occurrences: ('merged', system) for a merged leaf, or
    ('split', l-system, r-system) for a sibling pair that merges."""
    by_name = {s.name: s for s in g.systems}
    sites = []
    for s in g.systems:
        p, base = split_state(s.state)
        if not isinstance(s.name, Leaf):
            continue
        if base == merged:
            sites.append(("merged", s))
        elif base == left and s.name.suffix.endswith("l"):
            sib = by_name.get(Leaf(s.name.key, s.name.suffix[:-1] + "r"))
            if sib is not None and sib.state == _with(p, right):
                sites.append(("split", s, sib))
    return sites


class MergeSplit(Operator):
    """H: a merged leaf ``D.(k,t)`` becomes ``R.(k,tl), L.(k,tr)`` and back.

    With ``phi`` set this is the rotation Hq(φ): each occurrence goes to
    cos(φ)·itself + sin(φ)·its partner, with a minus sign from split to
    merged.  Join-named systems never take part.
    """

    def __init__(self, phi: float | None = None, merged: str = "D", left: str = "R", right: str = "L"):
        self.phi = phi
        self.states = (merged, left, right)
        self.label = "H" if phi is None else f"Hq({phi:g})"

    def _alternatives(self, site):
        merged, left, right = self.states
        if site[0] == "merged":
            s = site[1]
            p, _ = split_state(s.state)
            k, t = s.name.key, s.name.suffix
            own, other = (s,), (System(_with(p, left), Leaf(k, t + "l")), System(_with(p, right), Leaf(k, t + "r")))
            sign = 1.0
        else:
            a, b = site[1], site[2]
            p, _ = split_state(a.state)
            own = (a, b)
            other = (System(_with(p, merged), Leaf(a.name.key, a.name.suffix[:-1])),)
            sign = -1.0
        if self.phi is None:
            return [(other, 1.0)]
        return [(own, cos(self.phi)), (other, sign * sin(self.phi))]

    def apply_basis(self, g):
        sites = _merge_split_sites(g, *self.states)
        used = set()
        for site in sites:
            used.update(site[1:])
        fixed = [s for s in g.systems if s not in used]
        acc = {}
        for combo in product(*(self._alternatives(site) for site in sites)):
            amp = 1.0
            systems = list(fixed)
            for sy, a in combo:
                amp *= a
                systems.extend(sy)
            if amp != 0:
                gg = Graph(systems, check=False)
                acc[gg] = acc.get(gg, 0) + amp
        return StateVector(acc)

    def adjoint(self):
        if self.phi is None:
            return self
        return MergeSplit(-self.phi, *self.states)


class StateSwap(Operator):
    """Exchange the states of the systems holding leaf ``+a`` and leaf ``+b``."""

    def __init__(self, a: int, b: int):
        self.a, self.b = a, b
        self.label = f"Swap({a},{b})"

    def apply_basis(self, g):
        holder = {}
        for s in g.systems:
            for k in (self.a, self.b):
                if any(lf.key == k for lf in leaves(s.name)):
                    holder[k] = s
        if len(holder) < 2 or holder[self.a] is holder[self.b]:
            return ket(g)
        x, y = holder[self.a], holder[self.b]
        systems = [s for s in g.systems if s not in (x, y)]
        systems += [System(y.state, x.name), System(x.state, y.name)]
        return ket(Graph(systems, check=False))

    def adjoint(self):
        return self


class Toggle(Operator):
    """τ: flip the ancilla bit of every system."""

    label = "tau"

    def apply_basis(self, g):
        return ket(Graph((System(flip_bit(s.state), s.name) for s in g.systems), check=False))

    def adjoint(self):
        return self


class Lift(Operator):
    """Run a plain-state operator on a graph whose states all carry bit 0."""

    def __init__(self, inner: Operator, bit: int = 0):
        self.inner = inner
        self.bit = bit
        self.label = inner.label

    def apply_basis(self, g):
        prefix = f"{self.bit}_"
        plain = []
        for s in g.systems:
            p, base = split_state(s.state)
            if p != prefix:
                raise UniverseMismatch(f"{s.text} does not carry ancilla bit {self.bit}")
            plain.append(System(base, s.name))
        out = self.inner.apply_basis(Graph(plain, check=False))
        return StateVector((Graph((System(prefix + s.state, s.name) for s in h.systems), check=False), a)
                           for h, a in out)

    def adjoint(self):
        return Lift(self.inner.adjoint(), self.bit)


def particle_step_M() -> ParticleStep:
    return ParticleStep()


def coin_C(theta: float) -> Coin:
    return Coin(theta)


def merge_split_H() -> MergeSplit:
    return MergeSplit()


def quantum_merge_split_Hq(phi: float) -> MergeSplit:
    return MergeSplit(phi)


def toggle_tau(v: Name | None = None) -> Operator:
    """τ, or τ_v = τ ⊗ζ_v I when a vertex is given."""
    if v is None:
        return Toggle()
    return LocalizedOperator(Toggle(), VertexSelect(v))


def walk_chain_universe(n: int, alphabet=WALK, keys=None) -> Universe:
    return chain_universe(n, alphabet, keys)


def ancilla_universe(universe: Universe) -> Universe:
    """Every graph of the universe with every assignment of ancilla bits."""
    graphs = []
    for g in universe.graphs:
        for bits in product((0, 1), repeat=len(g)):
            graphs.append(Graph((System(f"{b}_{s.state}", s.name) for b, s in zip(bits, g.systems)),
                                check=False))
    return Universe(graphs, spec=universe.spec, close=False)


# decomposition -------------------------------------------------------------------

@dataclass
class DecompositionResult:
    blocks: list
    residual: float
    commutator_max: float
    toggle_commutator_max: float
    certificates: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    mode: str = "ancilla"

    @property
    def locality_ok(self) -> bool:
        return all(c == "PASS" for c in self.certificates.values())

    def to_json(self, timing: bool = True) -> dict:
        d = {"mode": self.mode, "residual": self.residual, "commutator_max": self.commutator_max,
             "toggle_commutator_max": self.toggle_commutator_max,
             "blocks": [{"vertex": str(v), "restriction": str(xi), "nonzeros": int(np.count_nonzero(np.abs(k) > 1e-14))}
                        for v, k, xi in self.blocks],
             "certificates": jsonable(self.certificates)}
        if timing:
            d["timings"] = {k: round(v, 3) for k, v in self.timings.items()}
        return d


def _comm(a, b) -> float:
    c = a @ b - b @ a
    return float(abs(c).max()) if c.nnz else 0.0


def _ordered_product(mats):
    out = None
    for m in mats:
        out = m if out is None else out @ m
    return out


def minimal_cause(u: Operator, v: Name, universe: Universe, max_r: int = 3,
                  base=VertexSelect) -> Restriction:
    """Smallest disk around v (radius 0 is v itself) from which U is causal
    onto v, on the name-preserving sector."""
    z = base(v)
    for r in range(max_r + 1):
        chi = z if r == 0 else Disk(z, r)
        if is_causal(u, chi, z, universe, np_sector=True):
            return chi
    raise PreconditionFailed("causality", {"vertex": str(v), "max_radius": max_r})


def toggle_stable_xi(mu: Restriction, chi: Restriction, zeta: Restriction) -> Restriction:
    """μ-part of χ computed on G_μ together with ζ's systems, plus ζ.

    Unlike μχ ∪ μ̄ζ, this region does not shrink when a ζ-system leaves
    μ, so a block that toggles that system can be local to it.
    """
    return Union(Compose(Compose(Union(mu, zeta), chi), mu), zeta)


def block_decompose(u: Operator, universe: Universe, cover, chi_map=None, certify: bool = True,
                    tol: float = TOL, mode: str = "exact") -> DecompositionResult:
    """Write U ⊗μ I, restricted to ancilla bits 0, as (∏τ_v)(∏K_v) with
    K_v = (U⊗μI)† τ_v (U⊗μI).

    Checks first that U is a name-preserving unitary that is (χ_v, ζ_v)-causal
    on the name-preserving sector for every v in the cover.  By default χ_v
    is the smallest causal disk around v.  Each K_v is certified against
    ξ_v = μχ_v ∪ μ̄ζ_v and against :func:`toggle_stable_xi`.  ``mode``
    selects how ζ_v matches names (exact or overlap).
    """
    select = lambda v: VertexSelect(v, mode)
    t0 = time.perf_counter()
    ok, w = is_name_preserving(u, universe)
    if not ok:
        raise PreconditionFailed("name-preserving", w)
    ok, err = is_unitary_on(u, universe)
    if not ok:
        raise PreconditionFailed("unitary", err)
    present = {n for g in universe.graphs for n in g.names}
    if not present <= set(cover):
        raise PreconditionFailed("cover-incomplete", sorted(str(n) for n in present - set(cover)))
    chis = {}
    for v in cover:
        if chi_map is None:
            chis[v] = minimal_cause(u, v, universe, base=select)
            continue
        chis[v] = chi_map(v)
        c = is_causal(u, chis[v], select(v), universe, np_sector=True)
        if not c:
            raise PreconditionFailed("causality", {"vertex": str(v), **c.witness})
    t1 = time.perf_counter()

    anc = ancilla_universe(universe)
    mu = AncillaSelect(0)
    up = LocalizedOperator(Lift(u), mu)
    S = up.sparse_matrix(anc)
    Sd = S.conj().T.tocsr()
    taus = {v: LocalizedOperator(Toggle(), select(v)).sparse_matrix(anc) for v in cover}
    ks = {v: (Sd @ taus[v] @ S).tocsr() for v in cover}
    t2 = time.perf_counter()

    zero = [i for i, g in enumerate(anc.graphs) if all(s.state.startswith("0_") for s in g.systems)]
    lhs = _ordered_product([taus[v] for v in cover]) @ _ordered_product([ks[v] for v in cover])
    diff = (lhs - S)[:, zero]
    residual = float(np.sqrt(np.max(np.asarray(abs(diff).power(2).sum(axis=0))))) if diff.nnz else 0.0
    cover = list(cover)
    kc = max((_comm(ks[x], ks[y]) for i, x in enumerate(cover) for y in cover[i + 1:]), default=0.0)
    tc = max((_comm(taus[x], taus[y]) for i, x in enumerate(cover) for y in cover[i + 1:]), default=0.0)
    t3 = time.perf_counter()

    blocks, certs = [], {}
    for v in cover:
        z = select(v)
        xi = Union(Compose(mu, chis[v]), Compose(Not(mu), z))
        k = ks[v].toarray()
        blocks.append((v, k, xi))
        if certify:
            certs[f"K[{v}] strictly xi-local"] = is_strictly_local(k, xi, anc, tol, cross_check=False).status
            certs[f"K[{v}] strictly xi'-local"] = is_strictly_local(
                k, toggle_stable_xi(mu, chis[v], z), anc, tol, cross_check=False).status
            certs[f"tau[{v}] local"] = is_local(taus[v].toarray(), z, anc, tol).status
    t4 = time.perf_counter()
    return DecompositionResult(blocks, residual, kc, tc, certs,
                               {"preconditions": t1 - t0, "blocks": t2 - t1, "residual": t3 - t2,
                                "certificates": t4 - t3, "total": t4 - t0}, mode=f"ancilla/{mode}")


def binary_chain_universe(n: int, alphabet=WALK) -> tuple[Universe, list[int]]:
    """Chain on even keys 2, 4, ..., 2(n+1), plus every variant where some
    pairs 2x ↔ 2x+1 are swapped.  Returns the universe and the x's."""
    xs = list(range(1, n + 2))
    base = chain_universe(n, alphabet, [2 * x for x in xs])
    graphs = set()
    for flips in product((0, 1), repeat=len(xs)):
        r = Renaming({2 * x: 2 * x + 1 for x, f in zip(xs, flips) if f} |
                     {2 * x + 1: 2 * x for x, f in zip(xs, flips) if f})
        graphs.update(rename_graph(r, g) for g in base.graphs)
    return Universe(graphs, spec=base.spec, close=False), xs


def tau_x(x: int) -> RenamingOperator:
    """Key renaming 2x ↔ 2x+1."""
    return RenamingOperator(Renaming.swap(2 * x, 2 * x + 1), label=f"tau_{x}")


def zeta_x(x: int) -> Restriction:
    """Systems whose names meet ±2x or ±2x+1."""
    return Union(VertexSelect(Leaf(2 * x), "overlap_pm"), VertexSelect(Leaf(2 * x + 1), "overlap_pm"))


def block_decompose_no_ancilla(u: Operator, universe: Universe, xs, chi_map=None, certify: bool = True,
                               tol: float = TOL) -> DecompositionResult:
    """Ancilla-free variant: the spare bit is the choice between keys 2x and
    2x+1, and μ keeps systems not built from odd keys alone."""
    t0 = time.perf_counter()
    ok, w = is_renaming_invariant(u, universe, [Renaming.swap(2 * x, 2 * x + 1) for x in xs])
    if not ok:
        raise PreconditionFailed("renaming-invariant", w)
    ok, w = is_name_preserving(u, universe)
    if not ok:
        raise PreconditionFailed("name-preserving", w)
    ok, err = is_unitary_on(u, universe)
    if not ok:
        raise PreconditionFailed("unitary", err)
    taus = {}
    for x in xs:
        ok, err = is_unitary_on(tau_x(x), universe)
        if not ok:
            raise PreconditionFailed("tau unitary", {"x": x, "err": err})
        taus[x] = tau_x(x).sparse_matrix(universe)
    chis = {}
    for x in xs:
        if chi_map is None:
            chis[x] = minimal_cause(u, x, universe, base=zeta_x)
            continue
        chis[x] = chi_map(x)
        c = is_causal(u, chis[x], zeta_x(x), universe, np_sector=True)
        if not c:
            raise PreconditionFailed("causality", {"x": x, **c.witness})
    t1 = time.perf_counter()

    odd = sorted({abs(lf.key) for g in universe.graphs for s in g.systems
                  for lf in leaves(s.name) if abs(lf.key) % 2})
    mu = Namewise([Leaf(k) for k in odd])
    S = LocalizedOperator(u, mu).sparse_matrix(universe)
    Sd = S.conj().T.tocsr()
    ks = {x: (Sd @ taus[x] @ S).tocsr() for x in xs}
    even = [i for i, g in enumerate(universe.graphs)
            if all(lf.key % 2 == 0 for s in g.systems for lf in leaves(s.name))]
    lhs = _ordered_product([taus[x] for x in xs]) @ _ordered_product([ks[x] for x in xs])
    diff = (lhs - S)[:, even]
    residual = float(np.sqrt(np.max(np.asarray(abs(diff).power(2).sum(axis=0))))) if diff.nnz else 0.0
    kc = max((_comm(ks[x], ks[y]) for i, x in enumerate(xs) for y in xs[i + 1:]), default=0.0)
    tc = max((_comm(taus[x], taus[y]) for i, x in enumerate(xs) for y in xs[i + 1:]), default=0.0)
    t2 = time.perf_counter()

    blocks, certs = [], {}
    for x in xs:
        xi = Union(Compose(mu, chis[x]), Compose(Not(mu), zeta_x(x)))
        k = ks[x].toarray()
        blocks.append((x, k, xi))
        if certify:
            certs[f"tau[{x}] local"] = is_local(taus[x].toarray(), zeta_x(x), universe, tol).status
            certs[f"K[{x}] strictly xi-local"] = is_strictly_local(k, xi, universe, tol, cross_check=False).status
            certs[f"K[{x}] strictly xi'-local"] = is_strictly_local(
                k, toggle_stable_xi(mu, chis[x], zeta_x(x)), universe, tol, cross_check=False).status
    t3 = time.perf_counter()
    return DecompositionResult(blocks, residual, kc, tc, certs,
                               {"preconditions": t1 - t0, "residual": t2 - t1, "certificates": t3 - t2,
                                "total": t3 - t0}, mode="no-ancilla")
