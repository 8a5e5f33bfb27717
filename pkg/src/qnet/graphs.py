"""Graphs as sets of (state, name) systems, and finite universes of graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb
from typing import Callable, Iterable, Sequence

import numpy as np

from .names import Join, Leaf, Name, Renaming, comparable, leaves, negate, regions


class WellNamednessViolation(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class UniverseTooLarge(ValueError):
    pass


class SupportEscape(KeyError):
    """An operator produced a graph outside the universe it was asked about."""

    def __init__(self, graph, where=""):
        super().__init__(f"{graph} is outside the universe{where}")
        self.graph = graph

    def __str__(self):
        return self.args[0]


class System:
    __slots__ = ("state", "name", "text", "_hash")

    def __init__(self, state: str, name: Name):
        if not isinstance(state, str) or not state:
            raise ValueError(f"bad state {state!r}")
        self.state = state
        self.name = name
        self.text = f"{state}.{name}"
        self._hash = hash(self.text)

    def __eq__(self, other):
        return isinstance(other, System) and self.text == other.text

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.text < other.text

    def __repr__(self):
        return f"System({self.text})"

    def with_state(self, state: str) -> "System":
        return System(state, self.name)


def _region_clash(systems: Iterable[System]):
    """First pair of overlapping leaf regions, or None."""
    by_key: dict[int, list[tuple[str, System]]] = {}
    for s in systems:
        for leaf in leaves(s.name):
            by_key.setdefault(leaf.key, []).append((leaf.suffix, s))
    for k, items in by_key.items():
        items.sort(key=lambda p: p[0])
        for (a, sa), (b, sb) in zip(items, items[1:]):
            if b.startswith(a):
                return (k, a, sa), (k, b, sb)
    return None


class Graph:
    """Immutable well-named set of systems, ordered by serialized text."""

    __slots__ = ("systems", "text", "_hash", "_edges", "_regions", "_names")

    def __init__(self, systems: Iterable[System] = (), *, check: bool = True):
        systems = tuple(sorted(set(systems)))
        if check:
            clash = _region_clash(systems)
            if clash:
                (k, a, sa), (_, b, sb) = clash
                raise WellNamednessViolation(
                    f"{sa.text} and {sb.text} share region ({k}, {a or 'ε'}) / ({k}, {b or 'ε'})",
                    witness=(sa, sb))
        self.systems = systems
        self.text = "{" + ", ".join(s.text for s in systems) + "}"
        self._hash = hash(self.text)
        self._edges = {}
        self._regions = None
        self._names = None

    def __eq__(self, other):
        return isinstance(other, Graph) and self.text == other.text

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (len(self.systems), self.text) < (len(other.systems), other.text)

    def __len__(self):
        return len(self.systems)

    def __iter__(self):
        return iter(self.systems)

    def __contains__(self, s):
        return s in self.systems

    def __str__(self):
        return self.text

    def __repr__(self):
        return f"Graph({self.text})"

    def __bool__(self):
        return bool(self.systems)

    def sub(self, systems: Iterable[System]) -> "Graph":
        """Subgraph; skips the well-namedness check."""
        return Graph(systems, check=False)

    def without(self, systems: Iterable[System]) -> "Graph":
        drop = set(systems)
        return Graph((s for s in self.systems if s not in drop), check=False)

    @property
    def names(self) -> frozenset:
        if self._names is None:
            self._names = frozenset(s.name for s in self.systems)
        return self._names

    @property
    def region_set(self) -> frozenset:
        if self._regions is None:
            self._regions = regions(self.names)
        return self._regions

    def edges(self, oriented: bool = True) -> frozenset:
        """Edges between systems, as pairs of systems (see :func:`induced_edges`)."""
        if oriented not in self._edges:
            self._edges[oriented] = _system_edges(self.systems, oriented)
        return self._edges[oriented]


EMPTY = Graph()


def make_graph(systems: Iterable[System | tuple]) -> Graph:
    """Build a graph from systems or ``(state, name)`` pairs; raises on overlap."""
    out = []
    for s in systems:
        out.append(s if isinstance(s, System) else System(s[0], s[1]))
    if len(set(out)) != len(out):
        dup = next(s for s in out if out.count(s) > 1)
        raise WellNamednessViolation(f"system {dup.text} listed twice", witness=(dup, dup))
    return Graph(out)


def is_well_named(systems: Iterable[System]) -> bool:
    systems = list(systems)
    return len(set(systems)) == len(systems) and _region_clash(systems) is None


def support(g: Graph) -> frozenset:
    """V(G)."""
    return g.names


def pm_support(g: Graph) -> frozenset:
    """V±(G): the names together with their sign-flipped copies."""
    return g.names | frozenset(negate(u) for u in g.names)


def _system_edges(systems: Sequence[System], oriented: bool) -> frozenset:
    heads: dict[int, list[tuple[str, System]]] = {}
    tails: dict[int, list[tuple[str, System]]] = {}
    for s in systems:
        for leaf in leaves(s.name):
            if leaf.key > 0:
                heads.setdefault(leaf.key, []).append((leaf.suffix, s))
            else:
                tails.setdefault(-leaf.key, []).append((leaf.suffix, s))
    out = set()
    for x, ts in tails.items():
        for t1, a in ts:
            for t2, b in heads.get(x, ()):
                if a is not b and comparable(t1, t2):
                    out.add((a, b) if oriented else frozenset((a, b)))
    return frozenset(out)


def induced_edges(g: Graph, oriented: bool = True) -> frozenset:
    """Edges of ``g`` as name pairs.

    ``u -> v`` when ``u`` holds a leaf of ``-x`` and ``v`` a leaf of ``x`` with
    prefix-comparable suffixes.  Unoriented edges are two-element frozensets.
    """
    if oriented:
        return frozenset((a.name, b.name) for a, b in g.edges(True))
    return frozenset(frozenset(s.name for s in e) for e in g.edges(False))


def graph_union(g: Graph, h: Graph) -> Graph:
    return Graph(g.systems + h.systems)


def rename_graph(r: Renaming, g: Graph) -> Graph:
    return Graph((System(s.state, r(s.name)) for s in g.systems), check=False)


def chain_names(n: int, keys: Sequence[int] | None = None) -> list[Name]:
    """Names of an n-node line: node i is ``k_i ∨ -k_{i+1}``.

    Edges run from node i to node i+1; the two end nodes keep a dangling leaf.
    """
    keys = list(keys) if keys is not None else list(range(1, n + 2))
    if len(keys) != n + 1:
        raise ValueError("a chain of n nodes needs n+1 keys")
    return [Join(Leaf(keys[i]), Leaf(-keys[i + 1])) for i in range(n)]


# universes ----------------------------------------------------------------

FAMILIES = ("leaves", "joins", "chain")


@dataclass(frozen=True)
class UniverseSpec:
    """Finite slice of graphs.

    ``keys`` are positive ids (both signs are used).  ``family`` picks the
    name shapes: single leaves, leaves plus two-leaf joins, or chain nodes
    built from consecutive keys.  ``system_filter`` optionally drops systems.
    """

    keys: tuple = (1, 2)
    depth: int = 1
    alphabet: tuple = ("0", "1")
    max_systems: int | None = 2
    family: str = "leaves"
    system_filter: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")

    def names(self) -> list[Name]:
        if self.family == "chain":
            return chain_names(len(self.keys) - 1, self.keys)
        sufs = [""]
        for d in range(1, self.depth + 1):
            sufs += ["".join(p) for p in product("lr", repeat=d)]
        ls = [Leaf(s * k, t) for k in self.keys for s in (1, -1) for t in sufs]
        out = list(ls)
        if self.family == "joins":
            for a in ls:
                for b in ls:
                    if a != b and _region_clash([System("x", a), System("y", b)]) is None:
                        j = Join(a, b)
                        if not (a.key == b.key and a.suffix[:-1] == b.suffix[:-1]
                                and a.suffix[-1:] == "l" and b.suffix[-1:] == "r"):
                            out.append(j)
        return out

    def describe(self) -> dict:
        return {"keys": list(self.keys), "depth": self.depth, "alphabet": list(self.alphabet),
                "max_systems": self.max_systems, "family": self.family}


DEFAULT_SPEC = UniverseSpec()
UNIVERSE_CAP = 1_000_000


def enumerate_universe(spec: UniverseSpec = DEFAULT_SPEC, cap: int = UNIVERSE_CAP) -> "Universe":
    """All well-named graphs of the slice, ∅ included, sorted by (size, text)."""
    systems = [System(a, u) for u in spec.names() for a in spec.alphabet]
    if spec.system_filter is not None:
        systems = [s for s in systems if spec.system_filter(s)]
    systems.sort()
    m = len(systems) if spec.max_systems is None else spec.max_systems
    bound = sum(comb(len(systems), j) for j in range(min(m, len(systems)) + 1))
    if bound > cap:
        raise UniverseTooLarge(f"up to {bound} graphs projected, cap is {cap}")
    regs = [[(lf.key, lf.suffix) for lf in leaves(s.name)] for s in systems]
    out: list[Graph] = []

    def clash(reg, taken):
        for k, t in reg:
            for k2, t2 in taken:
                if k == k2 and comparable(t, t2):
                    return True
        return False

    def rec(start, chosen, taken):
        out.append(Graph(chosen, check=False))
        if len(chosen) >= m:
            return
        for i in range(start, len(systems)):
            if not clash(regs[i], taken):
                rec(i + 1, chosen + [systems[i]], taken + regs[i])

    rec(0, [], [])
    return Universe(out, spec=spec, close=False)


def chain_universe(n: int, alphabet: Sequence[str], keys: Sequence[int] | None = None) -> "Universe":
    """Every subset of the n chain nodes, each present node holding a state."""
    names = chain_names(n, keys)
    graphs = []
    for choice in product([None, *alphabet], repeat=n):
        graphs.append(Graph((System(a, u) for a, u in zip(choice, names) if a is not None),
                            check=False))
    spec = UniverseSpec(keys=tuple(keys or range(1, n + 2)), depth=0, alphabet=tuple(alphabet),
                        max_systems=n, family="chain")
    return Universe(graphs, spec=spec, close=False)


class Universe:
    """An ordered finite set of graphs, closed under taking subgraphs.

    Indexes graphs and caches how restrictions split each of them.
    """

    def __init__(self, graphs: Iterable[Graph], spec: UniverseSpec | None = None, close: bool = True):
        gs = set(graphs)
        if close:
            for g in list(gs):
                for mask in product((0, 1), repeat=len(g)):
                    gs.add(g.sub(s for s, b in zip(g.systems, mask) if b))
        self.graphs = tuple(sorted(gs))
        self.index = {g: i for i, g in enumerate(self.graphs)}
        self.spec = spec
        self._splits = {}
        self._classes = None

    def __len__(self):
        return len(self.graphs)

    def __iter__(self):
        return iter(self.graphs)

    def __contains__(self, g):
        return g in self.index

    def __getitem__(self, i):
        return self.graphs[i]

    def idx(self, g: Graph) -> int:
        try:
            return self.index[g]
        except KeyError:
            raise SupportEscape(g) from None

    def describe(self) -> dict:
        if self.spec is not None:
            d = self.spec.describe()
        else:
            d = {"custom": True}
        d["size"] = len(self)
        return d

    @property
    def name_classes(self) -> np.ndarray:
        """Integer label per graph; equal labels mean V(G) ≏ V(H)."""
        if self._classes is None:
            ids = {}
            self._classes = np.array([ids.setdefault(g.region_set, len(ids)) for g in self.graphs])
        return self._classes

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(g) for g in self.graphs])

    def split(self, chi) -> tuple[np.ndarray, np.ndarray]:
        """Index arrays of ``G_χ`` and ``G_χ̄`` for every graph ``G``."""
        if chi not in self._splits:
            part = np.empty(len(self), dtype=np.int64)
            comp = np.empty(len(self), dtype=np.int64)
            for i, g in enumerate(self.graphs):
                a, b = chi.split(g)
                part[i] = self.idx(a)
                comp[i] = self.idx(b)
            self._splits[chi] = (part, comp)
        return self._splits[chi]

    def fixed(self, chi) -> np.ndarray:
        """Indices of graphs with ``G_χ = G``."""
        part, _ = self.split(chi)
        return np.flatnonzero(part == np.arange(len(self)))
