"""Sparse vectors and operators over the graph basis.

Every operator exposes its action on basis graphs; matrices over a finite
universe are built from that action with :meth:`Operator.matrix`.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping

import numpy as np
from scipy import sparse

from .graphs import EMPTY, Graph, SupportEscape, Universe, rename_graph
from .names import Renaming, corresponds

PRUNE = 1e-14
TOL = 1e-10


class StateVector:
    """Finite superposition of graphs; amplitudes below 1e-14 are dropped."""

    __slots__ = ("amps",)

    def __init__(self, amps: Mapping[Graph, complex] | Iterable = ()):
        items = amps.items() if isinstance(amps, Mapping) else amps
        out: dict[Graph, complex] = {}
        for g, a in items:
            out[g] = out.get(g, 0) + complex(a)
        self.amps = {g: a for g, a in out.items() if abs(a) > PRUNE}

    @classmethod
    def basis(cls, g: Graph) -> "StateVector":
        return cls({g: 1.0})

    def __getitem__(self, g):
        return self.amps.get(g, 0j)

    def __iter__(self):
        return iter(self.amps.items())

    def __len__(self):
        return len(self.amps)

    def __bool__(self):
        return bool(self.amps)

    def __add__(self, other):
        return StateVector(list(self.amps.items()) + list(other.amps.items()))

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, c):
        return StateVector({g: a * c for g, a in self.amps.items()})

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amps.values())))

    def support(self) -> list[Graph]:
        return sorted(self.amps)

    def dense(self, universe: Universe) -> np.ndarray:
        v = np.zeros(len(universe), dtype=complex)
        for g, a in self.amps.items():
            v[universe.idx(g)] = a
        return v

    @classmethod
    def from_dense(cls, v, universe: Universe) -> "StateVector":
        return cls((universe[i], v[i]) for i in np.flatnonzero(np.abs(v) > PRUNE))

    def close_to(self, other: "StateVector", tol: float = TOL) -> bool:
        return all(abs(a) <= tol for a in (self - other).amps.values())

    def __repr__(self):
        terms = " + ".join(f"({a:.4g})|{g}⟩" for g, a in sorted(self.amps.items()))
        return f"StateVector({terms or '0'})"


def ket(g: Graph) -> StateVector:
    return StateVector.basis(g)


def inner(phi: StateVector, psi: StateVector) -> complex:
    """⟨φ|ψ⟩, antilinear in the first slot."""
    small, big = (phi, psi) if len(phi) <= len(psi) else (psi, phi)
    s = 0j
    for g in small.amps:
        if g in big.amps:
            s += phi.amps[g].conjugate() * psi.amps[g]
    return s


class Operator:
    """Linear map on finite superpositions of graphs."""

    label = "op"

    def apply_basis(self, g: Graph) -> StateVector:
        raise NotImplementedError

    def adjoint(self) -> "Operator":
        raise NotImplementedError

    def apply(self, psi: StateVector) -> StateVector:
        acc: dict[Graph, complex] = {}
        for g, a in psi.amps.items():
            for h, b in self.apply_basis(g).amps.items():
                acc[h] = acc.get(h, 0) + a * b
        return StateVector(acc)

    def __call__(self, psi):
        if isinstance(psi, Graph):
            return self.apply_basis(psi)
        return self.apply(psi)

    def __matmul__(self, other: "Operator") -> "Operator":
        return Product([self, other])

    def __mul__(self, c):
        if isinstance(c, Operator):
            return Product([self, c])
        return LinearCombination([(complex(c), self)])

    def __rmul__(self, c):
        return LinearCombination([(complex(c), self)])

    def __add__(self, other):
        return LinearCombination([(1, self), (1, other)])

    def __sub__(self, other):
        return LinearCombination([(1, self), (-1, other)])

    def matrix(self, universe: Universe, truncate: bool = False) -> np.ndarray:
        """Dense matrix ``M[h, g] = ⟨H|A|G⟩`` over the universe.

        Raises :class:`SupportEscape` when some image leaves the universe,
        unless ``truncate`` is set.
        """
        n = len(universe)
        m = np.zeros((n, n), dtype=complex)
        for j, g in enumerate(universe.graphs):
            for h, a in self.apply_basis(g).amps.items():
                i = universe.index.get(h)
                if i is None:
                    if truncate:
                        continue
                    raise SupportEscape(h, f" (image of {g} under {self.label})")
                m[i, j] += a
        return m

    def sparse_matrix(self, universe: Universe, truncate: bool = False):
        rows, cols, vals = [], [], []
        for j, g in enumerate(universe.graphs):
            for h, a in self.apply_basis(g).amps.items():
                i = universe.index.get(h)
                if i is None:
                    if truncate:
                        continue
                    raise SupportEscape(h, f" (image of {g} under {self.label})")
                rows.append(i)
                cols.append(j)
                vals.append(a)
        n = len(universe)
        return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=complex)

    def __repr__(self):
        return self.label


class Identity(Operator):
    label = "I"

    def apply_basis(self, g):
        return ket(g)

    def adjoint(self):
        return self


IDENTITY = Identity()


class Product(Operator):
    """``ops[0] @ ops[1] @ ...``, applied right to left."""

    def __init__(self, ops):
        flat = []
        for o in ops:
            flat.extend(o.ops if isinstance(o, Product) else [o])
        self.ops = flat
        self.label = "*".join(o.label for o in flat)

    def apply_basis(self, g):
        psi = ket(g)
        for o in reversed(self.ops):
            psi = o.apply(psi)
        return psi

    def adjoint(self):
        return Product([o.adjoint() for o in reversed(self.ops)])


class LinearCombination(Operator):
    def __init__(self, terms):
        self.terms = [(complex(c), o) for c, o in terms]
        self.label = " + ".join(f"{c:.3g}*{o.label}" for c, o in self.terms)

    def apply_basis(self, g):
        acc = StateVector()
        for c, o in self.terms:
            acc = acc + o.apply_basis(g) * c
        return acc

    def adjoint(self):
        return LinearCombination([(c.conjugate(), o.adjoint()) for c, o in self.terms])


class OperatorMatrix(Operator):
    """Operator with finitely many nonzero entries ``⟨ket|A|bra⟩``."""

    def __init__(self, entries: Mapping | Iterable = (), label: str = "A"):
        items = entries.items() if isinstance(entries, Mapping) else entries
        acc: dict[tuple[Graph, Graph], complex] = {}
        for (k, b), a in items:
            acc[(k, b)] = acc.get((k, b), 0) + complex(a)
        self.entries = {kb: a for kb, a in acc.items() if abs(a) > PRUNE}
        self.columns: dict[Graph, dict[Graph, complex]] = {}
        for (k, b), a in self.entries.items():
            self.columns.setdefault(b, {})[k] = a
        self.label = label

    @classmethod
    def dyad(cls, k: Graph, b: Graph, a: complex = 1.0, label="A") -> "OperatorMatrix":
        return cls({(k, b): a}, label=label)

    @classmethod
    def outer(cls, phi: StateVector, psi: StateVector, label="rho") -> "OperatorMatrix":
        """|φ⟩⟨ψ|."""
        return cls((((g, h), a * b.conjugate()) for g, a in phi for h, b in psi), label=label)

    @classmethod
    def from_dense(cls, m, universe: Universe, label="A") -> "OperatorMatrix":
        rows, cols = np.nonzero(np.abs(m) > PRUNE)
        return cls((((universe[i], universe[j]), m[i, j]) for i, j in zip(rows, cols)), label=label)

    @classmethod
    def from_operator(cls, op: Operator, graphs: Iterable[Graph], label=None) -> "OperatorMatrix":
        ent = {}
        for g in graphs:
            for h, a in op.apply_basis(g).amps.items():
                ent[(h, g)] = a
        return cls(ent, label=label or op.label)

    def __getitem__(self, kb):
        return self.entries.get(kb, 0j)

    def __len__(self):
        return len(self.entries)

    def apply_basis(self, g):
        return StateVector(self.columns.get(g, {}))

    def adjoint(self):
        return OperatorMatrix({(b, k): a.conjugate() for (k, b), a in self.entries.items()},
                              label=self.label + "†")

    def graphs(self) -> set[Graph]:
        out = set()
        for k, b in self.entries:
            out.add(k)
            out.add(b)
        return out

    def compose(self, other: "OperatorMatrix") -> "OperatorMatrix":
        """Matrix product ``self · other``."""
        acc = {}
        for (k, b), a in other.entries.items():
            for k2, c in self.columns.get(k, {}).items():
                acc[(k2, b)] = acc.get((k2, b), 0) + c * a
        return OperatorMatrix(acc, label=f"{self.label}{other.label}")

    def plus(self, other: "OperatorMatrix", c: complex = 1) -> "OperatorMatrix":
        return OperatorMatrix(list(self.entries.items()) + [(kb, c * a) for kb, a in other.entries.items()],
                              label=self.label)

    def scaled(self, c: complex) -> "OperatorMatrix":
        return OperatorMatrix({kb: a * c for kb, a in self.entries.items()}, label=self.label)

    def trace(self) -> complex:
        return sum((a for (k, b), a in self.entries.items() if k == b), 0j)

    def dense(self, universe: Universe) -> np.ndarray:
        m = np.zeros((len(universe), len(universe)), dtype=complex)
        for (k, b), a in self.entries.items():
            m[universe.idx(k), universe.idx(b)] += a
        return m

    def close_to(self, other: "OperatorMatrix", tol: float = TOL) -> bool:
        return max_entry_diff(self, other) <= tol

    def is_hermitian(self, tol: float = TOL) -> bool:
        return self.close_to(self.adjoint(), tol)

    def __repr__(self):
        return f"OperatorMatrix({self.label}, {len(self.entries)} entries)"


DensityOperator = OperatorMatrix


def max_entry_diff(a: OperatorMatrix, b: OperatorMatrix) -> float:
    keys = set(a.entries) | set(b.entries)
    return max((abs(a[kb] - b[kb]) for kb in keys), default=0.0)


def full_trace(rho: OperatorMatrix) -> complex:
    return rho.trace()


class FunctionOperator(Operator):
    """Operator given by a basis action and an explicit adjoint action."""

    def __init__(self, fn: Callable[[Graph], StateVector], adj: Callable[[Graph], StateVector] | None = None,
                 label: str = "F"):
        self.fn = fn
        self.adj = adj
        self.label = label

    def apply_basis(self, g):
        return self.fn(g)

    def adjoint(self):
        if self.adj is None:
            raise NotImplementedError(f"{self.label} has no adjoint")
        return FunctionOperator(self.adj, self.fn, self.label + "†")


class RenamingOperator(Operator):
    """Unitary ``|G⟩ ↦ |R(G)⟩`` for a key renaming R."""

    def __init__(self, r: Renaming, label: str | None = None):
        self.r = r
        self.label = label or f"rename{sorted(r.support)}"

    def apply_basis(self, g):
        return ket(rename_graph(self.r, g))

    def adjoint(self):
        return RenamingOperator(self.r.inverse(), self.label + "†")


# predicates over a universe -------------------------------------------------

def operator_equal_on(a: Operator, b: Operator, universe: Universe, tol: float = TOL, truncate=False):
    """Max entry difference of the two operators on the universe, and whether it is within tol."""
    d = np.abs(a.matrix(universe, truncate) - b.matrix(universe, truncate))
    worst = float(d.max()) if d.size else 0.0
    return worst <= tol, worst


def is_unitary_on(u: Operator, universe: Universe, tol: float = TOL) -> tuple[bool, float]:
    """U†U = UU† = I on the universe; images must stay inside it."""
    m = u.matrix(universe)
    eye = np.eye(len(universe))
    err = max(np.abs(m.conj().T @ m - eye).max(), np.abs(m @ m.conj().T - eye).max())
    return bool(err <= tol), float(err)


def is_name_preserving(a: Operator, universe: Universe, tol: float = TOL):
    """Every entry ⟨H|A|G⟩ ≠ 0 has V(G) ≏ V(H).  Returns (ok, witness)."""
    for g in universe.graphs:
        for h, x in a.apply_basis(g).amps.items():
            if abs(x) > tol and not corresponds(g.names, h.names):
                return False, (h, g, x)
    return True, None


def is_renaming_invariant(family, universe: Universe, renamings: Iterable[Renaming],
                          vertices=None, tol: float = TOL):
    """R A_v R† = A_{R(v)} on the universe basis.

    ``family`` maps a name to an operator, or is a single operator used for
    every name.  Returns (ok, witness).
    """
    if vertices is None:
        vertices = sorted({u for g in universe.graphs for u in g.names}) or [None]
    for r in renamings:
        ro = RenamingOperator(r)
        for v in vertices:
            a_v = family(v) if callable(family) and not isinstance(family, Operator) else family
            a_rv = family(r(v) if v is not None else None) if a_v is not family else family
            for g in universe.graphs:
                lhs = ro.apply(a_v.apply_basis(g))
                rhs = a_rv.apply_basis(rename_graph(r, g))
                if not lhs.close_to(rhs, tol):
                    return False, {"renaming": repr(r), "vertex": str(v), "graph": str(g)}
    return True, None


def vacuum() -> StateVector:
    return ket(EMPTY)
