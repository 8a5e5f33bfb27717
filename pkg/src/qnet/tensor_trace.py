"""Restriction-parameterised tensor products and partial traces."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .graphs import Graph, Universe, _region_clash
from .hilbert import IDENTITY, Identity, Operator, OperatorMatrix, StateVector, ket
from .reports import CheckResult, verdict
from .restrict import Restriction


@lru_cache(maxsize=500_000)
def tensor_basis(h: Graph, k: Graph, chi: Restriction) -> Graph | None:
    """|H⟩ ⊗χ |K⟩: the graph G = H ∪ K if it is well-named and splits back
    into exactly (H, K); otherwise None (the zero vector)."""
    if set(h.systems) & set(k.systems):
        return None
    if not h.systems:
        g = k
    elif not k.systems:
        g = h
    else:
        if _region_clash(h.systems + k.systems) is not None:
            return None
        g = Graph(h.systems + k.systems, check=False)
    part, rest = chi.split(g)
    if part == h and rest == k:
        return g
    return None


def split_graph(g: Graph, chi: Restriction) -> tuple[Graph, Graph]:
    return chi.split(g)


def tensor_states(psi: StateVector, phi: StateVector, chi: Restriction) -> StateVector:
    acc: dict[Graph, complex] = {}
    for h, a in psi.amps.items():
        for k, b in phi.amps.items():
            g = tensor_basis(h, k, chi)
            if g is not None:
                acc[g] = acc.get(g, 0) + a * b
    return StateVector(acc)


def partial_trace(rho: OperatorMatrix, chi: Restriction) -> OperatorMatrix:
    """(|G⟩⟨H|)_{|χ} = |G_χ⟩⟨H_χ| ⟨H_χ̄|G_χ̄⟩, extended linearly."""
    acc = {}
    for (g, h), a in rho.entries.items():
        gp, gc = chi.split(g)
        hp, hc = chi.split(h)
        if gc == hc:
            acc[(gp, hp)] = acc.get((gp, hp), 0) + a
    return OperatorMatrix(acc, label=f"{rho.label}|{chi}")


def partial_trace_tensored(rho: OperatorMatrix, chi: Restriction, zeta: Restriction) -> OperatorMatrix:
    """Trace out χ̄ inside the ζ-part only, then glue the ζ̄-part back on."""
    acc = {}
    for (g, h), a in rho.entries.items():
        gz, gzc = zeta.split(g)
        hz, hzc = zeta.split(h)
        gp, gc = chi.split(gz)
        hp, hc = chi.split(hz)
        if gc != hc:
            continue
        k = tensor_basis(gp, gzc, zeta)
        b = tensor_basis(hp, hzc, zeta)
        if k is not None and b is not None:
            acc[(k, b)] = acc.get((k, b), 0) + a
    return OperatorMatrix(acc, label=f"{rho.label}|{chi}(x){zeta}")


class TensorOperator(Operator):
    """A ⊗χ B acting as A on the χ-part and B on the rest."""

    def __init__(self, a: Operator, b: Operator, chi: Restriction):
        self.a, self.b, self.chi = a, b, chi
        self.label = f"({a.label}(x)[{chi}]{b.label})"

    def apply_basis(self, g):
        part, rest = self.chi.split(g)
        left = self.a.apply_basis(part)
        right = ket(rest) if isinstance(self.b, Identity) else self.b.apply_basis(rest)
        return tensor_states(left, right, self.chi)

    def adjoint(self):
        return type(self)._make(self.a.adjoint(), self.b.adjoint(), self.chi)

    @staticmethod
    def _make(a, b, chi):
        if isinstance(b, Identity):
            return LocalizedOperator(a, chi)
        return TensorOperator(a, b, chi)


class LocalizedOperator(TensorOperator):
    """A ⊗χ I."""

    def __init__(self, inner: Operator, chi: Restriction):
        super().__init__(inner, IDENTITY, chi)
        self.inner = inner
        self.label = f"({inner.label}(x)[{chi}]I)"


def tensor_operators(a: OperatorMatrix, b, chi: Restriction):
    """A ⊗χ B by the bilinear rule on entries.

    With the identity on the right this returns the structural
    :class:`LocalizedOperator`, since I has infinitely many entries.
    """
    if isinstance(b, Identity):
        return LocalizedOperator(a, chi)
    acc = {}
    for (k1, b1), x in a.entries.items():
        for (k2, b2), y in b.entries.items():
            k = tensor_basis(k1, k2, chi)
            if k is None:
                continue
            br = tensor_basis(b1, b2, chi)
            if br is None:
                continue
            acc[(k, br)] = acc.get((k, br), 0) + x * y
    return OperatorMatrix(acc, label=f"({a.label}(x)[{chi}]{b.label})")


def consistency(x, y, chi: Restriction) -> CheckResult:
    """Every pair of basis terms tensors to something nonzero."""
    if isinstance(x, StateVector):
        for h, _ in x:
            for k, _ in y:
                if tensor_basis(h, k, chi) is None:
                    return verdict("consistent", False, {"left": str(h), "right": str(k)})
        return verdict("consistent", True)
    for (g, h) in x.entries:
        for (g2, h2) in y.entries:
            if tensor_basis(g, g2, chi) is None or tensor_basis(h, h2, chi) is None:
                return verdict("consistent", False, {"left": [str(g), str(h)], "right": [str(g2), str(h2)]})
    return verdict("consistent", True)


def consistent_preserving(a: Operator, chi: Restriction, universe: Universe, side: str = "left") -> CheckResult:
    """⟨H|A|G_χ⟩ ≠ 0 ⇒ |H⟩ ⊗χ |G_χ̄⟩ ≠ 0, for A and for A†, over the universe.

    ``side='right'`` is the mirror condition for an operator acting on the
    complement: ⟨H|B|G_χ̄⟩ ≠ 0 ⇒ |G_χ⟩ ⊗χ |H⟩ ≠ 0.
    """
    for op in (a, a.adjoint()):
        for g in universe.graphs:
            part, rest = chi.split(g)
            src = part if side == "left" else rest
            for h, _ in op.apply_basis(src):
                t = tensor_basis(h, rest, chi) if side == "left" else tensor_basis(part, h, chi)
                if t is None:
                    return verdict("consistent_preserving", False,
                                   {"G": str(g), "H": str(h), "adjoint": op is not a})
    return verdict("consistent_preserving", True)


# dense fast paths over a universe ---------------------------------------------

def dense_partial_trace(rho: np.ndarray, chi: Restriction, universe: Universe) -> np.ndarray:
    """Same map as :func:`partial_trace` on a dense universe matrix."""
    part, comp = universe.split(chi)
    mask = comp[:, None] == comp[None, :]
    out = np.zeros_like(rho)
    ii, jj = np.nonzero(mask & (rho != 0))
    np.add.at(out, (part[ii], part[jj]), rho[ii, jj])
    return out


def localized_dense(inner: np.ndarray, chi: Restriction, universe: Universe) -> np.ndarray:
    """Matrix of A ⊗χ I from the entry formula ⟨H_χ|A|G_χ⟩⟨H_χ̄|G_χ̄⟩, where
    ``inner`` is A's universe matrix."""
    part, comp = universe.split(chi)
    return inner[np.ix_(part, part)] * (comp[:, None] == comp[None, :])
