"""Locality and causality checkers over finite universes.

Each checker works on dense universe matrices.  Where two characterisations
of a property are available both are computed, and a mismatch between them is
reported as ``INTERNAL_DISAGREEMENT`` rather than silently resolved.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import sparse

from .graphs import Universe
from .hilbert import TOL, Operator, OperatorMatrix, is_name_preserving, is_unitary_on
from .reports import (FAIL, INTERNAL_DISAGREEMENT, PASS, CheckResult, PreconditionFailed,
                      verdict)
from .restrict import Compose, Not, Restriction, Union
from .tensor_trace import LocalizedOperator, consistent_preserving, partial_trace


def _mat(a, universe: Universe) -> np.ndarray:
    if isinstance(a, np.ndarray):
        return a
    return a.matrix(universe)


def _pair(universe, i, j, **extra):
    return {"H": str(universe[i]), "G": str(universe[j]), **extra}


def local_rhs(m: np.ndarray, chi: Restriction, universe: Universe) -> np.ndarray:
    """⟨H_χ|A|G_χ⟩⟨H_χ̄|G_χ̄⟩ for every universe pair."""
    part, comp = universe.split(chi)
    return m[np.ix_(part, part)] * (comp[:, None] == comp[None, :])


def is_local(a, chi: Restriction, universe: Universe, tol: float = TOL) -> CheckResult:
    """⟨H|A|G⟩ = ⟨H_χ|A|G_χ⟩⟨H_χ̄|G_χ̄⟩ on every pair of universe graphs."""
    m = _mat(a, universe)
    rhs = local_rhs(m, chi, universe)
    d = np.abs(m - rhs)
    i, j = np.unravel_index(np.argmax(d), d.shape)
    if d[i, j] > tol:
        return verdict("local", False, _pair(universe, i, j, lhs=m[i, j], rhs=rhs[i, j]))
    return verdict("local", True, max_defect=float(d[i, j]))


def _adjoint_matrix(a, universe, m):
    if isinstance(a, np.ndarray):
        return m.conj().T
    adj = a.adjoint().matrix(universe)
    if np.abs(adj - m.conj().T).max(initial=0) > TOL:
        raise PreconditionFailed("adjoint closure", "A† leaves the universe or disagrees with A")
    return adj


def is_strictly_local(a, chi: Restriction, universe: Universe, tol: float = TOL,
                      cross_check: bool = True) -> CheckResult:
    """A, A†A and AA† are all χ-local.

    Cross-checked against "local and consistent-preserving"; a mismatch is
    reported as INTERNAL_DISAGREEMENT.
    """
    m = _mat(a, universe)
    adj = _adjoint_matrix(a, universe, m)
    parts = {"A": m, "AdA": adj @ m, "AAd": m @ adj}
    res = {k: is_local(v, chi, universe, tol) for k, v in parts.items()}
    strict = all(res.values())
    detail = {k: r.status for k, r in res.items()}
    witness = next((dict(r.witness, part=k) for k, r in res.items() if not r), None)
    if cross_check:
        op = a if isinstance(a, Operator) else OperatorMatrix.from_dense(a, universe)
        cp = consistent_preserving(op, chi, universe)
        detail["consistent_preserving"] = cp.status
        other = bool(res["A"]) and bool(cp)
        if other != strict:
            return CheckResult("strictly_local", INTERNAL_DISAGREEMENT, witness or cp.witness, detail)
    return CheckResult("strictly_local", PASS if strict else FAIL, witness, detail)


def dual_locality_check(a, chi: Restriction, universe: Universe, tol: float = TOL) -> CheckResult:
    """(Aρ)_{|∅} = (Aρ_{|χ})_{|∅} for every basis dyad ρ = |G⟩⟨H|.

    Dyads where both sides vanish are skipped: the left side needs H in the
    image of G, the right side needs H_χ in the image of G_χ with matching
    complements.  The remaining ones go through the sparse partial trace.
    """
    op = a if isinstance(a, Operator) else OperatorMatrix.from_dense(a, universe)
    _, comp = universe.split(chi)
    by_comp: dict[int, list[int]] = {}
    for i, c in enumerate(comp):
        by_comp.setdefault(int(c), []).append(i)
    cols = {}

    def col(g):
        if g not in cols:
            cols[g] = op.apply_basis(g)
        return cols[g]

    checked = 0
    for j, g in enumerate(universe.graphs):
        gp = chi(g)
        cand = set(col(g).amps)
        image = col(gp).amps
        for i in by_comp[int(comp[j])]:
            if chi(universe[i]) in image:
                cand.add(universe[i])
        for h in cand:
            rho = OperatorMatrix.dyad(g, h)
            lhs = col(g)[h]                                  # tr(A|G⟩⟨H|)
            rhs = sum((col(k)[b] * x for (k, b), x in partial_trace(rho, chi).entries.items()), 0j)
            checked += 1
            if abs(lhs - rhs) > tol:
                return verdict("dual_local", False, {"G": str(g), "H": str(h), "lhs": lhs, "rhs": rhs},
                               checked=checked)
    return verdict("dual_local", True, checked=checked)


def localized_form_check(a, chi: Restriction, universe: Universe, tol: float = TOL) -> CheckResult:
    """A equals (A restricted to χ-parts) ⊗χ I, built by the structural tensor."""
    m = _mat(a, universe)
    fixed = universe.fixed(chi)
    inner = OperatorMatrix(((universe[i], universe[j]), m[i, j])
                           for j in fixed for i in fixed if abs(m[i, j]) > 1e-14)
    loc = LocalizedOperator(inner, chi).matrix(universe, truncate=True)
    d = np.abs(loc - m)
    i, j = np.unravel_index(np.argmax(d), d.shape)
    if d[i, j] > tol:
        return verdict("localized_form", False, _pair(universe, i, j, lhs=m[i, j], rhs=loc[i, j]))
    return verdict("localized_form", True)


def locality_verdict(a, chi: Restriction, universe: Universe, tol: float = TOL) -> CheckResult:
    """χ-locality by three routes: entry formula, A = A_χ ⊗χ I, and the
    dual condition on traces.  Any disagreement is reported as such."""
    r1 = is_local(a, chi, universe, tol)
    r2 = localized_form_check(a, chi, universe, tol)
    r3 = dual_locality_check(a, chi, universe, tol)
    detail = {"entry": r1.status, "localized_form": r2.status, "dual": r3.status}
    if len({bool(r1), bool(r2), bool(r3)}) > 1:
        return CheckResult("local", INTERNAL_DISAGREEMENT, r1.witness or r2.witness or r3.witness, detail)
    return CheckResult("local", r1.status, r1.witness, detail)


# tomography ------------------------------------------------------------------

@lru_cache(maxsize=64)
def _probe_table(chi: Restriction, universe: Universe, np_only: bool):
    """For each probe E = |b⟩⟨a| ⊗χ I (a, b χ-fixed), the index pairs (G', G)
    with ⟨G|E|G'⟩ = 1."""
    fixed = [universe[i] for i in universe.fixed(chi)]
    part, _ = universe.split(chi)
    members: dict[int, list[int]] = {}
    for j in range(len(universe)):
        members.setdefault(int(part[j]), []).append(j)
    nc = universe.name_classes
    table = []
    for a in fixed:
        ia = universe.idx(a)
        for b in fixed:
            ib = universe.idx(b)
            if np_only and nc[ia] != nc[ib]:
                continue
            probe = LocalizedOperator(OperatorMatrix.dyad(b, a), chi)
            src, dst = [], []
            for j in members.get(ia, ()):
                for g, x in probe.apply_basis(universe[j]):
                    k = universe.index.get(g)
                    if k is not None:
                        src.append(j)
                        dst.append(k)
            if src:
                table.append((ia, ib, np.array(src), np.array(dst)))
    return table


def tomography_reconstruct(rho, chi: Restriction, universe: Universe, np_only: bool = False) -> np.ndarray:
    """Rebuild ρ_{|χ} from the traces tr(E ρ) of χ-local probes."""
    m = _mat(rho, universe)
    out = np.zeros_like(m)
    for ia, ib, src, dst in _probe_table(chi, universe, np_only):
        out[ia, ib] = m[src, dst].sum()
    return out


# unitary extension -----------------------------------------------------------

def sub_universe(universe: Universe, chi: Restriction) -> Universe:
    """The χ-fixed graphs, which again form a subgraph-closed universe."""
    return Universe([universe[i] for i in universe.fixed(chi)], spec=universe.spec, close=False)


def extend_unitary(u: Operator, chi: Restriction, universe: Universe) -> LocalizedOperator:
    """U ⊗χ I for a name-preserving unitary U on the χ-fixed graphs."""
    if not chi.pointwise:
        raise PreconditionFailed("pointwise", str(chi))
    sub = sub_universe(universe, chi)
    ok, w = is_name_preserving(u, sub)
    if not ok:
        raise PreconditionFailed("name-preserving", w)
    ok, err = is_unitary_on(u, sub)
    if not ok:
        raise PreconditionFailed("unitary", err)
    return LocalizedOperator(u, chi)


# causality -------------------------------------------------------------------

def _np_mask(universe):
    nc = universe.name_classes
    return nc[:, None] == nc[None, :]


def is_causal(u, chi: Restriction, zeta: Restriction, universe: Universe,
              np_sector: bool = False, tol: float = TOL) -> CheckResult:
    """(UρU†)_{|ζ} = (Uρ_{|χ}U†)_{|ζ} for every basis dyad ρ = |G⟩⟨H|.

    For fixed ζ-parts a, b the left side's ⟨a|·|b⟩ entry over all dyads is the
    matrix L_ab = P_aᵀ P̄_b, with P_a[c, G] = ⟨a ⊗ζ c|U|G⟩ over ζ-complements c.
    The right side reads L_ab at (G_χ, H_χ) when G_χ̄ = H_χ̄ and is 0 otherwise.
    All b are handled in one product per a.
    With ``np_sector`` only dyads with V(G) ≏ V(H) are compared.
    """
    m = _mat(u, universe)
    n = len(universe)
    pz, cz = universe.split(zeta)
    pc, cc = universe.split(chi)
    cls = np.unique(cz)
    cpos = {int(c): k for k, c in enumerate(cls)}
    fixed = np.unique(pz)
    F = len(fixed)
    T = np.zeros((F, len(cls), n), dtype=complex)
    for k, a in enumerate(fixed):
        rows = np.flatnonzero(pz == a)
        T[k, [cpos[int(cz[r])] for r in rows]] = m[rows]
    Tc = T.conj().transpose(1, 0, 2).reshape(len(cls), -1)
    same_c = cc[:, None] == cc[None, :]
    mask = _np_mask(universe) if np_sector else None
    worst = 0.0
    for ka in range(F):
        # only rows G where L_ab or its χ-read can be nonzero, all b at once
        ga = np.flatnonzero(np.abs(T[ka]).sum(axis=0) > 0)
        if not len(ga):
            continue
        x = np.union1d(ga, np.flatnonzero(np.isin(pc, ga)))
        y = np.union1d(x, pc[x])
        ly = (T[ka][:, y].T @ Tc).reshape(len(y), F, n).transpose(1, 0, 2)
        L = ly[:, np.searchsorted(y, x)]
        R = ly[:, np.searchsorted(y, pc[x])][:, :, pc] * same_c[x]
        d = np.abs(L - R)
        if mask is not None:
            d = d * mask[x]
        k = int(np.argmax(d))
        if d.flat[k] > tol:
            kb, gi, h = np.unravel_index(k, d.shape)
            return verdict("causal", False,
                           {"G": str(universe[x[gi]]), "H": str(universe[h]), "a": str(universe[fixed[ka]]),
                            "b": str(universe[fixed[kb]]), "lhs": L[kb, gi, h], "rhs": R[kb, gi, h]})
        worst = max(worst, float(d.max(initial=0)))
    return verdict("causal", True, max_defect=worst)


def dual_causality_check(u, chi: Restriction, zeta: Restriction, universe: Universe,
                         np_sector: bool = False, tol: float = TOL) -> CheckResult:
    """U†(E ⊗ζ I)U is χ-local for every probe E = |a⟩⟨b| on ζ-fixed graphs
    (with V(a) ≏ V(b) in the name-preserving sector)."""
    if isinstance(u, np.ndarray):
        m = sparse.csr_matrix(u)
    else:
        m = u.sparse_matrix(universe)
    md = m.conj().T.tocsr()
    fixed = [universe[i] for i in universe.fixed(zeta)]
    nc = universe.name_classes
    for a in fixed:
        for b in fixed:
            if np_sector and nc[universe.idx(a)] != nc[universe.idx(b)]:
                continue
            # probe images outside the universe carry no amplitude of U
            e = LocalizedOperator(OperatorMatrix.dyad(a, b), zeta).sparse_matrix(universe, truncate=True)
            conj = (md @ e @ m).toarray()
            r = is_local(conj, chi, universe, tol)
            if not r:
                return verdict("dual_causal", False, {"probe": [str(a), str(b)], **r.witness})
    return verdict("dual_causal", True)


def causality_verdict(u, chi, zeta, universe, np_sector=False, tol=TOL) -> CheckResult:
    r1 = is_causal(u, chi, zeta, universe, np_sector, tol)
    r2 = dual_causality_check(u, chi, zeta, universe, np_sector, tol)
    detail = {"direct": r1.status, "dual": r2.status}
    if bool(r1) != bool(r2):
        return CheckResult("causal", INTERNAL_DISAGREEMENT, r1.witness or r2.witness, detail)
    return CheckResult("causal", r1.status, r1.witness, detail)


def causal_extension(u: Operator, mu: Restriction, chi: Restriction, zeta: Restriction,
                     universe: Universe, np_sector: bool = True):
    """(U ⊗μ I, ξ) with ξ = μχ ∪ μ̄ζ, after checking U is a name-preserving
    χζ-causal unitary on the μ-fixed graphs."""
    ext = extend_unitary(u, mu, universe)
    sub = sub_universe(universe, mu)
    c = is_causal(u, chi, zeta, sub, np_sector)
    if not c:
        raise PreconditionFailed("causality", c.witness)
    xi = Union(Compose(mu, chi), Compose(Not(mu), zeta))
    return ext, xi
