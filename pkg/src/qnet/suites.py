"""Randomised agreement suites between independent characterisations.

Each suite samples operators, runs every route, and counts disagreements.
A disagreement is an implementation bug, never a counterexample.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.stats import unitary_group

from .checks import (causality_verdict, dual_causality_check, dual_locality_check, is_causal,
                     is_local, is_strictly_local, localized_form_check)
from .graphs import EMPTY, Graph, System, Universe
from .hilbert import (FunctionOperator, IDENTITY, Operator, OperatorMatrix, is_name_preserving,
                      is_renaming_invariant, ket)
from .names import Leaf, Renaming, corresponds, negate
from .reports import FAIL, INCONCLUSIVE, INTERNAL_DISAGREEMENT, PASS, jsonable
from .restrict import EMPTY_R, FULL, Restriction, VertexSelect
from .sampling import (consistency_classes, random_cp_operator, random_density, random_np_density,
                       random_operator, rng_for)
from .tensor_trace import LocalizedOperator, localized_dense, partial_trace_tensored


@dataclass
class SuiteReport:
    suite: str
    samples: int = 0
    positives: int = 0
    negatives: int = 0
    disagreements: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    millis: float = 0.0

    @property
    def status(self) -> str:
        if self.disagreements:
            return INTERNAL_DISAGREEMENT
        if self.failures:
            return FAIL
        return PASS if self.samples else INCONCLUSIVE

    def to_json(self, timing: bool = False) -> dict:
        out = {"suite": self.suite, "status": self.status, "samples": self.samples,
               "positives": self.positives, "negatives": self.negatives,
               "disagreements": jsonable(self.disagreements[:5]), "failures": jsonable(self.failures[:5])}
        if timing:
            out["millis"] = round(self.millis, 3)
        return out


# samplers ------------------------------------------------------------------

def sample_operator(universe: Universe, chi: Restriction, rng, kind: int) -> np.ndarray:
    """Dense operator of one of five shapes: arbitrary, localized, localized
    and consistent-preserving, consistent-preserving but unlocalized, and a
    localized operator with one stray entry."""
    fixed = universe.fixed(chi)
    if kind == 0:
        return random_operator(universe, rng, cols=8).dense(universe)
    if kind == 1:
        return localized_dense(random_operator(universe, rng, among=fixed, cols=6).dense(universe), chi, universe)
    if kind == 2:
        return localized_dense(random_cp_operator(universe, chi, rng).dense(universe), chi, universe)
    if kind == 3:
        return random_cp_operator(universe, chi, rng).dense(universe)
    m = localized_dense(random_operator(universe, rng, among=fixed, cols=6).dense(universe), chi, universe)
    i, j = rng.integers(len(universe), size=2)
    if universe.sizes[i] == universe.sizes[j]:
        m[i, j] += 0.5
    return m


def _block_unitary(rng, n):
    return unitary_group.rvs(n, random_state=rng) if n > 1 else np.array([[np.exp(1j * rng.uniform(0, 6.3))]])


def np_block_unitary(universe: Universe, rng, blocks: int = 3) -> np.ndarray:
    """Identity except for random unitary blocks inside single name classes."""
    n = len(universe)
    m = np.eye(n, dtype=complex)
    nc = universe.name_classes
    classes = [np.flatnonzero(nc == c) for c in np.unique(nc)]
    classes = [c for c in classes if len(c) > 1]
    used = set()
    for _ in range(blocks):
        c = classes[int(rng.integers(len(classes)))]
        free = [int(i) for i in c if int(i) not in used]
        if len(free) < 2:
            continue
        pick = rng.choice(free, size=min(len(free), int(rng.integers(2, 4))), replace=False)
        used.update(int(i) for i in pick)
        m[np.ix_(pick, pick)] = _block_unitary(rng, len(pick))
    return m


def localized_unitary(universe: Universe, zeta: Restriction, rng) -> np.ndarray:
    """V ⊗ζ I with V a random unitary on one consistency class of ζ-parts."""
    classes = [c for c in consistency_classes(universe, zeta) if len(c) > 1] or consistency_classes(universe, zeta)
    c = np.asarray(classes[int(rng.integers(len(classes)))])
    inner = np.eye(len(universe), dtype=complex)
    inner[np.ix_(c, c)] = _block_unitary(rng, len(c))
    fixed = universe.fixed(zeta)
    mask = np.zeros(len(universe), dtype=bool)
    mask[fixed] = True
    inner[~mask] = 0
    inner[:, ~mask] = 0
    return localized_dense(inner, zeta, universe)


def sample_unitary(universe: Universe, zeta: Restriction, rng, kind: int) -> np.ndarray:
    if kind == 0:
        return np_block_unitary(universe, rng)
    if kind == 1:
        return localized_unitary(universe, zeta, rng)
    if kind == 2:
        return localized_unitary(universe, zeta, rng) @ np_block_unitary(universe, rng, blocks=1)
    perm = np.arange(len(universe))
    sizes = universe.sizes
    i = int(rng.integers(len(universe)))
    same = np.flatnonzero(sizes == sizes[i])
    j = int(rng.choice(same))
    perm[[i, j]] = perm[[j, i]]
    return np.eye(len(universe), dtype=complex)[perm]


# suites --------------------------------------------------------------------

def locality_suite(universe: Universe, restrictions, n_ops: int = 200, seed: int = 0,
                   catalog=None) -> dict[str, SuiteReport]:
    """Entry formula vs localized form, strict locality vs local and
    consistent-preserving, entry formula vs dual trace condition."""
    rng = rng_for(seed)
    reps = {k: SuiteReport(k) for k in ("localized-form", "strict", "dual")}
    t0 = time.perf_counter()
    samples = []
    for k in range(n_ops):
        chi = restrictions[k % len(restrictions)]
        samples.append((f"random[{k % 5}]", sample_operator(universe, chi, rng, k % 5), chi))
    for (label, op), chi in product((catalog or {}).items(), restrictions):
        samples.append((label, op.matrix(universe), chi))
    for label, m, chi in samples:
        loc = is_local(m, chi, universe)
        routes = {"localized-form": localized_form_check(m, chi, universe),
                  "dual": dual_locality_check(m, chi, universe)}
        for key, r in routes.items():
            rep = reps[key]
            rep.samples += 1
            rep.positives += bool(loc)
            rep.negatives += not loc
            if bool(r) != bool(loc):
                rep.disagreements.append({"op": label, "chi": str(chi), "entry": loc.status, key: r.status,
                                          "witness": loc.witness or r.witness})
        s = is_strictly_local(m, chi, universe)
        rep = reps["strict"]
        rep.samples += 1
        rep.positives += s.status == PASS
        rep.negatives += s.status == FAIL
        if s.status == INTERNAL_DISAGREEMENT:
            rep.disagreements.append({"op": label, "chi": str(chi), **s.detail, "witness": s.witness})
    for r in reps.values():
        r.millis = (time.perf_counter() - t0) * 1000
    return reps


def _small_fixed(universe, restrictions, limit=40):
    return [r for r in restrictions if len(universe.fixed(r)) <= limit]


def causality_suite(universe: Universe, restrictions, n_ops: int = 200, seed: int = 0,
                    catalog=None, fixed_limit: int = 40) -> SuiteReport:
    """Direct causality check vs the dual probe check on random unitaries
    and on catalog operators."""
    rng = rng_for(seed)
    rep = SuiteReport("causal-dual")
    t0 = time.perf_counter()
    zetas = _small_fixed(universe, restrictions, fixed_limit)
    pairs = [(c, z) for c in restrictions for z in zetas]
    samples = []
    for k in range(n_ops):
        chi, zeta = pairs[int(rng.integers(len(pairs)))]
        samples.append((f"random[{k % 4}]", sample_unitary(universe, zeta, rng, k % 4), chi, zeta))
    for (label, op), (chi, zeta) in product((catalog or {}).items(), pairs):
        samples.append((label, op.matrix(universe), chi, zeta))
    for label, m, chi, zeta in samples:
        np_ok, _ = is_name_preserving(OperatorMatrix.from_dense(m, universe), universe)
        for np_sector in ((False, True) if np_ok else (False,)):
            r = causality_verdict(m, chi, zeta, universe, np_sector)
            rep.samples += 1
            rep.positives += r.status == PASS
            rep.negatives += r.status == FAIL
            if r.status == INTERNAL_DISAGREEMENT:
                rep.disagreements.append({"op": label, "chi": str(chi), "zeta": str(zeta),
                                          "np_sector": np_sector, **r.detail, "witness": r.witness})
    rep.millis = (time.perf_counter() - t0) * 1000
    return rep


def traceout_suite(universe: Universe, restrictions, n_states: int = 50, seed: int = 0,
                   tol: float = 1e-10, drift_tol: float = 1e-12) -> SuiteReport:
    """Positivity, trace preservation and name preservation of ρ ↦ ρ_{|χ}
    and of ρ ↦ (ρ_{|χ}) ⊗ζ I."""
    rng = rng_for(seed)
    rep = SuiteReport("traceout")
    t0 = time.perf_counter()
    worst = {"min_eig": 0.0, "drift": 0.0}
    for k in range(n_states):
        np_state = k % 2 == 1
        rho = (random_np_density if np_state else random_density)(universe, rng)
        chi = restrictions[k % len(restrictions)]
        for zeta in (FULL, restrictions[(3 * k + 1) % len(restrictions)]):
            out = partial_trace_tensored(rho, chi, zeta)
            rep.samples += 1
            gs = sorted(out.graphs())
            sub = np.array([[out[(g, h)] for h in gs] for g in gs]) if gs else np.zeros((0, 0))
            lo = float(np.linalg.eigvalsh((sub + sub.conj().T) / 2).min()) if gs else 0.0
            worst["min_eig"] = min(worst["min_eig"], lo)
            if lo < -tol:
                rep.failures.append({"what": "positivity", "chi": str(chi), "zeta": str(zeta), "min_eig": lo})
            if zeta is FULL:
                drift = abs(out.trace() - rho.trace())
                worst["drift"] = max(worst["drift"], drift)
                if drift > drift_tol:
                    rep.failures.append({"what": "trace", "chi": str(chi), "drift": drift})
            if np_state:
                bad = next(((g, h) for (g, h) in out.entries if not corresponds(g.names, h.names)), None)
                if bad:
                    rep.failures.append({"what": "name preservation", "chi": str(chi), "zeta": str(zeta),
                                         "entry": [str(bad[0]), str(bad[1])]})
            rep.positives += 1
    rep.millis = (time.perf_counter() - t0) * 1000
    rep.worst = worst
    return rep


# ±-support -----------------------------------------------------------------

def _flip_state(s: str) -> str:
    return {"0": "1", "1": "0"}.get(s, s)


def _flip(g: Graph):
    return ket(Graph((System(_flip_state(s.state), s.name) for s in g.systems), check=False))


FLIP = FunctionOperator(_flip, _flip, label="flip")


def prop11_families(universe: Universe) -> dict:
    """Operator families that commute with renamings.  Plain operators stand
    for constant families."""
    from .dynamics import Coin, MergeSplit, ParticleStep

    def destroy(v):
        return OperatorMatrix.dyad(EMPTY, Graph([System("0", v)]))

    def create(v):
        return OperatorMatrix.dyad(Graph([System("0", v)]), EMPTY)

    return {
        "identity": IDENTITY,
        "flip": FLIP,
        "flip_v": lambda v: LocalizedOperator(FLIP, VertexSelect(v)),
        "flip_v_overlap": lambda v: LocalizedOperator(FLIP, VertexSelect(v, "overlap")),
        "destroy_v": destroy,
        "create_v": create,
        "M": ParticleStep(),
        "C": Coin(np.pi / 5),
        "H": MergeSplit(None, "1", "0", "0"),
    }


def sample_renamings(universe: Universe, rng, n_random: int = 20):
    keys = sorted({abs(lf.key) for g in universe.graphs for u in g.names for lf in _leaves(u)})
    pool = sorted(set(keys) | {max(keys) + 1, max(keys) + 2})
    out = [Renaming.swap(a, b) for i, a in enumerate(pool) for b in pool[i + 1:]]
    for _ in range(n_random):
        perm = rng.permutation(pool)
        out.append(Renaming(dict(zip(pool, (int(x) for x in perm)))))
    return out


def _leaves(u):
    from .names import leaves
    return leaves(u)


def pm_support_suite(universe: Universe, seed: int = 0, families=None) -> SuiteReport:
    """Every renaming-invariant family: nonzero ⟨H|A_v|G⟩ needs
    V±(G) ∪ {v, ∸v} ≏ V±(H) ∪ {v, ∸v}."""
    from .graphs import pm_support
    rng = rng_for(seed)
    rep = SuiteReport("pm-support")
    t0 = time.perf_counter()
    fams = families or prop11_families(universe)
    vertices = sorted({u for g in universe.graphs for u in g.names})
    renamings = sample_renamings(universe, rng)
    rep.invariant = {}
    for label, fam in fams.items():
        constant = isinstance(fam, Operator)
        ok, wit = is_renaming_invariant(fam, universe, renamings, [None] if constant else vertices)
        rep.invariant[label] = ok
        if not ok:
            continue
        images = {}
        for v in vertices:
            extra = {v, negate(v)}
            a = fam if constant else fam(v)
            for g in universe.graphs:
                if not constant or g not in images:
                    images[g] = a.apply_basis(g).amps
                for h, x in images[g].items():
                    if abs(x) < 1e-12:
                        continue
                    rep.samples += 1
                    if corresponds(pm_support(g) | extra, pm_support(h) | extra):
                        rep.positives += 1
                    else:
                        rep.failures.append({"family": label, "v": str(v), "G": str(g), "H": str(h)})
    rep.millis = (time.perf_counter() - t0) * 1000
    return rep
