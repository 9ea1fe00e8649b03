"""Decision procedures for tau_n-tilting, tau_{n,m}-tilting and n-tilting modules,
and the harness of cross-checks between the module and complex routes.

Every check returns a :class:`Verdict`.  Statements quantifying over a whole
class of modules are evaluated on an explicit probe set and say so in the
verdict's ``probe`` field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import complexes as cx
from .algebra import BasedAlgebra, QuotientAlgebra, quotient_algebra
from .decompose import algebra_rank, basic_summands, decompose, in_add, isomorphic, locality, rank_of
from .homology import PreconditionViolated, ext, in_perp_tau_n, is_tau_n_rigid, pd_up_to, perp_violation, tau_n
from .modules import (
    Module,
    ModuleMap,
    annihilator,
    cokernel,
    hom_basis,
    in_gen_n,
    inflate,
    injective,
    is_faithful,
    is_sincere,
    kernel,
    left_approximation,
    regular_module,
    restrict,
    right_approximation,
    span_rank,
)
from .verdict import Outcome, Verdict, all_of


class ConsistencyViolation(AssertionError):
    """Two computations that theory forces to agree did not: an implementation bug."""


class FactorizationCheckFailed(RuntimeError):
    """A constructed preenvelope failed its post-hoc factorization check."""


def _label(X: Module) -> str:
    return X.name or "[" + ",".join(map(str, X.dims)) + "]"


# ---------------------------------------------------------------------------
# tau_n-tilting and n-tilting
# ---------------------------------------------------------------------------


def is_tau_n_tilting(M: Module, n: int) -> Verdict:
    """Decide whether P_{>=-n}(M) is silting.

    Cheap necessary conditions (sincerity and rk(M) = rk(A)) run first; the
    silting test then searches an add-coresolution of A[0] of length <= n,
    which is exact for truncated resolutions.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    A = M.algebra
    rk, rkA = rank_of(M), algebra_rank(A)
    failed = [c for c, ok in (("sincere", is_sincere(M)), ("rank", rk == rkA)) if not ok]
    if failed:
        return Verdict.fails("module:necessary", condition=",".join(failed), dims=list(M.dims), rank=rk, expected_rank=rkA)
    v = cx.is_silting(cx.from_resolution(M, n), n)
    return Verdict(v.outcome, dict(v.witness, n=n, rank=rk), ("module:necessary",) + v.provenance, v.bound)


@dataclass
class Coresolution:
    """0 -> X -> M_0 -> ... -> M_d -> 0 built from minimal left add(M)-approximations.

    ``maps[i]`` is the approximation of the i-th cokernel; ``terms[i]`` its target.
    """

    complete: bool
    terms: list[Module]
    maps: list[ModuleMap]
    failure: str | None = None

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def shape(self) -> list[list[int]]:
        return [list(T.dims) for T in self.terms]


def add_coresolution(X: Module, M: Module, bound: int) -> Coresolution:
    """Coresolve X by add(M) with minimal left approximations, at most ``bound`` + 1 terms.

    Each approximation must be injective; the chain stops as soon as the
    current cokernel lies in add(M).
    """
    gens = basic_summands(M)
    terms: list[Module] = []
    maps: list[ModuleMap] = []
    cur = X
    for i in range(bound + 1):
        if cur.dim == 0:
            return Coresolution(True, terms, maps)
        if in_add(cur, M):
            terms.append(cur)
            return Coresolution(True, terms, maps)
        if i == bound:
            break
        a = left_approximation(cur, gens)
        if not a.is_injective():
            return Coresolution(False, terms, maps, failure=f"approximation {i} is not injective")
        maps.append(a)
        terms.append(a.target)
        cur, _ = cokernel(a)
    return Coresolution(False, terms, maps, failure=f"no add(M)-coresolution of length <= {bound}")


def is_n_tilting(M: Module, n: int) -> Verdict:
    """Miyashita n-tilting: pd M <= n, Ext^i(M, M) = 0 for 1 <= i <= n, and A has an
    add(M)-coresolution of length <= n.

    With the first two conditions in force the canonical chain of minimal
    left approximations finds such a coresolution whenever one exists.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    pd = pd_up_to(M, n)
    if not pd.finite:
        return Verdict.fails("module", condition="pd", bound=n, detail=pd.to_json())
    for i in range(1, n + 1):
        e = ext(M, M, i)
        if e:
            return Verdict.fails("module", condition="self-ext", degree=i, dim=e)
    cores = add_coresolution(regular_module(M.algebra), M, n)
    if not cores.complete:
        return Verdict.fails("module", condition="coresolution", detail=cores.failure, partial=cores.shape())
    return Verdict.holds("module", pd=pd.value, coresolution=cores.shape())


# ---------------------------------------------------------------------------
# tau_{n,m}-tilting
# ---------------------------------------------------------------------------


def gamma(M: Module) -> QuotientAlgebra:
    """A / ann(M), cached on the module."""
    hit = M.cache.get("gamma")
    if hit is None:
        hit = M.cache["gamma"] = quotient_algebra(M.algebra, annihilator(M), name=f"Gamma({M.name})")
    return hit


@dataclass
class TauNMReport:
    """All sub-verdicts of a tau_{n,m}-tilting decision."""

    module: str
    n: int
    m: int
    outcome: Verdict
    tau_n_rigid: Verdict
    tau_n_tilting: Verdict
    sincere: bool
    rank_equal: bool
    annihilator: list[str]
    gamma: dict
    tau_m_rigid_gamma: Verdict
    m_tilting_gamma: Verdict
    consistency: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "module": self.module,
            "n": self.n,
            "m": self.m,
            "outcome": self.outcome.to_json(),
            "tau_n_rigid": self.tau_n_rigid.to_json(),
            "tau_n_tilting": self.tau_n_tilting.to_json(),
            "sincere": self.sincere,
            "rank_equal": self.rank_equal,
            "annihilator": self.annihilator,
            "gamma": self.gamma,
            "tau_m_rigid_gamma": self.tau_m_rigid_gamma.to_json(),
            "m_tilting_gamma": self.m_tilting_gamma.to_json(),
            "consistency": self.consistency,
        }


def is_tau_nm_tilting(M: Module, n: int, m: int) -> TauNMReport:
    """Decide tau_{n,m}-tilting: tau_n-tilting over A and tau_m-rigid over A / ann(M).

    Also runs the m-tilting test over the quotient, which a positive answer
    forces, and raises :class:`ConsistencyViolation` if it disagrees.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be at least 1")
    A = M.algebra
    rig = is_tau_n_rigid(M, n)
    til = is_tau_n_tilting(M, n)
    sinc = is_sincere(M)
    rk_eq = rank_of(M) == algebra_rank(A)
    ann = annihilator(M)
    G = gamma(M)
    R = restrict(M, G)
    rig_g = is_tau_n_rigid(R, m)
    mt_g = is_n_tilting(R, m)
    outcome = all_of("tau_nm", {"tau_n_tilting": til, "tau_m_rigid_gamma": rig_g})
    notes = []
    if til.holds_:
        if not (sinc and rk_eq):
            raise ConsistencyViolation("tau_n-tilting module is not sincere or has the wrong rank")
        notes.append("tau_n-tilting => sincere and rk(M) = rk(A)")
        if rig.fails_:
            raise ConsistencyViolation("tau_n-tilting module is not tau_n-rigid")
    if outcome.holds_:
        if not mt_g.holds_:
            raise ConsistencyViolation("tau_{n,m}-tilting module is not m-tilting over A/ann(M)")
        notes.append("tau_{n,m}-tilting => m-tilting over A/ann(M)")
    summary = {"dim": G.dim, "vertices": list(G.vertices), "basis": list(G.labels)}
    return TauNMReport(
        _label(M), n, m, outcome, rig, til, sinc, rk_eq,
        [A.element_str(row) for row in ann], summary, rig_g, mt_g, notes,
    )


# ---------------------------------------------------------------------------
# Cross-route and structural checks
# ---------------------------------------------------------------------------


def _module_shifts(M: Module, N: Module, n: int) -> list[int]:
    """Shifts j in 1..n whose module-side obstruction is nonzero:
    Ext^j(M, N) for j < n and Hom(N, tau_n M) for j = n."""
    out = [j for j in range(1, n) if ext(M, N, j)]
    if hom_basis(N, tau_n(M, n)):
        out.append(n)
    return out


def check_perp_routes(M: Module, N: Module, n: int) -> Verdict:
    """P_{>=-n}(N) is right perpendicular to P_{>=-n}(M) iff N lies in M^{perp tau_n}.

    Both sides are computed independently; the verdict Holds iff they agree.
    The witness lists, per side, the shifts carrying a nonzero obstruction.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    module_side = in_perp_tau_n(N, M, n)
    X, Y = cx.from_resolution(M, n), cx.from_resolution(N, n)
    complex_shifts = [j for j in range(1, n + 1) if cx.hom_homotopy(X, Y, j).dim]
    mod_shifts = _module_shifts(M, N, n)
    witness = dict(
        n=n, module_route=module_side, complex_route=not complex_shifts,
        module_shifts=mod_shifts, complex_shifts=complex_shifts,
    )
    if module_side == (not complex_shifts):
        return Verdict.holds("module+complex", **witness)
    return Verdict.fails("module+complex", **witness)


def check_ext_bridge(M: Module, N: Module, n: int) -> Verdict:
    """dim Hom_K(P_{>=-n} M, P_{>=-n} N [j]) = 0 iff Ext^j(M, N) = 0, for 1 <= j < n."""
    X, Y = cx.from_resolution(M, n), cx.from_resolution(N, n)
    rows = []
    for j in range(1, n):
        hk = cx.hom_homotopy(X, Y, j).dim
        e = ext(M, N, j)
        rows.append([j, hk, e])
        if (hk == 0) != (e == 0):
            return Verdict.fails("module+complex", degree=j, hom_k=hk, ext=e)
    return Verdict.holds("module+complex", rows=rows)


def check_route_agreement(M: Module, n: int) -> Verdict:
    """Module-route tau_n-rigidity agrees with complex-route presilting of P_{>=-n}(M)."""
    a = is_tau_n_rigid(M, n)
    b = cx.is_presilting(cx.from_resolution(M, n))
    w = dict(n=n, module=a.outcome.value, complex=b.outcome.value)
    return Verdict.holds("module+complex", **w) if a.outcome == b.outcome else Verdict.fails("module+complex", **w)


def check_support_disjoint(M: Module, n: int) -> Verdict:
    """For tau_n-rigid M, P^0(M) and P^{-n}(M) share no indecomposable summand."""
    if not is_tau_n_rigid(M, n).holds_:
        raise PreconditionViolated(f"module is not tau_{n}-rigid")
    P = cx.from_resolution(M, n)
    top, bottom = set(P.term(0)), set(P.term(-n))
    common = sorted(top & bottom)
    if common:
        return Verdict.fails("module", common=[P.algebra.vertices[v] for v in common])
    return Verdict.holds("module", top=sorted(top), bottom=sorted(bottom))


def check_rank_bridge(M: Module, n: int) -> Verdict:
    """An indecomposable M has P_{>=-n}(M) indecomposable in K^b(proj A): End_K is local."""
    from .decompose import MatrixAlgebra, is_indecomposable

    if is_indecomposable(M) is not True:
        raise PreconditionViolated("module is not certified indecomposable")
    P = cx.minimal_model(cx.from_resolution(M, n)).complex
    hs = cx.hom_space(P, P)
    f = M.field
    # End_K(P) = Z / B; represent it by left multiplication on a complement of B in Z
    classes = hs.classes()
    if not classes:
        return Verdict.fails("complex", condition="zero complex")
    basis = np.concatenate([hs.reps, hs.B], axis=1)
    mats = []
    for g in classes:
        cols = []
        for h in classes:
            sol = f.solve(basis, hs.vector(g.after(h)))
            cols.append(sol[: hs.dim])
        mats.append(np.stack(cols, axis=1))
    res = locality(MatrixAlgebra(f, mats))
    if res.local is True:
        return Verdict.holds("complex", end_dim=hs.dim)
    if res.local is False:
        return Verdict.fails("complex", end_dim=hs.dim)
    return Verdict.inconclusive("complex", "locality", end_dim=hs.dim)


def check_annihilator_rank(M: Module) -> Verdict:
    """For sincere M: ann(M) lies in rad(A) and rk(A) = rk(A / ann(M))."""
    if not is_sincere(M):
        raise PreconditionViolated("module is not sincere")
    A = M.algebra
    ann = annihilator(M)
    idem = list(A.idempotents)
    inside = not np.any(ann[:, idem] != 0) if ann.size else True
    G = gamma(M)
    rk, rkG = algebra_rank(A), algebra_rank(G)
    w = dict(ann_dim=int(ann.shape[0]), in_radical=inside, rank=rk, rank_gamma=rkG)
    return Verdict.holds("module", **w) if inside and rk == rkG else Verdict.fails("module", **w)


def check_rigidity_biconditional(M: Module, n: int) -> Verdict:
    """For n = 1, 2: tau_{n,n}-tilting iff sincere, tau_n-rigid and n-tilting over A / ann(M)."""
    if n not in (1, 2):
        raise ValueError("the biconditional is established for n = 1, 2 only")
    rep = is_tau_nm_tilting(M, n, n)
    rhs_parts = [rep.sincere, rep.tau_n_rigid.holds_, rep.m_tilting_gamma.holds_]
    lhs = rep.outcome.holds_
    rhs = all(rhs_parts)
    w = dict(n=n, tau_nn_tilting=lhs, sincere=rhs_parts[0], tau_n_rigid=rhs_parts[1], n_tilting_gamma=rhs_parts[2])
    return Verdict.holds("module+complex", **w) if lhs == rhs else Verdict.fails("module+complex", **w)


def check_tau1_implies_tau11(M: Module) -> Verdict:
    """Every tau_1-tilting module is tau_{1,1}-tilting."""
    if not is_tau_n_tilting(M, 1).holds_:
        raise PreconditionViolated("module is not tau_1-tilting")
    rep = is_tau_nm_tilting(M, 1, 1)
    return Verdict(rep.outcome.outcome, {"report": rep.outcome.to_json()}, ("module+complex",))


# ---------------------------------------------------------------------------
# The n-tilting equivalences for a tau_n-tilting module
# ---------------------------------------------------------------------------


def gen_sample(M: Module) -> list[Module]:
    """A few modules of gen(M): M, its top, and the images of a basis of End(M)."""
    from .modules import image, top

    out = [M, top(M)]
    for h in hom_basis(M, M):
        I, _ = image(ModuleMap(M, M, h))
        if I.dim:
            out.append(I)
    return out


def check_tilting_equivalences(M: Module, n: int, depth: int = 2) -> Verdict:
    """Evaluate the equivalent conditions for a tau_n-tilting M to be n-tilting.

    Clauses: (a) n-tilting; (b) add(M)-coresolution of A within n; (c) faithful;
    (d) Hom(M, tau_{n+i} M) = 0 for 0 <= i <= depth (a finite surrogate of the
    condition for all i); (e) Hom(M, tau_{n+1} M) = 0, which is equivalent to
    M in ^{perp_{n+1}} gen(M); (f) tau_{n+1}-rigid; (g) pd M <= n;
    (h) Ext^{n+1}(M, M) = 0.  Holds iff all clauses share one truth value.

    Raises:
        PreconditionViolated: if M is not tau_n-tilting.
    """
    if not is_tau_n_tilting(M, n).holds_:
        raise PreconditionViolated(f"module is not tau_{n}-tilting")
    clauses = {
        "a": is_n_tilting(M, n).holds_,
        "b": add_coresolution(regular_module(M.algebra), M, n).complete,
        "c": is_faithful(M),
        "d": all(not hom_basis(M, tau_n(M, n + i)) for i in range(depth + 1)),
        "e": not hom_basis(M, tau_n(M, n + 1)),
        "f": is_tau_n_rigid(M, n + 1).holds_,
        "g": pd_up_to(M, n).finite,
        "h": ext(M, M, n + 1) == 0,
    }
    sample = gen_sample(M)
    sample_ext = [ext(M, X, n + 1) for X in sample]
    if clauses["e"] and any(sample_ext):
        raise ConsistencyViolation("Hom(M, tau_{n+1} M) = 0 but Ext^{n+1}(M, X) != 0 on gen(M)")
    values = set(clauses.values())
    w = dict(n=n, clauses=clauses, gen_sample_ext=sample_ext, surrogate_depth=depth)
    v = Verdict.holds("module+complex", **w) if len(values) == 1 else Verdict.fails("module+complex", **w)
    v.probe = [_label(X) for X in sample]
    return v


def check_perp_equals_gen(M: Module, n: int, testset: Sequence[Module]) -> Verdict:
    """M^{perp tau_n} = gen_n(M) on a finite test set (tau_n-tilting M)."""
    if not is_tau_n_tilting(M, n).holds_:
        raise PreconditionViolated(f"module is not tau_{n}-tilting")
    gens = basic_summands(M)
    rows = []
    bad = []
    for X in testset:
        perp = in_perp_tau_n(X, M, n)
        gen = in_gen_n(X, M, n, gens=gens).holds_
        rows.append([_label(X), perp, gen])
        if perp != gen:
            bad.append(_label(X))
    w = dict(n=n, rows=rows)
    v = Verdict.fails("module", mismatch=bad, **w) if bad else Verdict.holds("module", **w)
    v.probe = [_label(X) for X in testset]
    return v


# ---------------------------------------------------------------------------
# Compatible classes
# ---------------------------------------------------------------------------


def gamma_injectives(M: Module) -> list[Module]:
    """The indecomposable injective A/ann(M)-modules, viewed as A-modules."""
    G = gamma(M)
    return [inflate(injective(G, v), G).with_name(f"I_G({G.vertices[v]})") for v in range(G.num_vertices)]


def _annihilated_by(X: Module, ann: np.ndarray) -> bool:
    return all(not np.any(X.act(a) != 0) for a in ann)


def check_compatible_class(M: Module, n: int, m: int, probe: Sequence[Module]) -> Verdict:
    """Conditions (C1)-(C4) of a tau_{n,m}-compatible class for add(M), on a probe set.

    (C1) M sincere; for X in perp, the minimal right add(M)-approximation is onto
         with kernel in perp.
    (C2) injective A/ann(M)-modules lie in perp; members of perp are annihilated by ann(M).
    (C3) each probe module annihilated by ann(M) has a left approximation by the
         known members of perp which is a monomorphism into perp; every map to a
         perp member of the probe factors through it.
    (C4) pd of M over A/ann(M) is at most m.

    Class-level statements are evaluated on the probe; a Holds means Holds-on-probe.
    """
    if not n >= m >= 1:
        raise ValueError("requires n >= m >= 1")
    labels = [_label(X) for X in probe]
    gens = basic_summands(M)
    perp = [X for X in probe if X.dim and in_perp_tau_n(X, M, n)]
    parts: dict[str, Verdict] = {}
    if not is_sincere(M):
        v = Verdict.fails("module", condition="C1", reason="not sincere", dims=list(M.dims))
        v.probe = labels
        return v
    c1 = []
    for X in perp:
        p = right_approximation(X, gens)
        K, _ = kernel(p)
        if not p.is_surjective() or (K.dim and not in_perp_tau_n(K, M, n)):
            c1.append(_label(X))
    parts["C1"] = Verdict.fails("module", bad=c1) if c1 else Verdict.holds("module", checked=len(perp))
    ann = annihilator(M)
    injs = gamma_injectives(M)
    c2_inj = [_label(I) for I in injs if not in_perp_tau_n(I, M, n)]
    c2_mod = [_label(X) for X in perp if not _annihilated_by(X, ann)]
    parts["C2"] = (
        Verdict.fails("module", injectives_outside=c2_inj, not_gamma_modules=c2_mod)
        if c2_inj or c2_mod
        else Verdict.holds("module", injectives=len(injs))
    )
    known = basic_summands(M) + injs + perp
    f = M.field
    c3 = []
    for X in probe:
        if not X.dim or not _annihilated_by(X, ann):
            continue
        e = left_approximation(X, known)
        if not e.is_injective():
            c3.append(_label(X))
            continue
        for Y in perp:
            H = hom_basis(X, Y)
            through = [f.matmul(u, e.matrix) for u in hom_basis(e.target, Y)]
            if H and span_rank(f, through + H) != span_rank(f, through):
                raise FactorizationCheckFailed(f"map {_label(X)} -> {_label(Y)} does not factor")
    parts["C3"] = Verdict.fails("module", not_mono=c3) if c3 else Verdict.holds("module")
    R = restrict(M, gamma(M))
    pd = pd_up_to(R, m)
    parts["C4"] = Verdict.holds("module", pd=pd.value) if pd.finite else Verdict.fails("module", detail=pd.to_json())
    v = all_of("compatible-class", parts)
    v.probe = labels
    return v


# ---------------------------------------------------------------------------
# Relative preenvelopes through the complex route
# ---------------------------------------------------------------------------


@dataclass
class PerpTriangle:
    """g: P_{>=-n}(N) -> P with P right perpendicular to P_{>=-n}(M); the cone of g
    is built from shifts T[-i], i > 0, of the silting complex."""

    g: cx.ChainMap
    target: cx.ProjComplex
    steps: list[str]


def perp_triangle(N: Module, M: Module, n: int) -> PerpTriangle:
    """Kill Hom_K(T[-i], -) for i = n, ..., 1 by right approximations and cones."""
    T = cx.from_resolution(M, n)
    Ts = T.summand_list()
    Z = cx.from_resolution(N, n)
    g = cx.identity_map(Z)
    cur = Z
    steps = []
    for i in range(max(cur.hi - T.lo, 0), 0, -1):
        a = cx.add_precover(cur, [cx.shift(S, -i) for S in Ts])
        if a.source.is_zero_complex():
            continue
        inc = cx.cone_inclusion(a)
        mm = cx.minimal_model(inc.target)
        g = mm.pi.after(inc.after(g))
        cur = mm.complex
        steps.append(f"T[-{i}]: {a.source.shape()}")
    for j in range(1, max(cur.hi - T.lo, 0) + 1):
        if cx.hom_homotopy(T, cur, j).dim:
            raise FactorizationCheckFailed(f"target is not perpendicular (shift {j})")
    return PerpTriangle(g, cur, steps)


def _h0_map(N: Module, tri: PerpTriangle, n: int) -> ModuleMap:
    """N -> H^0(P) induced by g, read through the augmentation of N's resolution."""
    from .homology import min_resolution

    A = N.algebra
    f = A.field
    P = tri.target
    H, kin, q = cx._cohomology_data(P, 0)
    res = min_resolution(N, n)
    lift = f.solve(res.augmentation, f.eye(N.dim))
    if lift is None:
        raise FactorizationCheckFailed("augmentation is not onto")
    g0 = cx.pm.to_module_matrix(A, tri.g.at(0), tri.g.source.term(0), P.term(0))
    coords = f.solve(kin.matrix, f.matmul(g0, lift))
    if coords is None:
        raise FactorizationCheckFailed("image is not a cycle")
    return ModuleMap(N, H, f.matmul(q.matrix, coords))


def relative_preenvelope(N: Module, M: Module, n: int, testset: Sequence[Module] = ()) -> ModuleMap:
    """N -> H^0(P) through which every map from N into M^{perp tau_n} factors.

    Args:
        N: the module to approximate.
        M: a tau_n-tilting module.
        n: the truncation degree.
        testset: modules of M^{perp tau_n} used for the post-hoc factorization check.

    Raises:
        PreconditionViolated: if M is not tau_n-tilting.
        FactorizationCheckFailed: if some map N -> K with K in ``testset`` does not factor.
    """
    if not is_tau_n_tilting(M, n).holds_:
        raise PreconditionViolated(f"module is not tau_{n}-tilting")
    tri = perp_triangle(N, M, n)
    phi = _h0_map(N, tri, n)
    f = N.field
    for K in testset:
        if not in_perp_tau_n(K, M, n):
            raise PreconditionViolated(f"{_label(K)} is not in the perpendicular class")
        H = hom_basis(N, K)
        through = [f.matmul(u, phi.matrix) for u in hom_basis(phi.target, K)]
        if H and span_rank(f, through + H) != span_rank(f, through):
            raise FactorizationCheckFailed(f"a map {_label(N)} -> {_label(K)} does not factor")
    return phi


# ---------------------------------------------------------------------------
# Finitistic dimension consistency
# ---------------------------------------------------------------------------


def check_findim_bound(M: Module, n: int, m: int, dim_bound: int, pd_bound: int | None = None) -> Verdict:
    """fin.dim(A) <= fin.dim(End(M)^op) + pd(M) + m, as an oracle consistency check.

    Both finitistic dimensions are lower estimates from enumerating
    indecomposables of total dimension <= ``dim_bound``, so a Holds is
    consistency, not proof, and a violated estimate is only Inconclusive.
    """
    from .linalg import PrimeField
    from .oracle import EnumerationConfig, end_op_algebra, findim_lower_bound

    rep = is_tau_nm_tilting(M, n, m)
    if not rep.outcome.holds_:
        raise PreconditionViolated(f"module is not tau_{{{n},{m}}}-tilting")
    A = M.algebra
    pd_bound = pd_bound if pd_bound is not None else A.dim + n
    pd = pd_up_to(M, pd_bound)
    if not pd.finite:
        if pd.periodicity:
            return Verdict.holds("oracle", vacuous=True, pd=pd.to_json())
        return Verdict.inconclusive("oracle", pd_bound, reason="pd(M) undecided", pd=pd.to_json())
    if not isinstance(A.field, PrimeField):
        return Verdict.inconclusive("oracle", dim_bound, reason="enumeration needs a finite field")
    left = findim_lower_bound(EnumerationConfig(A, dim_bound), pd_bound)
    E = end_op_algebra(restrict(M, gamma(M)))
    right_fd = findim_lower_bound(EnumerationConfig(E, dim_bound), pd_bound)
    rhs = right_fd + pd.value + m
    w = dict(findim_lower=left, end_findim_lower=right_fd, pd=pd.value, m=m, rhs=rhs, dim_bound=dim_bound)
    if left <= rhs:
        return Verdict.holds("oracle", **w)
    return Verdict.inconclusive("oracle", dim_bound, reason="estimates exceed the bound", **w)


def check_findim_quotient(A: BasedAlgebra, ideal: np.ndarray, dim_bound: int, pd_bound: int) -> Verdict:
    """fin.dim(A) <= pd_A(A/J) + fin.dim(A/J) for a nilpotent ideal J, via oracle estimates."""
    from .oracle import EnumerationConfig, findim_lower_bound

    G = quotient_algebra(A, ideal)
    top = inflate(regular_module(G), G)
    pd = pd_up_to(top, pd_bound)
    if not pd.finite:
        return Verdict.holds("oracle", vacuous=True, pd=pd.to_json())
    left = findim_lower_bound(EnumerationConfig(A, dim_bound), pd_bound)
    right = findim_lower_bound(EnumerationConfig(G, dim_bound), pd_bound)
    w = dict(findim_lower=left, pd_quotient=pd.value, quotient_findim_lower=right, dim_bound=dim_bound)
    if left <= pd.value + right:
        return Verdict.holds("oracle", **w)
    return Verdict.inconclusive("oracle", dim_bound, **w)


def check_right_thick(M: Module, n: int, samples: Sequence[tuple[Module, Module, Module]]) -> Verdict:
    """M^{perp tau_n} is closed under direct summands and extensions, on samples.

    Each sample (X, E, Y) stands for a short exact sequence 0 -> X -> E -> Y -> 0;
    extension closure asks E in perp whenever X and Y are; summand closure asks
    each indecomposable summand of a perp member to be in perp.
    """
    bad = []
    for X, E, Y in samples:
        if in_perp_tau_n(X, M, n) and in_perp_tau_n(Y, M, n) and not in_perp_tau_n(E, M, n):
            bad.append(("extension", _label(E)))
        for Z in (X, E, Y):
            if Z.dim and in_perp_tau_n(Z, M, n):
                for S in decompose(Z):
                    if not in_perp_tau_n(S, M, n):
                        bad.append(("summand", _label(S)))
    if bad:
        return Verdict.fails("module", bad=bad)
    return Verdict.holds("module", samples=len(samples))


def find_tau_rigid_complement(S: Module, candidates: Sequence[Module], n: int) -> list[str]:
    """Labels of candidates N (not isomorphic to S) with N + S tau_n-rigid."""
    from .modules import direct_sum_module

    out = []
    for N in candidates:
        if N.dims == S.dims and isomorphic(N, S):
            continue
        if is_tau_n_rigid(direct_sum_module([N, S]), n).holds_:
            out.append(_label(N))
    return out


# Names used by the operation contract.
check_NAIR34 = check_perp_routes
check_TEO = check_tilting_equivalences
check_p4 = check_perp_equals_gen

__all__ = [
    "ConsistencyViolation",
    "Coresolution",
    "FactorizationCheckFailed",
    "PerpTriangle",
    "TauNMReport",
    "add_coresolution",
    "check_NAIR34",
    "check_TEO",
    "check_annihilator_rank",
    "check_compatible_class",
    "check_ext_bridge",
    "check_findim_bound",
    "check_findim_quotient",
    "check_p4",
    "check_perp_equals_gen",
    "check_perp_routes",
    "check_rank_bridge",
    "check_right_thick",
    "check_rigidity_biconditional",
    "check_route_agreement",
    "check_support_disjoint",
    "check_tau1_implies_tau11",
    "check_tilting_equivalences",
    "find_tau_rigid_complement",
    "gamma",
    "gamma_injectives",
    "gen_sample",
    "is_n_tilting",
    "is_tau_n_tilting",
    "is_tau_nm_tilting",
    "perp_triangle",
    "relative_preenvelope",
]
