"""Named suites of fixture checks, as run by ``silt verify`` and ``silt report``.

Each check is a thunk returning a :class:`Verdict`; running a suite produces
one record per check with its outcome, a digest of its certificate and,
on request, the runtime.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable, Iterable

from . import complexes as cx
from . import decisions as dc
from .algebra import algebra_iso
from .decompose import algebra_rank, decompose, is_indecomposable, isomorphic, rank_of
from .fixtures import FixturePack, load_pack
from .homology import PreconditionViolated, ext, in_perp_tau_n, is_tau_n_rigid, min_resolution, parse_shape, pd_up_to, tau_n
from .linalg import PrimeField
from .modules import Module, ModuleMap, direct_sum_module, hom_basis, image, is_sincere, power, restrict
from .oracle import EnumerationConfig, classify_tau_n_rigid, enumerate_indecomposables
from .verdict import Outcome, Verdict, all_of, certificate_digest

SUITES = ("nair34", "p4", "teo", "nair22", "c1", "corfindim", "examples-all")

# Projective resolutions of the indecomposable injectives of ejp1, degree 0 first.
EJP1_INJECTIVE_RESOLUTIONS = {
    "I3": "P(2)+P(1) <- P(3)^2 <- P(1) <- P(2) <- P(3)",
    "I2": "P(1) <- P(3) <- P(1) <- P(2) <- P(3)",
    "I1": "P(2) <- P(3) <- P(1) <- P(2) <- P(3)",
}


class UnknownSuite(ValueError):
    pass


@dataclass
class Check:
    check_id: str
    inputs: dict
    run: Callable[[], Verdict]


@dataclass
class Record:
    check_id: str
    inputs: dict
    verdict: Verdict
    runtime_ms: float

    def to_json(self, timings: bool = False) -> dict:
        return {
            "check-id": self.check_id,
            "inputs": self.inputs,
            "outcome": self.verdict.outcome.value,
            "certificate-digest": self.verdict.digest(),
            "runtime-ms": round(self.runtime_ms, 1) if timings else None,
        }


def expect(actual, expected, provenance: str = "fixture", **extra) -> Verdict:
    """Holds iff ``actual == expected``; both values go into the witness."""
    if actual == expected:
        return Verdict.holds(provenance, value=actual, **extra)
    return Verdict.fails(provenance, value=actual, expected=expected, **extra)


def expect_outcome(v: Verdict, outcome: Outcome) -> Verdict:
    """Holds iff ``v`` has the expected outcome; the inner verdict is the witness."""
    if v.outcome is outcome:
        return Verdict.holds("fixture", expected=outcome.value, verdict=v.to_json())
    if v.inconclusive_:
        return Verdict.inconclusive("fixture", v.bound, expected=outcome.value, verdict=v.to_json())
    return Verdict.fails("fixture", expected=outcome.value, verdict=v.to_json())


def _finite_field_only(pack: FixturePack, thunk: Callable[[], Verdict]) -> Verdict:
    if not isinstance(pack.algebra.field, PrimeField):
        return Verdict.inconclusive("oracle", None, reason="enumeration needs a finite field")
    return thunk()


def _match(X: Module, pack: FixturePack, keys: Iterable[str]) -> str:
    """The first key of ``pack`` whose module is isomorphic to X, else X's own name."""
    for k in keys:
        Y = pack.modules[k]
        if Y.dims == X.dims and isomorphic(X, Y):
            return k
    return X.name


# ---------------------------------------------------------------------------
# eximp
# ---------------------------------------------------------------------------


def eximp_checks(field=None) -> list[Check]:
    P = load_pack("eximp", field)
    G3 = load_pack("gamma-eximp", field).algebra
    M, S1 = P["M"], P["S1"]
    summands = ["P1", "P2", "S1"]

    def gamma_match():
        G = dc.gamma(M)
        ok, cert = algebra_iso(G, G3)
        v = expect([G.dim, ok], [5, True], iso=cert)
        return v

    def pd_s1():
        r = pd_up_to(S1, 10)
        return expect([r.finite, r.periodicity], [False, (0, 3)], pd=r.to_json())

    def perp():
        if isinstance(P.algebra.field, PrimeField):
            mods, source = enumerate_indecomposables(EnumerationConfig(P.algebra, 2)), "oracle"
        else:
            mods, source = P.ind(), "fixture"
        found = sorted(_match(X, P, summands) for X in mods if in_perp_tau_n(X, M, 2))
        return expect([len(mods), found], [6, summands], source=source)

    return [
        Check("eximp.tau-rigid-2", {"pack": "eximp", "module": "M", "n": 2}, lambda: expect_outcome(is_tau_n_rigid(M, 2), Outcome.HOLDS)),
        Check("eximp.tau-rigid-1", {"pack": "eximp", "module": "M", "n": 1}, lambda: expect_outcome(is_tau_n_rigid(M, 1), Outcome.FAILS)),
        Check("eximp.pd-S1", {"pack": "eximp", "module": "S1", "bound": 10}, pd_s1),
        Check("eximp.tau-tilting-2", {"pack": "eximp", "module": "M", "n": 2}, lambda: expect_outcome(dc.is_tau_n_tilting(M, 2), Outcome.HOLDS)),
        Check("eximp.gamma", {"pack": "eximp", "module": "M", "against": "gamma-eximp"}, gamma_match),
        Check("eximp.restrict-2-tilting", {"pack": "eximp", "module": "M", "n": 2},
              lambda: expect_outcome(dc.is_n_tilting(restrict(M, dc.gamma(M)), 2), Outcome.HOLDS)),
        Check("eximp.tau-22-tilting", {"pack": "eximp", "module": "M", "n": 2, "m": 2},
              lambda: expect_outcome(dc.is_tau_nm_tilting(M, 2, 2).outcome, Outcome.HOLDS)),
        Check("eximp.perp-classification", {"pack": "eximp", "module": "M", "n": 2, "bound": 2}, perp),
    ]


# ---------------------------------------------------------------------------
# ejp1 and its 4-tilting module
# ---------------------------------------------------------------------------


def ejp1_cone_h0(pack: FixturePack) -> tuple[Module, ModuleMap]:
    """H^0 of the cone of a lift of f: I(3) -> I(1) with image S(1)."""
    I1, I3, S1 = pack["I1"], pack["I3"], pack["S1"]
    for h in hom_basis(I3, I1):
        f = ModuleMap(I3, I1, h)
        im, _ = image(f)
        if im.dims == S1.dims:
            g = cx.lift_module_map(f, 4)
            return cx.cohomology(cx.cone(g), 0), f
    raise PreconditionViolated("no map I(3) -> I(1) with image S(1)")


def ejp1_checks(field=None) -> list[Check]:
    P = load_pack("ejp1", field)
    A, M, S1, T23 = P.algebra, P["M"], P["S1"], P["[2;3]"]

    def pd_s1():
        return expect(pd_up_to(S1, 5).to_json(), {"kind": "Finite", "value": 2})

    def no_complement():
        def run():
            mods = enumerate_indecomposables(EnumerationConfig(A, 4))
            return expect(dc.find_tau_rigid_complement(S1, mods, 2), [], candidates=len(mods))

        return _finite_field_only(P, run)

    def resolutions():
        got = {k: parse_shape(min_resolution(P[k], 5).shape()) for k in EJP1_INJECTIVE_RESOLUTIONS}
        want = {k: parse_shape(s) for k, s in EJP1_INJECTIVE_RESOLUTIONS.items()}
        return expect(got, want)

    def cone():
        H0, _ = ejp1_cone_h0(P)
        return expect(
            [isomorphic(H0, T23) if H0.dims == T23.dims else False, ext(P["I2"], H0, 1) != 0, in_perp_tau_n(H0, M, 4)],
            [True, True, False],
            h0_dims=list(H0.dims),
        )

    return [
        Check("ejp1.pd-S1", {"pack": "ejp1", "module": "S1", "bound": 5}, pd_s1),
        Check("ejp1.ext-S1", {"pack": "ejp1", "module": "S1", "degrees": [1, 2]}, lambda: expect([ext(S1, S1, 1), ext(S1, S1, 2)], [0, 0])),
        Check("ejp1.tau-rigid-S1", {"pack": "ejp1", "module": "S1", "n": 2}, lambda: expect_outcome(is_tau_n_rigid(S1, 2), Outcome.HOLDS)),
        Check("ejp1.no-complement", {"pack": "ejp1", "module": "S1", "n": 2, "bound": 4}, no_complement),
        Check("ejp1.tau-tilting-S1", {"pack": "ejp1", "module": "S1", "n": 2}, lambda: expect_outcome(dc.is_tau_n_tilting(S1, 2), Outcome.FAILS)),
        Check("ejp1.injective-resolutions", {"pack": "ejp1", "modules": ["I1", "I2", "I3"]}, resolutions),
        Check("ejp1.4-tilting", {"pack": "ejp1", "module": "M", "n": 4}, lambda: expect_outcome(dc.is_n_tilting(M, 4), Outcome.HOLDS)),
        Check("ejp1.cone-h0", {"pack": "ejp1", "module": "M", "n": 4}, cone),
    ]


# ---------------------------------------------------------------------------
# radsq3
# ---------------------------------------------------------------------------


def radsq3_checks(field=None) -> list[Check]:
    P = load_pack("radsq3", field)
    A = P.algebra

    def tau_values():
        t2, t3 = tau_n(P["S2"], 3), tau_n(P["S3"], 3)
        return expect(
            [t2.dims == P["J2"].dims and isomorphic(t2, P["J2"]), t3.dims == (0, 0, 2) and isomorphic(t3, power(P["S3"], 2))],
            [True, True],
        )

    def classify():
        def run():
            rig = classify_tau_n_rigid(EnumerationConfig(A, 6), 3)
            names = sorted(_match(X, P, ("P1", "P2", "P3")) for X in rig)
            return expect(names, ["P1", "P2", "P3"])

        return _finite_field_only(P, run)

    return [
        Check("radsq3.tau3-values", {"pack": "radsq3", "modules": ["S2", "S3"], "n": 3}, tau_values),
        Check("radsq3.tau3-rigid-classification", {"pack": "radsq3", "n": 3, "bound": 6}, classify),
    ]


# ---------------------------------------------------------------------------
# Structural suites
# ---------------------------------------------------------------------------

FIXTURE_PACKS = ("eximp", "ejp1", "gamma-eximp", "radsq3")


def _fixture_modules(field, packs=FIXTURE_PACKS, roles: bool = True) -> list[tuple[str, Module]]:
    out = []
    for name in packs:
        P = load_pack(name, field)
        keys = list(P.indecomposables)
        if roles:
            keys += [v for v in P.roles.values() if v not in keys]
        out += [(f"{name}:{k}", P.modules[k]) for k in keys]
    return out


def _over(items, fn: Callable[[str, Module], Verdict], provenance: str) -> Verdict:
    return all_of(provenance, {label: fn(label, X) for label, X in items})


def cross_route_checks(field=None) -> list[Check]:
    out = []
    for pack in FIXTURE_PACKS:
        mods = _fixture_modules(field, (pack,))
        for n in (1, 2, 3):
            out.append(Check(
                f"cross-route.{pack}.n{n}", {"pack": pack, "n": n, "pairs": len(mods) ** 2},
                lambda mods=mods, n=n: all_of("module+complex", {
                    f"{a}|{b}": dc.check_perp_routes(M, N, n) for a, M in mods for b, N in mods
                }),
            ))
            out.append(Check(
                f"route-agreement.{pack}.n{n}", {"pack": pack, "n": n},
                lambda mods=mods, n=n: _over(mods, lambda _, M: dc.check_route_agreement(M, n), "module+complex"),
            ))
        out.append(Check(
            f"ext-bridge.{pack}", {"pack": pack, "n": 3},
            lambda mods=mods: all_of("module+complex", {
                f"{a}|{b}": dc.check_ext_bridge(M, N, 3) for a, M in mods for b, N in mods
            }),
        ))
    return out


def p4_checks(field=None) -> list[Check]:
    E, J = load_pack("eximp", field), load_pack("ejp1", field)

    def run(P, n, bound):
        def go():
            ind = enumerate_indecomposables(EnumerationConfig(P.algebra, bound))
            return dc.check_perp_equals_gen(P["M"], n, ind)

        return _finite_field_only(P, go)

    return [
        Check("perp-equals-gen.eximp", {"pack": "eximp", "module": "M", "n": 2, "bound": 2}, lambda: run(E, 2, 2)),
        Check("perp-equals-gen.ejp1", {"pack": "ejp1", "module": "M", "n": 4, "bound": 4}, lambda: run(J, 4, 4)),
    ]


def teo_checks(field=None) -> list[Check]:
    E, J = load_pack("eximp", field), load_pack("ejp1", field)
    return [
        Check("tilting-equivalences.ejp1", {"pack": "ejp1", "module": "M", "n": 4}, lambda: dc.check_tilting_equivalences(J["M"], 4)),
        Check("tilting-equivalences.eximp", {"pack": "eximp", "module": "M", "n": 2}, lambda: dc.check_tilting_equivalences(E["M"], 2)),
    ]


def tau_tilting_sums(field=None, n: int = 1, packs=FIXTURE_PACKS) -> list[tuple[str, Module]]:
    """Sums of rk(A) distinct tau_n-rigid fixture indecomposables that are tau_n-tilting."""
    out = []
    for name in packs:
        P = load_pack(name, field)
        rigid = [k for k in P.indecomposables if is_tau_n_rigid(P.modules[k], n).holds_]
        for combo in itertools.combinations(rigid, algebra_rank(P.algebra)):
            X = direct_sum_module([P.modules[k] for k in combo], name="+".join(combo))
            if dc.is_tau_n_tilting(X, n).holds_:
                out.append((f"{name}:{X.name}", X))
    return out


def tau_nm_checks(field=None) -> list[Check]:
    out = []
    for pack in FIXTURE_PACKS:
        mods = _fixture_modules(field, (pack,))

        def implication(mods=mods):
            parts = {}
            for label, M in mods:
                for n, m in ((1, 1), (2, 2), (2, 1)):
                    rep = dc.is_tau_nm_tilting(M, n, m)
                    parts[f"{label}:{n},{m}"] = (
                        rep.m_tilting_gamma if rep.outcome.holds_ else Verdict.holds("module", vacuous=True)
                    )
            return all_of("module", parts)

        out += [
            Check(f"rigidity-biconditional.{pack}", {"pack": pack, "n": [1, 2], "modules": len(mods)},
                  lambda mods=mods: _over(
                      [(f"{k}:{n}", (M, n)) for k, M in mods for n in (1, 2)],
                      lambda _, Mn: dc.check_rigidity_biconditional(*Mn), "module")),
            Check(f"tau1-implies-tau11.{pack}", {"pack": pack, "modules": "tau_1-tilting sums of indecomposables"},
                  lambda pack=pack: _over(tau_tilting_sums(field, 1, (pack,)), lambda _, M: dc.check_tau1_implies_tau11(M), "module")),
            Check(f"tau-nm-implies-m-tilting.{pack}", {"pack": pack, "modules": len(mods)}, implication),
        ]
    return out


# radsq3 resolutions grow quickly; n = 4 complexes exceed desk-scale memory
SILTING_DEGREES = {"eximp": (1, 2, 3, 4), "ejp1": (1, 2, 3, 4), "gamma-eximp": (1, 2, 3, 4), "radsq3": (1, 2, 3)}


def rigid_sums(P: FixturePack, n: int) -> list[tuple[str, Module]]:
    """Basic sums of at most rk(A) fixture indecomposables that are tau_n-rigid.

    tau_n-rigidity of a sum is checked pairwise on its summands, which is
    exact because both Hom(-, tau_n -) and Ext are additive.
    """
    rig = [k for k in P.indecomposables if is_tau_n_rigid(P.modules[k], n).holds_]
    ok = {(a, b): in_perp_tau_n(P.modules[a], P.modules[b], n) for a in rig for b in rig}
    out = []
    for r in range(1, algebra_rank(P.algebra) + 1):
        for combo in itertools.combinations(rig, r):
            if all(ok[a, b] for a in combo for b in combo):
                X = P.modules[combo[0]] if r == 1 else direct_sum_module([P.modules[k] for k in combo], name="+".join(combo))
                out.append(("+".join(combo), X))
    return out


def c1_checks(field=None) -> list[Check]:
    mods = _fixture_modules(field)

    def sincere_rank(pack, n):
        # the silting decision here is the bare complex route, without the
        # sincerity and rank prefilters of is_tau_n_tilting
        parts = {}
        for label, M in rigid_sums(load_pack(pack, field), n):
            if cx.is_silting(cx.from_resolution(M, n), n).holds_:
                ok = [is_sincere(M), rank_of(M) == algebra_rank(M.algebra)]
                parts[label] = expect(ok, [True, True], "module+complex")
        if not parts:
            return Verdict.fails("module+complex", reason="no silting module found")
        return all_of("module+complex", parts)

    def rank_bridge():
        return _over(_fixture_modules(field, roles=False), lambda _, M: dc.check_rank_bridge(M, 2), "module+complex")

    def support():
        parts = {}
        for label, M in mods:
            for n in (1, 2, 3):
                if is_tau_n_rigid(M, n).holds_:
                    parts[f"{label}:{n}"] = dc.check_support_disjoint(M, n)
        return all_of("module", parts)

    def ann_rank():
        return _over([(k, M) for k, M in mods if is_sincere(M)], lambda _, M: dc.check_annihilator_rank(M), "module")

    return [
        *[Check(f"silting-sincere-rank.{pack}.n{n}", {"pack": pack, "n": n, "modules": "tau_n-rigid sums"},
                lambda pack=pack, n=n: sincere_rank(pack, n))
          for pack in FIXTURE_PACKS for n in SILTING_DEGREES[pack]],
        Check("rank-bridge", {"modules": len(mods), "n": 2}, rank_bridge),
        Check("support-disjoint", {"modules": len(mods), "n": [1, 2, 3]}, support),
        Check("annihilator-rank", {"modules": len(mods)}, ann_rank),
    ]


def corfindim_checks(field=None) -> list[Check]:
    E, J = load_pack("eximp", field), load_pack("ejp1", field)
    return [
        Check("findim-bound.eximp", {"pack": "eximp", "module": "M", "n": 2, "m": 2, "bound": 3},
              lambda: dc.check_findim_bound(E["M"], 2, 2, 3)),
        Check("findim-bound.ejp1", {"pack": "ejp1", "module": "M", "n": 4, "m": 4, "bound": 5},
              lambda: dc.check_findim_bound(J["M"], 4, 4, 5)),
        Check("compatible-class.eximp", {"pack": "eximp", "module": "M", "n": 2, "m": 2, "bound": 2},
              lambda: _finite_field_only(E, lambda: dc.check_compatible_class(
                  E["M"], 2, 2, enumerate_indecomposables(EnumerationConfig(E.algebra, 2))))),
    ]


def suite_checks(suite: str, field=None) -> list[Check]:
    builders = {
        "nair34": [cross_route_checks],
        "p4": [p4_checks],
        "teo": [teo_checks],
        "nair22": [tau_nm_checks],
        "c1": [c1_checks],
        "corfindim": [corfindim_checks],
        "examples-all": [
            eximp_checks, ejp1_checks, radsq3_checks, teo_checks, p4_checks,
            c1_checks, tau_nm_checks, corfindim_checks, cross_route_checks,
        ],
    }
    if suite not in builders:
        raise UnknownSuite(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    return [c for b in builders[suite] for c in b(field)]


def run_check(c: Check) -> Record:
    t = time.perf_counter()
    try:
        v = c.run()
    except PreconditionViolated as exc:
        v = Verdict.fails("harness", error=str(exc))
    return Record(c.check_id, c.inputs, v, (time.perf_counter() - t) * 1000)


def run_suite(suite: str, field=None) -> list[Record]:
    return [run_check(c) for c in suite_checks(suite, field)]


def aggregate(records: list[Record]) -> Outcome:
    outcomes = {r.verdict.outcome for r in records}
    if Outcome.FAILS in outcomes:
        return Outcome.FAILS
    if Outcome.INCONCLUSIVE in outcomes:
        return Outcome.INCONCLUSIVE
    return Outcome.HOLDS


def report_digest(records: list[Record]) -> str:
    return certificate_digest([r.to_json() for r in records])
