import pytest
from hypothesis import given, settings, strategies as st

from silting import decisions as dc
from silting.fixtures import load_pack
from silting.homology import PreconditionViolated, in_perp_tau_n
from silting.modules import direct_sum_module, projective


def test_eximp_module_is_tau_22_tilting(field):
    M = load_pack("eximp", field)["M"]
    rep = dc.is_tau_nm_tilting(M, 2, 2)
    data = rep.to_json()
    assert rep.outcome.holds_
    assert data["annihilator"] == ["c"]
    assert data["gamma"] == {"dim": 5, "vertices": ["1", "2", "3"], "basis": ["e1", "e2", "e3", "a", "b"]}
    assert data["m_tilting_gamma"]["witness"]["coresolution"] == [[1, 3, 2], [1, 1, 0], [1, 0, 0]]
    assert rep.sincere and rep.rank_equal


def test_eximp_tau_21_fails_on_gamma_rigidity(eximp):
    v = dc.is_tau_nm_tilting(eximp["M"], 2, 1).outcome
    assert v.fails_ and v.witness["failed"] == "tau_m_rigid_gamma"


@pytest.mark.parametrize("n,expected", [(1, "Fails"), (2, "Holds"), (3, "Fails")])
def test_eximp_tau_n_tilting(eximp, n, expected):
    assert dc.is_tau_n_tilting(eximp["M"], n).outcome.value == expected


def test_necessary_conditions_reported_together(ejp1):
    v = dc.is_tau_n_tilting(ejp1["S"], 2)
    assert v.fails_
    assert v.witness["condition"] == "sincere,rank"
    assert (v.witness["rank"], v.witness["expected_rank"]) == (1, 3)


def test_rank_only_failure(eximp):
    A = eximp.algebra
    v = dc.is_tau_n_tilting(direct_sum_module([projective(A, v) for v in range(3)][:2]), 1)
    assert v.witness["condition"] == "rank"


def test_ejp1_injectives_are_4_tilting(ejp1):
    v = dc.is_n_tilting(ejp1["M"], 4)
    assert v.holds_
    assert v.witness["pd"] == 4
    assert v.witness["coresolution"] == [[4, 6, 4], [4, 4, 0], [3, 3, 3], [3, 6, 3], [3, 3, 0]]
    assert dc.is_n_tilting(ejp1["M"], 3).witness["condition"] == "pd"


def test_eximp_module_is_not_2_tilting(eximp):
    v = dc.is_n_tilting(eximp["M"], 2)
    assert v.fails_ and v.witness["condition"] == "pd"


def test_ejp1_simple_has_no_tau2_rigid_complement(ejp1):
    assert dc.find_tau_rigid_complement(ejp1["S"], ejp1.ind(), 2) == []


def test_tilting_equivalences_agree(eximp, ejp1):
    v = dc.check_tilting_equivalences(eximp["M"], 2)
    assert v.holds_ and set(v.witness["clauses"].values()) == {False}
    w = dc.check_tilting_equivalences(ejp1["M"], 4)
    assert w.holds_ and set(w.witness["clauses"].values()) == {True}
    with pytest.raises(PreconditionViolated):
        dc.check_tilting_equivalences(eximp["M"], 1)


def test_perp_equals_gen_on_eximp(eximp):
    v = dc.check_perp_equals_gen(eximp["M"], 2, eximp.ind())
    assert v.holds_
    assert [r[1] for r in v.witness["rows"]] == [True, False, False, True, True, False]


@settings(max_examples=12)
@given(st.sampled_from(["S1", "S2", "S3", "P1", "P2", "P3", "M"]), st.sampled_from(["S1", "S2", "S3", "P1", "P2", "P3"]),
       st.integers(1, 3))
def test_perp_routes_agree(a, b, n):
    P = load_pack("eximp")
    assert dc.check_perp_routes(P[a], P[b], n).holds_


@settings(max_examples=10)
@given(st.sampled_from(["S1", "S2", "S3", "I1", "I2", "I3", "[2;3]", "M"]), st.integers(1, 3))
def test_route_agreement_on_ejp1(name, n):
    assert dc.check_route_agreement(load_pack("ejp1")[name], n).holds_


def test_support_disjoint_and_annihilator(eximp):
    v = dc.check_support_disjoint(eximp["M"], 2)
    assert v.witness == {"top": [0, 1], "bottom": [2]}
    a = dc.check_annihilator_rank(eximp["M"])
    assert a.holds_ and a.witness["ann_dim"] == 1
    with pytest.raises(PreconditionViolated):
        dc.check_annihilator_rank(eximp.modules["S1"])


def test_rigidity_biconditional_range(eximp):
    assert dc.check_rigidity_biconditional(eximp["M"], 2).holds_
    with pytest.raises(ValueError):
        dc.check_rigidity_biconditional(eximp["M"], 3)


def test_relative_preenvelope_factors(eximp):
    M = eximp["M"]
    perp = [X for X in eximp.ind() if in_perp_tau_n(X, M, 2)]
    assert len(perp) == 3
    for N in eximp.ind():
        phi = dc.relative_preenvelope(N, M, 2, testset=perp)
        assert phi.source is N


def test_compatible_class_on_probe(eximp):
    v = dc.check_compatible_class(eximp["M"], 2, 2, eximp.ind())
    assert v.holds_
    assert v.probe == ["S1", "S2", "S3", "P(1)", "P(2)", "P(3)"]
    with pytest.raises(ValueError):
        dc.check_compatible_class(eximp["M"], 1, 2, eximp.ind())


def test_contract_aliases():
    assert dc.check_NAIR34 is dc.check_perp_routes
    assert dc.check_TEO is dc.check_tilting_equivalences
    assert dc.check_p4 is dc.check_perp_equals_gen
