import pytest

from silting.decompose import isomorphic
from silting.fixtures import load_pack
from silting.harness import tau_tilting_sums
from silting.linalg import PrimeField
from silting.oracle import (
    EnumerationConfig,
    WorkBoundExceeded,
    catalog,
    classify_tau_n_rigid,
    enumerate_indecomposables,
    findim_lower_bound,
)

COUNTS = {
    ("eximp", 2): 6,
    ("eximp", 4): 6,
    ("ejp1", 2): 8,
    ("ejp1", 3): 12,
    ("ejp1", 4): 18,
    ("gamma-eximp", 3): 5,
    ("radsq3", 2): 8,
    ("radsq3", 3): 10,
}


@pytest.mark.parametrize("key", sorted(COUNTS), ids=lambda k: f"{k[0]}-{k[1]}")
def test_indecomposable_counts(key):
    A = load_pack(key[0]).algebra
    assert len(enumerate_indecomposables(EnumerationConfig(A, key[1]))) == COUNTS[key]


def test_enumeration_contains_the_fixture_indecomposables():
    for pack, bound in (("eximp", 2), ("ejp1", 3), ("radsq3", 3)):
        P = load_pack(pack)
        found = enumerate_indecomposables(EnumerationConfig(P.algebra, bound))
        for X in P.ind():
            if X.dim <= bound:
                assert sum(isomorphic(X, Y) for Y in found) == 1


def test_over_f3_the_projective_line_grows():
    A = load_pack("radsq3", PrimeField(3)).algebra
    names = [M.name for M in enumerate_indecomposables(EnumerationConfig(A, 2))]
    assert sum(n.startswith("[1,1,0]") for n in names) == 4


def test_catalog_is_deterministic():
    A = load_pack("ejp1").algebra
    a = catalog(EnumerationConfig(A, 3, seed=0))
    b = catalog(EnumerationConfig(load_pack("ejp1", "Fp:2").algebra, 3, seed=0))
    assert a["modules"] == b["modules"]


def test_rigid_classification_counts():
    A = load_pack("ejp1").algebra
    cfg = EnumerationConfig(A, 4)
    assert [len(classify_tau_n_rigid(cfg, n)) for n in (1, 2)] == [10, 8]


def test_findim_estimates():
    assert findim_lower_bound(EnumerationConfig(load_pack("eximp").algebra, 3), 6) == 0
    # S(2) alone has pd 4: P(2) <- P(3)^2 <- P(1) <- P(2) <- P(3)
    assert findim_lower_bound(EnumerationConfig(load_pack("ejp1").algebra, 4), 8) == 4


def test_work_bound_is_enforced():
    A = load_pack("ejp1").algebra
    with pytest.raises(WorkBoundExceeded):
        enumerate_indecomposables(EnumerationConfig(A, 4, bound=100))


def test_work_bound_from_environment(monkeypatch):
    monkeypatch.setenv("SILT_WORK_BOUND", "10")
    with pytest.raises(WorkBoundExceeded):
        EnumerationConfig(load_pack("eximp").algebra, 3).validate()


def test_rationals_are_refused():
    with pytest.raises(ValueError):
        enumerate_indecomposables(EnumerationConfig(load_pack("eximp", "Q").algebra, 2))


def test_radsq3_support_tau_tilting_sums():
    sums = tau_tilting_sums(PrimeField(2), 1, packs=("radsq3",))
    names = {tuple(sorted(M.name.split("+"))) for _, M in sums}
    expected = {
        ("I2", "P3", "S1"), ("P1", "P2", "S2"), ("P2", "P3", "S3"),
        ("P1", "P2", "P3"), ("P1", "P3", "Q2"), ("I2", "J2", "P3"),
    }
    assert names == expected
