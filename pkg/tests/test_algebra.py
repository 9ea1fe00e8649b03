import numpy as np
import pytest

from silting.algebra import (
    AdmissibilityFailure,
    Arrow,
    EmptyQuiver,
    InvalidPresentation,
    NotAnIdeal,
    QuiverPresentation,
    algebra_from_json,
    algebra_iso,
    block_dimensions,
    build_algebra,
    quotient_algebra,
)
from silting.decisions import gamma
from silting.fixtures import load_pack
from silting.linalg import PrimeField, Rationals
from silting.modules import annihilator, projective


def cycle(field, L=2):
    return QuiverPresentation(
        field, ("1", "2", "3"),
        (Arrow("a", "1", "2"), Arrow("b", "2", "3"), Arrow("c", "3", "1")),
        (((1, ("b", "a")),), ((1, ("c", "b")),), ((1, ("a", "c")),)), L,
    )


def test_eximp_dimension_and_basis(field):
    A = build_algebra(cycle(field))
    assert A.dim == 6
    assert sorted(A.labels) == ["a", "b", "c", "e1", "e2", "e3"]
    A.check()


def test_ejp1_dimension(field):
    A = load_pack("ejp1", field).algebra
    assert A.dim == 9
    assert sorted(A.labels) == sorted(["e1", "e2", "e3", "a", "b", "c", "d", "ca", "db"])
    A.check()


def test_single_vertex_is_the_field():
    A = build_algebra(QuiverPresentation(PrimeField(2), ("1",), (), (), 2))
    assert A.dim == 1 and A.radical == ()


def test_every_pack_algebra_is_associative():
    for name in ("eximp", "ejp1", "radsq3", "gamma-eximp"):
        load_pack(name).algebra.check()


def test_admissibility_failure():
    q = QuiverPresentation(PrimeField(2), ("1",), (Arrow("x", "1", "1"),), (), 2)
    with pytest.raises(AdmissibilityFailure):
        build_algebra(q)


def test_presentation_errors():
    f = PrimeField(2)
    with pytest.raises(EmptyQuiver):
        QuiverPresentation(f, (), ())
    with pytest.raises(InvalidPresentation):
        QuiverPresentation(f, ("1",), (Arrow("x", "1", "9"),))
    with pytest.raises(InvalidPresentation):
        QuiverPresentation(f, ("1", "2"), (Arrow("x", "1", "2"),), (((1, ("x",)),),))
    with pytest.raises(InvalidPresentation):
        QuiverPresentation(f, ("1", "2"), (Arrow("x", "1", "2"), Arrow("y", "1", "2")), (((1, ("y", "x")),),))


def test_json_round_trip(field):
    q = cycle(field)
    A = algebra_from_json(q.to_json())
    assert A.structurally_equal(build_algebra(q))


def test_opposite_is_an_involution(ejp1):
    A = ejp1.algebra
    assert A.opposite().opposite() is A
    assert A.opposite().dim == 9
    A.opposite().check()


def test_opposite_of_cycle_reverses_arrows():
    A = build_algebra(cycle(PrimeField(2)))
    Aop = A.opposite()
    D, Dop = block_dimensions(A), block_dimensions(Aop)
    assert np.array_equal(D.T, Dop)


def test_quotient_by_zero_ideal(field):
    A = build_algebra(cycle(field))
    Q = quotient_algebra(A, field.zeros(0, A.dim))
    assert Q.structurally_equal(A)


def test_quotient_by_radical_is_semisimple(field):
    A = load_pack("ejp1", field).algebra
    rad = np.stack([A.unit_vector(r) for r in A.radical])
    Q = quotient_algebra(A, rad)
    assert Q.dim == 3 and Q.radical == ()
    Q.check()


def test_quotient_rejects_non_ideal():
    A = build_algebra(cycle(PrimeField(2)))
    e1 = A.unit_vector(A.idempotents[0])[None, :]
    with pytest.raises(NotAnIdeal):
        quotient_algebra(A, e1)


def test_projection_is_multiplicative(eximp):
    M = eximp["M"]
    G = gamma(M)
    A = M.algebra
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = G.project(A.mul(A.unit_vector(i), A.unit_vector(j)))
            rhs = G.mul(G.project(A.unit_vector(i)), G.project(A.unit_vector(j)))
            assert not np.any(lhs != rhs)


def test_gamma_matches_a3_presentation(field):
    M = load_pack("eximp", field)["M"]
    G = gamma(M)
    assert G.dim == 5
    assert [M.algebra.element_str(r) for r in annihilator(M)] == ["c"]
    ok, cert = algebra_iso(G, load_pack("gamma-eximp", field).algebra)
    assert ok is True
    assert cert["vertex_map"] == {"1": "1", "2": "2", "3": "3"}


def test_algebra_iso_rejects_by_invariants():
    A = load_pack("eximp").algebra
    B = load_pack("gamma-eximp").algebra
    ok, why = algebra_iso(A, B)
    assert ok is False and "dimension" in why["reason"]


def test_algebra_iso_exhaustive_negative():
    # same block dimensions, different multiplication: A3 with and without the relation, L large
    f = PrimeField(2)
    lin = QuiverPresentation(f, ("1", "2", "3"), (Arrow("a", "1", "2"), Arrow("b", "2", "3"), Arrow("x", "1", "3")), (), 3)
    rel = QuiverPresentation(
        f, ("1", "2", "3"), (Arrow("a", "1", "2"), Arrow("b", "2", "3"), Arrow("x", "1", "3")), (((1, ("b", "a")),),), 3
    )
    A, B = build_algebra(lin), build_algebra(rel)
    assert A.dim == 7 and B.dim == 6
    ok, _ = algebra_iso(A, B)
    assert ok is False


def test_sum_of_projective_dimensions(eximp):
    A = eximp.algebra
    assert sum(projective(A, v).dim for v in range(3)) == A.dim == 6
