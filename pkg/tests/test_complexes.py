import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from silting import complexes as cx
from silting.fixtures import load_pack
from silting.homology import min_resolution
from silting.modules import hom, projective


def _res(pack, name, n, field=None):
    return cx.from_resolution(load_pack(pack, field).modules[name], n)


def test_stalk_hom_matches_projective_dimensions(eximp):
    A = eximp.algebra
    for i in range(3):
        for j in range(3):
            got = cx.hom_homotopy(cx.stalk(A, [i]), cx.stalk(A, [j]), 0).dim
            assert got == projective(A, j).dims[i]


@settings(max_examples=10)
@given(st.sampled_from([("eximp", "M"), ("eximp", "S1"), ("ejp1", "M"), ("ejp1", "[2;3]")]), st.integers(1, 3))
def test_truncated_resolutions_square_to_zero(key, n):
    X = _res(*key, n)
    X.check()
    assert cx.is_minimal(X)


def test_json_round_trip(eximp):
    X = _res("eximp", "M", 2)
    Y = cx.ProjComplex.from_json(eximp.algebra, X.to_json())
    assert Y.shape() == X.shape()
    assert all(not np.any(a != b) for a, b in zip(X.diffs, Y.diffs))


def test_cone_of_identity_is_contractible(field):
    X = _res("ejp1", "I3", 3, field)
    C = cx.cone(cx.identity_map(X))
    C.check()
    assert cx.is_zero_object(C)
    mm = cx.minimal_model(C)
    mm.check()
    assert mm.complex.is_zero_complex()


def test_minimal_model_of_a_padded_complex(eximp):
    A = eximp.algebra
    X = _res("eximp", "S1", 2)
    padded = cx.direct_sum([X, cx.cone(cx.identity_map(cx.stalk(A, [1], degree=-1)))])
    assert not cx.is_minimal(padded)
    mm = cx.minimal_model(padded)
    mm.check()
    assert mm.eliminated == 1
    assert mm.complex.shape() == X.shape()


def test_shift_moves_hom(eximp):
    X = _res("eximp", "S1", 3)
    assert cx.hom_homotopy(X, X, 0).dim == 1
    assert cx.hom_homotopy(X, X, 1).dim == 0
    assert cx.hom_homotopy(X, X, 3).dim == 1


def test_null_homotopy_certificate(eximp):
    X = _res("eximp", "M", 2)
    hs = cx.hom_space(X, X)
    for g in hs.classes():
        assert not hs.is_null(g)
    zero = cx.zero_chain_map(X, X)
    assert hs.is_null(zero)


def test_lifted_module_map_is_a_chain_map(eximp):
    A = eximp.algebra
    S1 = eximp.modules["S1"]
    (f,) = hom(projective(A, 0), S1)
    g = cx.lift_module_map(f, 2)
    g.check()


@pytest.mark.parametrize(
    "pack,name,n,presilting,silting",
    [
        ("eximp", "M", 2, True, True),
        ("eximp", "M", 1, False, False),
        ("eximp", "S1", 2, True, False),
        ("ejp1", "S1", 2, True, False),
        ("ejp1", "M", 4, True, True),
    ],
)
def test_silting_decisions(pack, name, n, presilting, silting):
    X = _res(pack, name, n)
    assert cx.is_presilting(X).holds_ == presilting
    v = cx.is_silting(X)
    assert v.holds_ == silting
    assert not v.inconclusive_


def test_coresolution_certificate_rechecks(eximp):
    A = eximp.algebra
    X = _res("eximp", "M", 2)
    res = cx.coresdim_within(cx.regular_complex(A), X, 2)
    assert res.finite and res.value == 2
    assert res.to_json()["chain"] == ["-1:P(3)  0:P(2)", "-2:P(3)  -1:P(2)  0:P(1)"]
    assert res.recheck(X)


def test_coresolution_bound_reported(eximp):
    A = eximp.algebra
    X = _res("eximp", "M", 2)
    res = cx.coresdim_within(cx.regular_complex(A), X, 1)
    assert not res.finite
    assert res.to_json() == {"kind": "NotWithinBound", "bound": 1}
    with pytest.raises(ValueError):
        cx.coresdim_within(X, X, -1)


def test_regular_complex_is_silting(ejp1):
    v = cx.is_silting(cx.regular_complex(ejp1.algebra))
    assert v.holds_ and v.witness["coresdim"] == 0


def test_resolution_terms_match_module_resolution(ejp1):
    M = ejp1["M"]
    X = cx.from_resolution(M, 4)
    res = min_resolution(M, 4)
    assert [sorted(X.term(-i)) for i in range(5)] == [sorted(t) for t in res.terms[:5]]
