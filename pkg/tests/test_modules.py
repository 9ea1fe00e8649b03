import numpy as np
import pytest
from hypothesis import given, strategies as st

from silting.decisions import gamma
from silting.decompose import isomorphic
from silting.fixtures import load_pack
from silting.modules import (
    InvalidModule,
    Module,
    NotAnnihilated,
    annihilator,
    cokernel,
    direct_sum_module,
    dual,
    hom,
    hom_dim,
    image,
    inflate,
    injective,
    is_faithful,
    is_sincere,
    kernel,
    projective,
    restrict,
    simple,
    top,
)

PACKS = ("eximp", "ejp1", "radsq3")


def _pack_modules():
    return [(p, k) for p in PACKS for k in load_pack(p).modules]


@given(st.sampled_from(_pack_modules()))
def test_hom_from_projective_is_the_vertex_space(pm):
    pack, name = pm
    P = load_pack(pack)
    M = P.modules[name]
    for v in range(len(P.algebra.vertices)):
        assert hom_dim(projective(P.algebra, v), M) == M.dims[v]


@given(st.sampled_from(_pack_modules()))
def test_hom_into_injective_is_the_vertex_space(pm):
    pack, name = pm
    P = load_pack(pack)
    M = P.modules[name]
    for v in range(len(P.algebra.vertices)):
        assert hom_dim(M, injective(P.algebra, v)) == M.dims[v]


def test_eximp_projectives(eximp):
    A = eximp.algebra
    assert projective(A, 0).dims == (1, 1, 0)
    assert [projective(A, v).dim for v in range(3)] == [2, 2, 2]
    assert simple(A, 1).dims == (0, 1, 0)


def test_ejp1_injective_is_not_projective(ejp1):
    A = ejp1.algebra
    I2 = injective(A, 1)
    assert not any(isomorphic(I2, projective(A, j)) for j in range(3))


def test_module_axioms_are_checked(eximp):
    A = eximp.algebra
    data = projective(A, 0).to_json()
    Module.from_json(A, data)
    # a nonzero path of length two violates the relation ba = 0
    bad = {"dim": {"1": 1, "2": 1, "3": 1}, "arrows": {"a": [["1"]], "b": [["1"]]}}
    with pytest.raises(InvalidModule):
        Module.from_json(A, bad)


def test_json_round_trip(field):
    for M in load_pack("ejp1", field).modules.values():
        N = Module.from_json(M.algebra, M.to_json())
        assert N.dims == M.dims
        assert all(not np.any(a != b) for a, b in zip(N.gens, M.gens))


def test_kernel_image_cokernel_dimensions(eximp):
    A = eximp.algebra
    P1, S1 = projective(A, 0), simple(A, 0)
    (f,) = hom(P1, S1)
    K, k = kernel(f)
    I, _ = image(f)
    C, _ = cokernel(f)
    assert K.dims == (0, 1, 0) and I.dims == (1, 0, 0) and C.dim == 0
    assert k.is_injective() and not f.after(k).rank()


def test_top_of_projective_is_simple(ejp1):
    A = ejp1.algebra
    for v in range(3):
        assert top(projective(A, v)).dims == simple(A, v).dims


def test_sincere_and_faithful(eximp):
    A = eximp.algebra
    M = eximp["M"]
    assert is_sincere(M) and not is_faithful(M)
    R = direct_sum_module([projective(A, v) for v in range(3)])
    assert is_faithful(R)
    assert annihilator(R).shape[0] == 0


def test_restrict_inflate_round_trip(field):
    M = load_pack("eximp", field)["M"]
    G = gamma(M)
    N = restrict(M, G)
    assert N.dims == M.dims
    back = inflate(N, G)
    assert all(not np.any(a != b) for a, b in zip(back.gens, M.gens))


def test_restrict_requires_annihilation(eximp):
    G = gamma(eximp["M"])
    with pytest.raises(NotAnnihilated):
        restrict(projective(eximp.algebra, 2), G)


def test_dual_swaps_projectives_and_injectives(ejp1):
    A = ejp1.algebra
    for v in range(3):
        D = dual(projective(A, v))
        assert D.algebra is A.opposite()
        assert isomorphic(D, injective(A.opposite(), v))
