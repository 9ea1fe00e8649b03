import numpy as np
from hypothesis import given, strategies as st

from silting.decompose import (
    algebra_rank,
    basic_summands,
    decompose,
    end_algebra,
    in_add,
    is_indecomposable,
    is_iso,
    isomorphic,
    module_locality,
    rank_of,
)
from silting.fixtures import load_pack
from silting.linalg import block_diag
from silting.modules import Module, direct_sum_module, power, projective

PACKS = ("eximp", "ejp1", "radsq3")


def _ind(pack):
    P = load_pack(pack)
    return [P.modules[k] for k in P.indecomposables]


def _scramble(M: Module, rng: np.random.Generator) -> Module:
    """Conjugate M by a random invertible change of basis at each vertex."""
    f = M.field
    blocks = []
    for d in M.dims:
        T = f.random_array(rng, (d, d))
        while not f.is_invertible(T):
            T = f.random_array(rng, (d, d))
        blocks.append(T)
    T = block_diag(f, blocks)
    Ti = f.inverse(T)
    return Module(M.algebra, M.dims, [f.chain(T, g, Ti) for g in M.gens])


def test_fixture_indecomposables_are_indecomposable_and_distinct():
    for pack in PACKS:
        mods = _ind(pack)
        assert all(is_indecomposable(M) for M in mods)
        for i, X in enumerate(mods):
            for Y in mods[i + 1:]:
                assert not isomorphic(X, Y)


@given(st.sampled_from(PACKS), st.lists(st.integers(0, 12), min_size=1, max_size=4), st.integers(0, 2**32 - 1))
def test_decompose_round_trip(pack, picks, seed):
    mods = _ind(pack)
    parts = [mods[i % len(mods)] for i in picks]
    M = _scramble(direct_sum_module(parts), np.random.default_rng(seed))
    found = decompose(M, seed=seed)
    assert sum(X.dim for X in found) == M.dim
    assert len(found) == len(parts)
    remaining = list(parts)
    for X in found:
        j = next(j for j, Y in enumerate(remaining) if isomorphic(X, Y))
        remaining.pop(j)


def test_is_iso_returns_a_certificate(eximp):
    M = eximp["M"]
    N = _scramble(M, np.random.default_rng(3))
    ok, T = is_iso(M, N)
    assert ok
    f = M.field
    assert f.is_invertible(T)
    for g, h in zip(M.gens, N.gens):
        assert f.is_zero(f.reduce(f.matmul(T, g) - f.matmul(h, T)))


def test_rank_counts_basic_summands(eximp):
    A = eximp.algebra
    P2 = projective(A, 1)
    assert rank_of(power(P2, 3)) == 1
    assert rank_of(eximp["M"]) == 3
    assert algebra_rank(A) == 3
    assert len(basic_summands(direct_sum_module([P2, P2, eximp.modules["S1"]]))) == 2


def test_in_add(eximp):
    M = eximp["M"]
    assert in_add(eximp.modules["S1"], M)
    assert not in_add(eximp.modules["P3"], M)


def test_local_endomorphism_ring(radsq3):
    for k in radsq3.indecomposables:
        assert module_locality(radsq3.modules[k]).local


def test_end_algebra_of_projective_generator(eximp):
    A = eximp.algebra
    E = end_algebra(direct_sum_module([projective(A, v) for v in range(3)]))
    assert E.dim == A.dim
