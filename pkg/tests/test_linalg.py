from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from silting.linalg import PrimeField, Rationals, field_json, parse_field

F2, F3, F5, Q = PrimeField(2), PrimeField(3), PrimeField(5), Rationals()


def matrices(field, max_side=5):
    bound = field.p - 1 if isinstance(field, PrimeField) else 4
    lo = 0 if isinstance(field, PrimeField) else -4
    return st.integers(0, max_side).flatmap(
        lambda m: st.integers(0, max_side).flatmap(
            lambda n: st.lists(st.integers(lo, bound), min_size=m * n, max_size=m * n).map(
                lambda xs: field.array(np.array(xs, dtype=object).reshape(m, n))
            )
        )
    )


def test_solve_identity():
    x = Q.solve(Q.eye(2), Q.array([1, 0]))
    assert list(x) == [1, 0]


def test_solve_inconsistent_zero_system():
    assert F2.solve(F2.zeros(2, 2), F2.array([1, 0])) is None


def test_solve_upper_triangular_over_f2():
    a = F2.array([[1, 1], [0, 1]])
    x = F2.solve(a, F2.array([0, 1]))
    assert list(x) == [1, 1]


def test_nullspace_examples():
    assert Q.nullspace(Q.eye(3)).shape == (3, 0)
    assert F2.rank(F2.nullspace(F2.zeros(2, 3))) == 3
    a = Q.array([[1, 2, 3]])
    n = Q.nullspace(a)
    assert n.shape == (3, 2) and Q.is_zero(Q.matmul(a, n)) and Q.rank(n) == 2


def test_zero_sized_matrices():
    for f in (F2, Q):
        assert f.rank(f.zeros(0, 4)) == 0
        assert f.nullspace(f.zeros(0, 4)).shape == (4, 4)
        assert f.solve(f.zeros(0, 3), f.zeros(0, 1)).shape == (3, 1)


def test_prime_is_checked():
    with pytest.raises(ValueError):
        PrimeField(4)


def test_field_parsing_round_trip():
    assert parse_field("Q") == Q
    assert parse_field({"Fp": 101}) == PrimeField(101)
    assert parse_field("Fp:7") == PrimeField(7)
    assert field_json(PrimeField(7)) == {"Fp": 7}
    with pytest.raises(ValueError):
        parse_field("R")


def test_scalars_are_canonical():
    assert F5.scalar("-1") == 4
    assert F5.scalar("1/2") == 3
    assert Q.to_str(Q.scalar("6/4")) == "3/2"
    with pytest.raises(ValueError):
        F5.scalar("1/5")


@pytest.mark.parametrize("field", [F2, F3, Q], ids=repr)
@given(data=st.data())
def test_rank_nullity(field, data):
    a = data.draw(matrices(field))
    n = field.nullspace(a)
    assert field.rank(a) + n.shape[1] == a.shape[1]
    assert field.is_zero(field.matmul(a, n))
    assert field.rank(n) == n.shape[1]


@pytest.mark.parametrize("field", [F3, Q], ids=repr)
@given(data=st.data())
def test_solve_is_exact(field, data):
    a = data.draw(matrices(field))
    x0 = field.random_array(np.random.default_rng(data.draw(st.integers(0, 99))), (a.shape[1], 2))
    b = field.matmul(a, x0)
    x = field.solve(a, b)
    assert x is not None
    assert not np.any(field.matmul(a, x) != b)


@given(data=st.data())
def test_rational_rank_matches_sympy(data):
    a = data.draw(matrices(Q))
    expected = sympy.Matrix(a.shape[0], a.shape[1], list(a.reshape(-1))).rank() if a.size else 0
    assert Q.rank(a) == expected


@given(st.lists(st.fractions(max_denominator=50), min_size=1, max_size=6))
def test_rational_strings_round_trip(xs):
    assert [Q.scalar(Q.to_str(Fraction(x))) for x in xs] == [Fraction(x) for x in xs]
