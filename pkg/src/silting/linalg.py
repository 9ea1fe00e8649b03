"""Exact dense linear algebra over a prime field or the rationals.

Matrices are plain numpy arrays. Over F_p they hold canonical
representatives in ``[0, p)`` (int64 when products cannot overflow, Python
ints otherwise); over Q they are object arrays of ``Fraction``.  Every
routine is pure and returns fresh arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np
import sympy

# Largest p for which int64 matmul of moderately sized matrices cannot overflow.
_INT64_PRIME_LIMIT = 1 << 24


class FieldMismatch(ValueError):
    """Raised when scalars of two different fields meet in one computation."""


class Field:
    """Common interface of the two supported base fields."""

    dtype: object = object
    is_finite = False
    characteristic = 0

    # ------------------------------------------------------------------ scalars
    def scalar(self, value):
        raise NotImplementedError

    def to_str(self, value) -> str:
        raise NotImplementedError

    def inv(self, value):
        raise NotImplementedError

    # ------------------------------------------------------------------ arrays
    def array(self, data) -> np.ndarray:
        arr = np.asarray(data, dtype=object)
        out = np.empty(arr.shape, dtype=self.dtype)
        flat_in, flat_out = arr.reshape(-1), out.reshape(-1)
        for k, x in enumerate(flat_in):
            flat_out[k] = self.scalar(x)
        return out

    def zeros(self, *shape) -> np.ndarray:
        return np.zeros(shape, dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = 1
        return out

    def reduce(self, a: np.ndarray) -> np.ndarray:
        """Bring an integer/rational array to canonical form."""
        return a

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] == 0 or b.shape[0] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        return self.reduce(a @ b)

    def chain(self, *mats: np.ndarray) -> np.ndarray:
        """Product of several matrices, left to right."""
        return reduce(self.matmul, mats)

    def is_zero(self, a: np.ndarray) -> bool:
        return not np.any(a != 0)

    def random_array(self, rng: np.random.Generator, shape) -> np.ndarray:
        raise NotImplementedError

    # ----------------------------------------------------------- elimination
    def rref(self, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and the list of pivot columns."""
        raise NotImplementedError

    def rank(self, a: np.ndarray) -> int:
        if a.size == 0:
            return 0
        return len(self.rref(a)[1])

    def nullspace(self, a: np.ndarray) -> np.ndarray:
        """Columns form a basis of ``{x : a x = 0}``."""
        a = np.asarray(a)
        n = a.shape[1]
        if a.shape[0] == 0:
            return self.eye(n)
        r, pivots = self.rref(a)
        pivot_set = set(pivots)
        free = [c for c in range(n) if c not in pivot_set]
        out = self.zeros(n, len(free))
        for j, f in enumerate(free):
            out[f, j] = 1
            for i, p in enumerate(pivots):
                out[p, j] = -r[i, f]
        return self.reduce(out)

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """Some ``x`` with ``a x = b``, or ``None`` when the system is inconsistent.

        Args:
            a: coefficient matrix (m x n).
            b: right-hand sides (m x k); a 1-d array is treated as one column.

        Returns:
            An n x k solution (1-d if ``b`` was 1-d), free variables set to zero.
        """
        vector = b.ndim == 1
        if vector:
            b = b.reshape(-1, 1)
        if a.shape[0] != b.shape[0]:
            raise ValueError("row counts differ")
        m, n = a.shape
        k = b.shape[1]
        if m == 0:
            x = self.zeros(n, k)
            return x.reshape(-1) if vector else x
        aug = np.concatenate([a, b], axis=1).astype(self.dtype)
        r, pivots = self.rref(aug)
        if pivots and pivots[-1] >= n:
            return None
        x = self.zeros(n, k)
        for i, p in enumerate(pivots):
            x[p] = r[i, n:]
        return x.reshape(-1) if vector else x

    def inverse(self, a: np.ndarray) -> np.ndarray | None:
        n = a.shape[0]
        if a.shape != (n, n):
            return None
        if n == 0:
            return self.zeros(0, 0)
        x = self.solve(a, self.eye(n))
        if x is None or self.rank(a) < n:
            return None
        return x

    def is_invertible(self, a: np.ndarray) -> bool:
        n = a.shape[0]
        return a.shape == (n, n) and self.rank(a) == n

    # ------------------------------------------------------------ subspaces
    def row_basis(self, rows: np.ndarray) -> np.ndarray:
        """Rows of the reduced echelon form: a canonical basis of the row space."""
        if rows.shape[0] == 0:
            return rows
        r, pivots = self.rref(rows)
        return r[: len(pivots)]

    def column_basis(self, a: np.ndarray) -> np.ndarray:
        """Linearly independent columns of ``a`` spanning its column space."""
        if a.shape[1] == 0:
            return a
        _, pivots = self.rref(a)
        return a[:, pivots]

    def complement(self, sub: np.ndarray, n: int) -> np.ndarray:
        """Standard basis columns completing the columns of ``sub`` to a basis of k^n."""
        if sub.shape[1] == 0:
            return self.eye(n)
        _, pivots = self.rref(sub.T)
        chosen = [c for c in range(n) if c not in set(pivots)]
        out = self.zeros(n, len(chosen))
        for j, c in enumerate(chosen):
            out[c, j] = 1
        return out

    def in_span(self, basis_cols: np.ndarray, vec: np.ndarray) -> bool:
        return self.solve(basis_cols, vec) is not None


@dataclass(frozen=True)
class PrimeField(Field):
    """The field with ``p`` elements."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not sympy.isprime(self.p):
            raise ValueError(f"{self.p!r} is not a prime")

    @property
    def dtype(self):
        return np.int64 if self.p < _INT64_PRIME_LIMIT else object

    is_finite = True

    @property
    def characteristic(self):
        return self.p

    def __repr__(self):
        return f"F{self.p}"

    def scalar(self, value):
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ValueError(f"{value} has no image in F_{self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def to_str(self, value) -> str:
        return str(int(value) % self.p)

    def inv(self, value):
        return pow(int(value), -1, self.p)

    def array(self, data) -> np.ndarray:
        arr = np.asarray(data, dtype=object)
        if arr.size and any(isinstance(x, (str, Fraction)) for x in arr.reshape(-1)):
            return super().array(data)
        return (arr.astype(object) % self.p).astype(self.dtype)

    def reduce(self, a):
        return np.asarray(a) % self.p

    def random_array(self, rng, shape):
        return rng.integers(0, self.p, size=shape).astype(self.dtype)

    def rref(self, a):
        p = self.p
        r = np.array(a, dtype=self.dtype) % p
        m, n = r.shape
        pivots: list[int] = []
        row = 0
        for col in range(n):
            if row == m:
                break
            nz = np.nonzero(r[row:, col])[0]
            if nz.size == 0:
                continue
            piv = row + int(nz[0])
            if piv != row:
                r[[row, piv]] = r[[piv, row]]
            inv = pow(int(r[row, col]), -1, p)
            if inv != 1:
                r[row, col:] = r[row, col:] * inv % p
            others = np.nonzero(r[:, col])[0]
            others = others[others != row]
            if others.size:
                factors = r[others, col].reshape(-1, 1)
                r[others, col:] = (r[others, col:] - factors * r[row, col:]) % p
            pivots.append(col)
            row += 1
        return r, pivots


@dataclass(frozen=True)
class Rationals(Field):
    """The rational numbers with exact ``Fraction`` entries."""

    dtype = object

    def __repr__(self):
        return "Q"

    def scalar(self, value):
        if isinstance(value, (np.integer,)):
            value = int(value)
        return Fraction(value)

    def to_str(self, value) -> str:
        return str(Fraction(value))

    def inv(self, value):
        return 1 / Fraction(value)

    def random_array(self, rng, shape):
        vals = rng.integers(-3, 4, size=shape)
        return self.array(vals)

    def reduce(self, a):
        out = np.asarray(a, dtype=object)
        return out.item() if out.ndim == 0 else out

    def rref(self, a):
        a = np.asarray(a, dtype=object)
        m, n = a.shape
        # Clear denominators row by row, then eliminate over the integers.
        r = np.empty((m, n), dtype=object)
        for i in range(m):
            row = [Fraction(x) for x in a[i]]
            den = reduce(math.lcm, (x.denominator for x in row), 1)
            r[i] = [x.numerator * (den // x.denominator) for x in row]
        pivots: list[int] = []
        row = 0
        for col in range(n):
            if row == m:
                break
            nz = [i for i in range(row, m) if r[i, col] != 0]
            if not nz:
                continue
            piv = min(nz, key=lambda i: abs(r[i, col]))
            if piv != row:
                r[[row, piv]] = r[[piv, row]]
            lead = r[row, col]
            for i in range(m):
                if i != row and r[i, col] != 0:
                    r[i] = lead * r[i] - r[i, col] * r[row]
                    g = reduce(math.gcd, (int(x) for x in r[i]), 0)
                    if g > 1:
                        r[i] = r[i] // g
            pivots.append(col)
            row += 1
        out = np.empty((m, n), dtype=object)
        for i in range(m):
            if i < len(pivots):
                lead = r[i, pivots[i]]
                out[i] = [Fraction(int(x), int(lead)) for x in r[i]]
            else:
                out[i] = [Fraction(0)] * n
        return out, pivots


def parse_field(value) -> Field:
    """Field from the JSON form (``"Q"`` or ``{"Fp": p}``) or the CLI form (``Fp:<p>``)."""
    if isinstance(value, Field):
        return value
    if value == "Q":
        return Rationals()
    if isinstance(value, dict) and set(value) == {"Fp"}:
        return PrimeField(int(value["Fp"]))
    if isinstance(value, str) and value.startswith("Fp:"):
        return PrimeField(int(value[3:]))
    raise ValueError(f"unrecognised field {value!r}")


def field_json(field: Field):
    return "Q" if isinstance(field, Rationals) else {"Fp": field.p}


def check_same_field(*fields: Field) -> Field:
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise FieldMismatch(f"{first!r} vs {f!r}")
    return first


def block_diag(field: Field, blocks: list[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = field.zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def matrix_power(field: Field, a: np.ndarray, k: int) -> np.ndarray:
    result = field.eye(a.shape[0])
    base = a
    while k:
        if k & 1:
            result = field.matmul(result, base)
        k >>= 1
        if k:
            base = field.matmul(base, base)
    return result
