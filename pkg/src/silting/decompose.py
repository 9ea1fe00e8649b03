"""Krull-Schmidt bookkeeping: local endomorphism rings, splittings, iso tests.

A module is certified indecomposable when its endomorphism algebra E is
local.  We compute a nilpotent two-sided ideal J of E (the trace-form kernel
over Q, the Ronyai iteration over F_p; both are re-validated) and then look
at E/J: E is local iff every element of E/J is nilpotent or invertible.  Over
F_p this is checked exhaustively when E/J is small; over Q only
``dim E/J = 1`` is accepted.  An element that is neither nilpotent nor
invertible lifts to an endomorphism phi of M whose Fitting decomposition
``M = ker(phi^N) + im(phi^N)`` is a proper splitting.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np
import sympy

from .algebra import BasedAlgebra
from .linalg import Field, PrimeField, Rationals, matrix_power
from .modules import Module, ModuleMap, direct_sum, hom_basis, submodule, _same_algebra

# Largest |E/J| searched exhaustively over a finite field.
EXHAUSTIVE_LIMIT = 1 << 12
RANDOM_TRIALS = 24


class DecompositionInconclusive(RuntimeError):
    def __init__(self, message: str, partial: list | None = None):
        super().__init__(message)
        self.partial = partial or []


class IsoTestInconclusive(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Finite-dimensional algebras spanned by matrices
# ---------------------------------------------------------------------------


class MatrixAlgebra:
    """A unital subalgebra of n x n matrices given by a basis.

    Coordinates of a matrix in the basis are read off a fixed set of entries
    on which the basis is independent.
    """

    def __init__(self, field: Field, mats: list[np.ndarray]):
        self.field = field
        self.mats = mats
        self.d = len(mats)
        self.n = mats[0].shape[0] if mats else 0
        f = field
        if self.d:
            B = np.stack([m.reshape(-1) for m in mats], axis=1)  # n^2 x d
            _, rows = f.rref(np.ascontiguousarray(B.T))
            assert len(rows) == self.d, "matrices are not independent"
            self._rows = rows
            self._inv = f.inverse(B[rows, :])
        self._struct: np.ndarray | None = None

    def coords(self, m: np.ndarray) -> np.ndarray:
        return self.field.matmul(self._inv, m.reshape(-1)[self._rows].reshape(-1, 1)).reshape(-1)

    def element(self, c: np.ndarray) -> np.ndarray:
        f = self.field
        out = f.zeros(self.n, self.n)
        for ci, m in zip(c, self.mats):
            if ci != 0:
                out = out + ci * m
        return f.reduce(out)

    @property
    def struct(self) -> np.ndarray:
        """Structure constants C[i, j, k] of m_i m_j."""
        if self._struct is None:
            f = self.field
            C = f.zeros(self.d, self.d, self.d)
            for i, a in enumerate(self.mats):
                for j, b in enumerate(self.mats):
                    C[i, j] = self.coords(f.matmul(a, b))
            self._struct = C
        return self._struct

    def identity(self) -> np.ndarray:
        return self.coords(self.field.eye(self.n))

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        t = (x @ self.struct.reshape(self.d, -1)).reshape(self.d, self.d)
        return self.field.reduce(y @ t)


def _trace_radical(E: MatrixAlgebra) -> np.ndarray:
    f = E.field
    G = f.zeros(E.d, E.d)
    for i, a in enumerate(E.mats):
        for j, b in enumerate(E.mats):
            G[i, j] = np.trace(f.matmul(a, b))
    return np.ascontiguousarray(f.nullspace(f.reduce(G)).T)


def _ronyai_radical(E: MatrixAlgebra) -> np.ndarray:
    """Radical over F_p via iterated trace functionals on integer lifts."""
    f: PrimeField = E.field
    p = f.p
    l = int(math.floor(math.log(E.n, p))) if E.n > 1 else 0
    current = f.eye(E.d)  # rows: coefficient vectors spanning I_{i-1}
    for i in range(l + 1):
        if current.shape[0] == 0:
            break
        modulus = p ** (i + 1)
        G = f.zeros(current.shape[0], E.d)
        for r, c in enumerate(current):
            a = E.element(c)
            for k, b in enumerate(E.mats):
                x = f.matmul(a, b).astype(object)
                power = _int_matrix_power(x, p**i, modulus)
                tr = int(np.trace(power)) % modulus
                if tr % (p**i):
                    raise ArithmeticError("trace functional not defined on this ideal")
                G[r, k] = (tr // p**i) % p
        null = f.nullspace(np.ascontiguousarray(G.T))  # y with y^T G = 0
        current = f.reduce(np.ascontiguousarray(null.T) @ current) if null.shape[1] else f.zeros(0, E.d)
        current = f.row_basis(current) if current.shape[0] else current
    return current


def _int_matrix_power(x: np.ndarray, k: int, modulus: int) -> np.ndarray:
    result = np.eye(x.shape[0], dtype=object)
    base = x % modulus
    while k:
        if k & 1:
            result = (result @ base) % modulus
        k >>= 1
        if k:
            base = (base @ base) % modulus
    return result


def _is_nilpotent_ideal(E: MatrixAlgebra, J: np.ndarray) -> bool:
    f = E.field
    k = J.shape[0]
    if k == 0:
        return True
    span = np.ascontiguousarray(J.T)
    for c in J:
        for b in range(E.d):
            e = f.zeros(E.d)
            e[b] = 1
            for prod in (E.mul(c, e), E.mul(e, c)):
                if not f.in_span(span, prod):
                    return False
    power = J
    for _ in range(E.d + 1):
        prods = [E.mul(x, y) for x in power for y in J]
        prods = [p for p in prods if np.any(p != 0)]
        if not prods:
            return True
        power = f.row_basis(np.stack(prods))
    return False


def nilpotent_ideal(E: MatrixAlgebra) -> tuple[np.ndarray, str]:
    """A validated nilpotent two-sided ideal of E (the radical when the method is exact)."""
    f = E.field
    try:
        J = _trace_radical(E) if isinstance(f, Rationals) else _ronyai_radical(E)
        method = "trace-form" if isinstance(f, Rationals) else "ronyai"
    except ArithmeticError:
        J, method = f.zeros(0, E.d), "zero"
    if not _is_nilpotent_ideal(E, J):
        J, method = f.zeros(0, E.d), "zero"
    return J, method


@dataclass
class Semisimple:
    """E / J with coordinates relative to representatives of a complement of J."""

    E: MatrixAlgebra
    J: np.ndarray
    reps: list[int]  # E-basis indices spanning a complement of J
    proj: np.ndarray  # d x dbar: E-coordinates -> E/J-coordinates
    struct: np.ndarray  # dbar^3
    one: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.reps)

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        return self.E.field.reduce(np.einsum("a,abk->kb", x, self.struct))

    def is_nilpotent(self, x: np.ndarray) -> bool:
        return self.E.field.is_zero(matrix_power(self.E.field, self.left_matrix(x), self.dim))

    def is_invertible(self, x: np.ndarray) -> bool:
        return self.E.field.rank(self.left_matrix(x)) == self.dim

    def lift(self, x: np.ndarray) -> np.ndarray:
        c = self.E.field.zeros(self.E.d)
        c[self.reps] = x
        return c


def semisimple_quotient(E: MatrixAlgebra, J: np.ndarray) -> Semisimple:
    f = E.field
    Jcols = np.ascontiguousarray(J.T) if J.shape[0] else f.zeros(E.d, 0)
    comp = f.complement(Jcols, E.d)
    reps = [int(np.nonzero(comp[:, j])[0][0]) for j in range(comp.shape[1])]
    change = np.concatenate([comp, Jcols], axis=1).astype(f.dtype)
    inv = f.inverse(change)
    proj = np.ascontiguousarray(inv[: len(reps), :].T)  # d x dbar
    C = E.struct
    dbar = len(reps)
    S = f.zeros(dbar, dbar, dbar)
    for a, ra in enumerate(reps):
        for b, rb in enumerate(reps):
            S[a, b] = f.reduce(C[ra, rb] @ proj)
    one = f.reduce(E.identity() @ proj)
    return Semisimple(E, J, reps, proj, S, one)


def _eigenvalues(field: Field, m: np.ndarray) -> list:
    n = m.shape[0]
    if isinstance(field, PrimeField) and field.p <= 257:
        return [lam for lam in range(field.p) if field.rank(field.reduce(m - lam * field.eye(n))) < n]
    x = sympy.Symbol("x")
    if isinstance(field, PrimeField):
        mat = sympy.Matrix(m.tolist())
        poly = sympy.Poly(mat.charpoly(x).as_expr(), x, modulus=field.p)
        return [int(r) % field.p for r in poly.ground_roots()]
    mat = sympy.Matrix([[sympy.Rational(Fraction(v).numerator, Fraction(v).denominator) for v in row] for row in m])
    poly = sympy.Poly(mat.charpoly(x).as_expr(), x)
    return [Fraction(int(r.p), int(r.q)) for r in poly.ground_roots()]


def find_non_local_element(S: Semisimple, rng: np.random.Generator) -> tuple[np.ndarray | None, bool]:
    """Search E/J for an element neither nilpotent nor invertible.

    Returns:
        (element or None, exhaustive) where ``exhaustive`` says the search
        covered all of E/J.
    """
    f = S.E.field
    dbar = S.dim

    def good(x):
        return not S.is_invertible(x) and not S.is_nilpotent(x)

    candidates = []
    for a in range(dbar):
        e = f.zeros(dbar)
        e[a] = 1
        candidates.append(e)
    for _ in range(RANDOM_TRIALS):
        candidates.append(f.random_array(rng, dbar))
    for x in candidates:
        if good(x):
            return x, False
        for lam in _eigenvalues(f, S.left_matrix(x)):
            y = f.reduce(x - lam * S.one)
            if good(y):
                return y, False
    if isinstance(f, PrimeField) and f.p**dbar <= EXHAUSTIVE_LIMIT:
        for tup in itertools.product(range(f.p), repeat=dbar):
            x = np.array(tup, dtype=f.dtype)
            if good(x):
                return x, True
        return None, True
    return None, False


@dataclass
class LocalityResult:
    local: bool | None  # None = undecided
    certificate: dict
    splitter: np.ndarray | None = None  # E-coordinates of a non-local element


def locality(E: MatrixAlgebra, seed: int = 0) -> LocalityResult:
    """Decide whether E is a local algebra, with a certificate."""
    f = E.field
    if E.d == 0:
        return LocalityResult(False, {"reason": "zero algebra"})
    if E.d == 1:
        return LocalityResult(True, {"dim_end": 1, "dim_top": 1, "method": "scalar"})
    J, method = nilpotent_ideal(E)
    S = semisimple_quotient(E, J)
    cert = {"dim_end": E.d, "dim_nilpotent_ideal": J.shape[0], "dim_top": S.dim, "method": method}
    if S.dim == 1:
        return LocalityResult(True, cert)
    x, exhaustive = find_non_local_element(S, np.random.default_rng(seed))
    if x is not None:
        return LocalityResult(False, cert | {"splitter": [f.to_str(v) for v in x]}, S.lift(x))
    if exhaustive:
        return LocalityResult(True, cert | {"exhaustive": True})
    return LocalityResult(None, cert | {"budget": RANDOM_TRIALS})


# ---------------------------------------------------------------------------
# Modules
# ---------------------------------------------------------------------------


def end_matrix_algebra(M: Module) -> MatrixAlgebra:
    key = "end_alg"
    if key not in M.cache:
        M.cache[key] = MatrixAlgebra(M.field, hom_basis(M, M))
    return M.cache[key]


def module_locality(M: Module, seed: int = 0) -> LocalityResult:
    key = ("locality", seed)
    if key not in M.cache:
        M.cache[key] = locality(end_matrix_algebra(M), seed)
    return M.cache[key]


def fitting_split(M: Module, phi: np.ndarray) -> tuple[tuple[Module, np.ndarray, np.ndarray], tuple[Module, np.ndarray, np.ndarray]]:
    """M = ker(phi^N) + im(phi^N); each part with its inclusion and projection matrices."""
    f = M.field
    psi = matrix_power(f, phi, max(M.dim, 1))
    r = M.algebra.num_vertices
    kb, ib = [], []
    for v in range(r):
        blk = psi[M.sl(v), M.sl(v)]
        kb.append(f.nullspace(blk) if M.dims[v] else f.zeros(0, 0))
        ib.append(f.column_basis(blk))
    K, kin = submodule(M, kb)
    I, iin = submodule(M, ib)
    kpr = f.zeros(K.dim, M.dim)
    ipr = f.zeros(I.dim, M.dim)
    for v in range(r):
        change = np.concatenate([kb[v], ib[v]], axis=1).astype(f.dtype)
        if change.shape[0] == 0:
            continue
        inv = f.inverse(change)
        assert inv is not None, "Fitting parts are not complementary"
        nk = kb[v].shape[1]
        kpr[K.sl(v), M.sl(v)] = inv[:nk]
        ipr[I.sl(v), M.sl(v)] = inv[nk:]
    return (K, kin, kpr), (I, iin, ipr)


@dataclass
class Decomposition:
    """M = direct sum of ``parts``; ``incl[k]``/``proj[k]`` are the structure maps."""

    module: Module
    parts: list[Module]
    incl: list[np.ndarray]
    proj: list[np.ndarray]
    certificates: list[dict] = dc_field(default_factory=list)


def decomposition(M: Module, seed: int = 0) -> Decomposition:
    """Split M into indecomposables by repeated Fitting splittings.

    Raises:
        DecompositionInconclusive: when locality of some part cannot be settled.
    """
    key = ("decomposition", seed)
    if key in M.cache:
        return M.cache[key]
    f = M.field
    if "summands" in M.cache:
        # a direct sum built by direct_sum: decompose the summands and transport
        out = Decomposition(M, [], [], [], [])
        for X, inc, pr in zip(*M.cache["summands"]):
            sub = decomposition(X, seed)
            out.parts += sub.parts
            out.incl += [f.matmul(inc, i) for i in sub.incl]
            out.proj += [f.matmul(p, pr) for p in sub.proj]
            out.certificates += sub.certificates
        M.cache[key] = out
        return out
    done: list[tuple[Module, np.ndarray, np.ndarray, dict]] = []
    stack = [(M, f.eye(M.dim), f.eye(M.dim))]
    while stack:
        X, inc, pr = stack.pop()
        if X.dim == 0:
            continue
        res = locality(end_matrix_algebra(X), seed)
        if res.local is True:
            done.append((X, inc, pr, res.certificate))
            continue
        if res.local is None:
            raise DecompositionInconclusive(
                f"could not decide locality of End of a {X.dim}-dimensional part", [d[0] for d in done]
            )
        phi = end_matrix_algebra(X).element(res.splitter)
        (K, kin, kpr), (I, iin, ipr) = fitting_split(X, phi)
        assert K.dim and I.dim, "splitting element produced a trivial Fitting decomposition"
        # push in reverse so parts come out in a stable order
        stack.append((I, f.matmul(inc, iin), f.matmul(ipr, pr)))
        stack.append((K, f.matmul(inc, kin), f.matmul(kpr, pr)))
    out = Decomposition(M, [d[0] for d in done], [d[1] for d in done], [d[2] for d in done], [d[3] for d in done])
    if len(out.parts) > 1:
        for k, P in enumerate(out.parts):
            P.name = f"{M.name}[{k}]" if M.name else ""
    M.cache[key] = out
    return out


def decompose(M: Module, seed: int = 0) -> list[Module]:
    return decomposition(M, seed).parts


def is_indecomposable(M: Module, seed: int = 0) -> bool | None:
    """True/False when certified; None when the budget ran out."""
    if M.dim == 0:
        return False
    return module_locality(M, seed).local


def _indecomposable_iso(A: Module, B: Module) -> np.ndarray | None:
    """For indecomposable A, B: an isomorphism A -> B, or None (exact)."""
    if A.dims != B.dims:
        return None
    f = A.field
    H = hom_basis(A, B)
    G = hom_basis(B, A)
    for h in H:
        for g in G:
            if f.is_invertible(f.matmul(g, h)):
                return h
    return None


def is_iso(M: Module, N: Module, seed: int = 0) -> tuple[bool, np.ndarray | None]:
    """Decide M ~ N; on success also return an isomorphism matrix (N.dim x M.dim).

    Raises:
        IsoTestInconclusive: only if decomposition of either module is undecided.
    """
    _same_algebra(M, N)
    f = M.field
    if M.dims != N.dims:
        return False, None
    if M.dim == 0:
        return True, f.zeros(0, 0)
    H = hom_basis(M, N)
    if not H:
        return False, None
    rng = np.random.default_rng(seed)
    trials = list(H)
    for _ in range(8):
        coeffs = f.random_array(rng, len(H))
        trials.append(f.reduce(sum(c * h for c, h in zip(coeffs, H))))
    for t in trials:
        if f.is_invertible(t):
            return True, t
    if isinstance(f, PrimeField) and f.p ** len(H) <= EXHAUSTIVE_LIMIT:
        for tup in itertools.product(range(f.p), repeat=len(H)):
            t = f.reduce(sum(c * h for c, h in zip(tup, H)))
            if f.is_invertible(t):
                return True, t
        return False, None
    try:
        dm, dn = decomposition(M, seed), decomposition(N, seed)
    except DecompositionInconclusive as exc:
        raise IsoTestInconclusive(str(exc)) from exc
    if len(dm.parts) != len(dn.parts):
        return False, None
    unused = list(range(len(dn.parts)))
    witness = f.zeros(N.dim, M.dim)
    for k, P in enumerate(dm.parts):
        for j in unused:
            h = _indecomposable_iso(P, dn.parts[j])
            if h is not None:
                witness = witness + f.chain(dn.incl[j], h, dm.proj[k])
                unused.remove(j)
                break
        else:
            return False, None
    return True, f.reduce(witness)


def isomorphic(M: Module, N: Module, seed: int = 0) -> bool:
    return is_iso(M, N, seed)[0]


def iso_classes(mods: list[Module], seed: int = 0) -> list[list[int]]:
    """Group indices of modules into isomorphism classes (order of first appearance)."""
    classes: list[list[int]] = []
    for i, M in enumerate(mods):
        for cls in classes:
            if isomorphic(mods[cls[0]], M, seed):
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes


def basic_summands(M: Module, seed: int = 0) -> list[Module]:
    """One indecomposable summand of M from each isomorphism class."""
    key = ("basic", seed)
    if key not in M.cache:
        parts = decompose(M, seed)
        M.cache[key] = [parts[c[0]] for c in iso_classes(parts, seed)]
    return M.cache[key]


def rank_of(M: Module, seed: int = 0) -> int:
    """rk(M): number of isomorphism classes of indecomposable summands."""
    return len(basic_summands(M, seed))


def algebra_rank(A: BasedAlgebra) -> int:
    """rk(A): isomorphism classes of indecomposable projectives (idempotent images may coincide)."""
    from .modules import projective

    return len(iso_classes([projective(A, v) for v in range(A.num_vertices)]))


def in_add(X: Module, M: Module, seed: int = 0) -> bool:
    """X is a direct summand of a finite direct sum of copies of M."""
    if X.dim == 0:
        return True
    gens = basic_summands(M, seed)
    return all(any(isomorphic(P, G, seed) for G in gens) for P in decompose(X, seed))


# ---------------------------------------------------------------------------
# Endomorphism algebras
# ---------------------------------------------------------------------------


def end_algebra(M: Module, seed: int = 0) -> BasedAlgebra:
    """End(M) as a based algebra; product is composition (f * g = f o g).

    The primitive idempotents are the projections onto the indecomposable
    summands of a decomposition; ``iso_classes`` on the result groups them.
    Every non-idempotent basis element is its own generator.
    """
    f = M.field
    dec = decomposition(M, seed)
    s = len(dec.parts)
    maps: list[np.ndarray] = []
    left, right, idem, radical = [], [], [], []
    E_full = end_matrix_algebra(M) if M.dim else None
    J_full = None
    if E_full is not None:
        J, _ = nilpotent_ideal(E_full)
        J_full = [E_full.element(c) for c in J]
    for i in range(s):
        for j in range(s):
            block = [f.chain(dec.incl[i], h, dec.proj[j]) for h in hom_basis(dec.parts[j], dec.parts[i])]
            # radical part of this block: intersect with J via the projection e_i J e_j
            jb = [f.chain(dec.incl[i], dec.proj[i], x, dec.incl[j], dec.proj[j]) for x in (J_full or [])]
            jb = _independent(f, jb)
            rest = [m for m in block]
            if i == j:
                ident = f.matmul(dec.incl[i], dec.proj[i])
                rest = [ident] + rest
            chosen_top = []
            current = list(jb)
            for m in rest:
                if _rank(f, current + [m]) > len(current):
                    chosen_top.append(m)
                    current.append(m)
            for m in chosen_top:
                if i == j and m is chosen_top[0]:
                    idem.append(len(maps))
                maps.append(m)
                left.append(i)
                right.append(j)
            for m in jb:
                radical.append(len(maps))
                maps.append(m)
                left.append(i)
                right.append(j)
    E = MatrixAlgebra(f, maps)
    C = E.struct
    labels = [("e" if k in idem else "f") + f"{k}" for k in range(len(maps))]
    gens, words = [], []
    for k in range(len(maps)):
        if k in idem:
            words.append(None)
        else:
            v = f.zeros(len(maps))
            v[k] = 1
            words.append((len(gens),))
            gens.append((labels[k], v))
    out = BasedAlgebra(f, labels, C, [str(i) for i in range(s)], idem, left, right, radical, gens, words, name=f"End({M.name})")
    out.summand_maps = maps
    out.summands = dec.parts
    return out


def _rank(f: Field, mats: list[np.ndarray]) -> int:
    if not mats:
        return 0
    return f.rank(np.stack([m.reshape(-1) for m in mats]))


def _independent(f: Field, mats: list[np.ndarray]) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for m in mats:
        if np.any(m != 0) and _rank(f, out + [m]) > len(out):
            out.append(m)
    return out
