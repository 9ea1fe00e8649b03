"""Bounded complexes of projectives and the homotopy category K^b(proj A).

A complex stores, for each degree in its window, the vertices of the
indecomposable projective summands of that term, and each differential
``d^k: P^k -> P^{k+1}`` as a projective map array (see :mod:`projmaps`).
Morphisms are degree-0 chain maps; maps into a shift ``Q[i]`` are maps into
the complex ``shift(Q, i)``.

Conventions: ``X[1]^k = X^{k+1}`` with differential ``-d_X``; the cone of
``f: X -> Y`` has ``C^k = X^{k+1} + Y^k`` and
``d_C^k = [[-d_X^{k+1}, 0], [f^{k+1}, d_Y^k]]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import projmaps as pm
from .algebra import BasedAlgebra
from .decompose import decompose
from .homology import format_projective, min_resolution
from .modules import Module, ModuleMap, cokernel, kernel, projective_sum
from .verdict import Verdict


# ---------------------------------------------------------------------------
# Complexes
# ---------------------------------------------------------------------------


class ProjComplex:
    """A bounded cochain complex of finitely generated projectives.

    Args:
        algebra: the algebra A.
        lo: degree of the first listed term.
        terms: ``terms[k]`` lists the vertices of the summands of ``P^{lo+k}``.
        diffs: ``diffs[k]`` is ``d^{lo+k}``, of shape
            ``(len(terms[k+1]), len(terms[k]), A.dim)``.
        name: display name.
        summands: optional decomposition into complexes whose direct sum is
            this one (in order); used to minimise add-approximations.
        origin: optional tag, e.g. ``("resolution", n)`` for P_{>=-n}(M).
    """

    def __init__(
        self,
        algebra: BasedAlgebra,
        lo: int,
        terms: Sequence[Sequence[int]],
        diffs: Sequence[np.ndarray],
        name: str = "",
        summands: list["ProjComplex"] | None = None,
        origin: tuple | None = None,
        check: bool = True,
    ):
        terms = [tuple(int(v) for v in t) for t in terms]
        diffs = list(diffs)
        if len(diffs) != max(len(terms) - 1, 0):
            raise ValueError("need one differential between consecutive terms")
        # strip zero terms at both ends
        while terms and not terms[0]:
            terms.pop(0)
            if diffs:
                diffs.pop(0)
            lo += 1
        while terms and not terms[-1]:
            terms.pop()
            if diffs:
                diffs.pop()
        self.algebra = algebra
        self.lo = lo if terms else 0
        self.terms = terms
        self.diffs = diffs
        self.name = name
        self.summands = summands
        self.origin = origin
        self.cache: dict = {}
        if check:
            self.check()

    # ----------------------------------------------------------------- layout
    @property
    def hi(self) -> int:
        return self.lo + len(self.terms) - 1

    @property
    def length(self) -> int:
        """l(P) = b - a + 1 for the window [a, b]; 0 for the zero complex."""
        return len(self.terms)

    def is_zero_complex(self) -> bool:
        return not self.terms

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def term(self, k: int) -> tuple[int, ...]:
        if self.terms and self.lo <= k <= self.hi:
            return self.terms[k - self.lo]
        return ()

    def d(self, k: int) -> np.ndarray:
        """d^k: P^k -> P^{k+1} (a zero array outside the window)."""
        if self.terms and self.lo <= k < self.hi:
            return self.diffs[k - self.lo]
        return pm.zero(self.algebra, self.term(k), self.term(k + 1))

    def summand_list(self) -> list["ProjComplex"]:
        return list(self.summands) if self.summands else ([self] if self.terms else [])

    def shape(self) -> str:
        if not self.terms:
            return "0"
        return "  ".join(f"{k}:{format_projective(self.algebra, self.term(k))}" for k in self.degrees())

    def __repr__(self):
        return f"ProjComplex({self.name or '?'}, {self.shape()})"

    def check(self) -> None:
        """Shapes, grading of the differential blocks and d^2 = 0."""
        A = self.algebra
        f = A.field
        for k in self.degrees():
            d = self.d(k)
            src, tgt = self.term(k), self.term(k + 1)
            if d.shape != (len(tgt), len(src), A.dim):
                raise ValueError(f"d^{k} has shape {d.shape}")
            if np.any(d[~pm.mask(A, src, tgt)] != 0):
                raise ValueError(f"d^{k} does not respect the vertex grading")
        for k in range(self.lo, self.hi - 1):
            if not f.is_zero(pm.compose(A, self.d(k), self.d(k + 1))):
                raise ValueError(f"d^{k + 1} o d^{k} != 0")

    # -------------------------------------------------------------------- I/O
    def to_json(self) -> dict:
        A = self.algebra
        f = A.field
        return {
            "lo": self.lo,
            "terms": [[A.vertices[v] for v in t] for t in self.terms],
            "diffs": [
                [[{A.labels[z]: f.to_str(x[z]) for z in np.nonzero(x)[0]} for x in row] for row in d]
                for d in self.diffs
            ],
        }

    @classmethod
    def from_json(cls, A: BasedAlgebra, data: dict, name: str = "") -> "ProjComplex":
        f = A.field
        terms = [[A.vertex_index(str(v)) for v in t] for t in data["terms"]]
        label_index = {lab: i for i, lab in enumerate(A.labels)}
        diffs = []
        for k, blocks in enumerate(data.get("diffs", [])):
            d = pm.zero(A, terms[k], terms[k + 1])
            for r, row in enumerate(blocks):
                for c, entry in enumerate(row):
                    for lab, x in entry.items():
                        d[r, c, label_index[lab]] = f.scalar(x)
            diffs.append(f.reduce(d))
        return cls(A, int(data.get("lo", 0)), terms, diffs, name=name)


def zero_complex(A: BasedAlgebra) -> ProjComplex:
    return ProjComplex(A, 0, [], [], name="0")


def stalk(A: BasedAlgebra, verts: Sequence[int], degree: int = 0, name: str = "") -> ProjComplex:
    """The projective sum of ``verts`` concentrated in ``degree``."""
    verts = tuple(verts)
    summands = [ProjComplex(A, degree, [(v,)], [], name=f"P({A.vertices[v]})") for v in verts] if len(verts) > 1 else None
    return ProjComplex(A, degree, [verts], [], name=name or format_projective(A, verts), summands=summands)


def regular_complex(A: BasedAlgebra) -> ProjComplex:
    """A[0]."""
    return stalk(A, range(A.num_vertices), 0, name="A[0]")


def from_resolution(M: Module, n: int, split: bool = True) -> ProjComplex:
    """P_{>=-n}(M): the minimal resolution of M cut at degree -n, in window [-n, 0].

    With ``split`` the complex records the truncated resolutions of the
    indecomposable summands of M as its summands.
    """
    res = min_resolution(M, n)
    terms = [res.terms[i] for i in range(n, -1, -1)]
    diffs = [res.diffs[i - 1] for i in range(n, 0, -1)]
    summands = None
    if split:
        parts = decompose(M)
        if len(parts) > 1:
            summands = [from_resolution(X, n, split=False) for X in parts]
    name = f"P_{{>=-{n}}}({M.name})"
    return ProjComplex(M.algebra, -n, terms, diffs, name=name, summands=summands, origin=("resolution", n), check=False)


def truncate_ge(P: ProjComplex, k: int) -> ProjComplex:
    """Stupid truncation: the terms of degree >= k."""
    if P.is_zero_complex() or k <= P.lo:
        return P
    if k > P.hi:
        return zero_complex(P.algebra)
    start = k - P.lo
    return ProjComplex(P.algebra, k, P.terms[start:], P.diffs[start:], name=f"{P.name}_{{>={k}}}", check=False)


def shift(P: ProjComplex, j: int) -> ProjComplex:
    """P[j]: degree k holds P^{k+j}; differentials multiplied by (-1)^j."""
    if j == 0:
        return P
    f = P.algebra.field
    sign = -1 if j % 2 else 1
    diffs = [f.reduce(sign * d) for d in P.diffs]
    summands = [shift(S, j) for S in P.summands] if P.summands else None
    return ProjComplex(P.algebra, P.lo - j, P.terms, diffs, name=f"{P.name}[{j}]", summands=summands, check=False)


def direct_sum(parts: Sequence[ProjComplex], name: str = "") -> ProjComplex:
    """Degreewise direct sum; the parts (or their summands) become the summands."""
    parts = [P for P in parts if not P.is_zero_complex()]
    if not parts:
        return zero_complex(parts[0].algebra) if parts else None  # type: ignore[return-value]
    if len(parts) == 1:
        return parts[0]
    A = parts[0].algebra
    lo = min(P.lo for P in parts)
    hi = max(P.hi for P in parts)
    terms = [tuple(v for P in parts for v in P.term(k)) for k in range(lo, hi + 1)]
    diffs = []
    for k in range(lo, hi):
        d = pm.zero(A, terms[k - lo], terms[k + 1 - lo])
        r0 = c0 = 0
        for P in parts:
            dk = P.d(k)
            d[r0 : r0 + dk.shape[0], c0 : c0 + dk.shape[1]] = dk
            r0 += dk.shape[0]
            c0 += dk.shape[1]
        diffs.append(d)
    summands = [S for P in parts for S in P.summand_list()]
    return ProjComplex(A, lo, terms, diffs, name=name or "+".join(P.name for P in parts), summands=summands, check=False)


def power(P: ProjComplex, r: int) -> ProjComplex:
    if r == 0:
        return zero_complex(P.algebra)
    return direct_sum([P] * r, name=f"{P.name}^{r}")


def term_module(P: ProjComplex, k: int) -> tuple[Module, dict]:
    return projective_sum(P.algebra, P.term(k))


def differential_map(P: ProjComplex, k: int) -> ModuleMap:
    A = P.algebra
    src, tgt = P.term(k), P.term(k + 1)
    mat = pm.to_module_matrix(A, P.d(k), src, tgt)
    return ModuleMap(term_module(P, k)[0], term_module(P, k + 1)[0], mat)


def _cohomology_data(P: ProjComplex, i: int) -> tuple[Module, ModuleMap, ModuleMap]:
    """H^i(P) with the kernel inclusion ker d^i -> P^i and the projection ker d^i -> H^i."""
    f = P.algebra.field
    K, kin = kernel(differential_map(P, i))
    prev = differential_map(P, i - 1)
    coords = f.solve(kin.matrix, prev.matrix) if prev.matrix.shape[1] and K.dim else f.zeros(K.dim, prev.matrix.shape[1])
    if coords is None:
        raise ValueError("d^i o d^{i-1} != 0")
    H, q = cokernel(ModuleMap(prev.source, K, coords))
    return H.with_name(f"H^{i}({P.name})"), kin, q


def cohomology(P: ProjComplex, i: int) -> Module:
    """H^i(P) = ker d^i / im d^{i-1} as an A-module."""
    return _cohomology_data(P, i)[0]


def cohomology_map(g: "ChainMap", i: int) -> ModuleMap:
    """H^i(g): H^i(source) -> H^i(target)."""
    A = g.algebra
    f = A.field
    HX, kx, qx = _cohomology_data(g.source, i)
    HY, ky, qy = _cohomology_data(g.target, i)
    if HX.dim == 0 or HY.dim == 0:
        return ModuleMap(HX, HY, f.zeros(HY.dim, HX.dim))
    lift = f.solve(qx.matrix, f.eye(HX.dim))
    gi = pm.to_module_matrix(A, g.at(i), g.source.term(i), g.target.term(i))
    img = f.chain(gi, kx.matrix, lift)
    coords = f.solve(ky.matrix, img)
    if coords is None:
        raise ValueError("g is not a chain map in degree i")
    return ModuleMap(HX, HY, f.matmul(qy.matrix, coords))


# ---------------------------------------------------------------------------
# Chain maps
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class ChainMap:
    """A degree-0 map of complexes; ``maps[k]: source^k -> target^k`` (missing = zero)."""

    source: ProjComplex
    target: ProjComplex
    maps: dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def algebra(self) -> BasedAlgebra:
        return self.source.algebra

    def at(self, k: int) -> np.ndarray:
        if k in self.maps:
            return self.maps[k]
        return pm.zero(self.algebra, self.source.term(k), self.target.term(k))

    def degrees(self) -> range:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        return range(lo, hi + 1)

    def after(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        A = self.algebra
        maps = {k: pm.compose(A, other.at(k), self.at(k)) for k in other.degrees() if other.source.term(k) and self.target.term(k)}
        return ChainMap(other.source, self.target, maps)

    def scaled_sum(self, other: "ChainMap", a=1, b=1) -> "ChainMap":
        f = self.algebra.field
        ks = set(self.maps) | set(other.maps)
        return ChainMap(self.source, self.target, {k: f.reduce(a * self.at(k) + b * other.at(k)) for k in ks})

    def is_zero(self) -> bool:
        return all(not np.any(m != 0) for m in self.maps.values())

    def check(self) -> None:
        A = self.algebra
        f = A.field
        X, Y = self.source, self.target
        for k in self.degrees():
            lhs = pm.compose(A, self.at(k), Y.d(k))
            rhs = pm.compose(A, X.d(k), self.at(k + 1))
            if lhs.shape != rhs.shape or not f.is_zero(f.reduce(lhs - rhs)):
                raise ValueError(f"not a chain map in degree {k}")


def identity_map(P: ProjComplex) -> ChainMap:
    return ChainMap(P, P, {k: pm.identity(P.algebra, P.term(k)) for k in P.degrees()})


def zero_chain_map(X: ProjComplex, Y: ProjComplex) -> ChainMap:
    return ChainMap(X, Y, {})


def stack_maps(X: ProjComplex, maps: Sequence[ChainMap], target: ProjComplex) -> ChainMap:
    """The map X -> target = direct_sum(m.target for m in maps) with components ``maps``."""
    A = X.algebra
    out = {}
    for k in X.degrees():
        rows = [m.at(k) for m in maps]
        if not target.term(k):
            continue
        out[k] = np.concatenate(rows, axis=0) if rows else pm.zero(A, X.term(k), target.term(k))
    return ChainMap(X, target, out)


# ---------------------------------------------------------------------------
# Hom spaces in the homotopy category
# ---------------------------------------------------------------------------


def _post_matrix(A: BasedAlgebra, G: np.ndarray, in_idx: np.ndarray, out_idx: np.ndarray) -> np.ndarray:
    """Matrix of F -> G o F between masked coordinate lists (rows out, cols in)."""
    f = A.field
    if len(in_idx) == 0 or len(out_idx) == 0:
        return f.zeros(len(out_idx), len(in_idx))
    K = np.einsum("sry,xyz->srxz", G, A.mult)
    s, c, z = out_idx[:, 0:1], out_idx[:, 1:2], out_idx[:, 2:3]
    r, c2, x = in_idx[:, 0], in_idx[:, 1], in_idx[:, 2]
    vals = K[s, r[None, :], x[None, :], z]
    return f.reduce(np.where(c == c2[None, :], vals, 0).astype(f.dtype))


def _pre_matrix(A: BasedAlgebra, F: np.ndarray, in_idx: np.ndarray, out_idx: np.ndarray) -> np.ndarray:
    """Matrix of G -> G o F between masked coordinate lists."""
    f = A.field
    if len(in_idx) == 0 or len(out_idx) == 0:
        return f.zeros(len(out_idx), len(in_idx))
    L = np.einsum("rcx,xyz->rcyz", F, A.mult)
    s, c, z = out_idx[:, 0:1], out_idx[:, 1:2], out_idx[:, 2:3]
    s2, r, y = in_idx[:, 0], in_idx[:, 1], in_idx[:, 2]
    vals = L[r[None, :], c, y[None, :], z]
    return f.reduce(np.where(s == s2[None, :], vals, 0).astype(f.dtype))


class _Layout:
    """Flat coordinates of graded maps ``X^k -> Y^{k+shift}`` over the allowed grading blocks."""

    def __init__(self, A: BasedAlgebra, X: ProjComplex, Y: ProjComplex, offset: int = 0):
        self.A = A
        self.X, self.Y, self.offset = X, Y, offset
        self.blocks: dict[int, tuple[int, np.ndarray]] = {}
        pos = 0
        for k in X.degrees():
            src, tgt = X.term(k), Y.term(k + offset)
            if not src or not tgt:
                continue
            idx = np.argwhere(pm.mask(A, src, tgt))
            if len(idx):
                self.blocks[k] = (pos, idx)
                pos += len(idx)
        self.size = pos

    def idx(self, k: int) -> np.ndarray:
        return self.blocks[k][1] if k in self.blocks else np.zeros((0, 3), dtype=int)

    def sl(self, k: int) -> slice:
        if k not in self.blocks:
            return slice(0, 0)
        start, idx = self.blocks[k]
        return slice(start, start + len(idx))

    def pack(self, maps: dict[int, np.ndarray]) -> np.ndarray:
        f = self.A.field
        out = f.zeros(self.size)
        for k, (start, idx) in self.blocks.items():
            if k in maps:
                m = maps[k]
                out[start : start + len(idx)] = m[idx[:, 0], idx[:, 1], idx[:, 2]]
        return out

    def unpack(self, vec: np.ndarray) -> dict[int, np.ndarray]:
        out = {}
        for k, (start, idx) in self.blocks.items():
            m = pm.zero(self.A, self.X.term(k), self.Y.term(k + self.offset))
            m[idx[:, 0], idx[:, 1], idx[:, 2]] = vec[start : start + len(idx)]
            out[k] = m
        return out


class HomSpace:
    """Hom_K(X, Y) for the degree-0 maps X -> Y.

    Attributes:
        Z: columns spanning the chain maps (flat coordinates).
        B: columns spanning the null-homotopic maps.
        reps: columns whose classes form a basis of Hom_K(X, Y).
    """

    def __init__(self, X: ProjComplex, Y: ProjComplex):
        A = X.algebra
        f = A.field
        self.X, self.Y = X, Y
        self.layout = _Layout(A, X, Y, 0)
        self.hlayout = _Layout(A, X, Y, -1)
        n = self.layout.size
        # cycle condition d_Y^k f^k - f^{k+1} d_X^k = 0 in Hom(X^k, Y^{k+1})
        rows = []
        for k in X.degrees():
            src, tgt = X.term(k), Y.term(k + 1)
            if not src or not tgt:
                continue
            out_idx = np.argwhere(pm.mask(A, src, tgt))
            if not len(out_idx):
                continue
            block = f.zeros(len(out_idx), n)
            block[:, self.layout.sl(k)] = _post_matrix(A, Y.d(k), self.layout.idx(k), out_idx)
            pre = _pre_matrix(A, X.d(k), self.layout.idx(k + 1), out_idx)
            block[:, self.layout.sl(k + 1)] = f.reduce(block[:, self.layout.sl(k + 1)] - pre)
            rows.append(block)
        cyc = np.concatenate(rows, axis=0) if rows else f.zeros(0, n)
        self.Z = f.nullspace(cyc) if n else f.zeros(0, 0)
        # homotopies s^k: X^k -> Y^{k-1}; f^k = s^{k+1} d_X^k + d_Y^{k-1} s^k
        m = self.hlayout.size
        H = f.zeros(n, m)
        for k in self.layout.blocks:
            out_idx = self.layout.idx(k)
            if k + 1 in self.hlayout.blocks:
                H[self.layout.sl(k), self.hlayout.sl(k + 1)] = _pre_matrix(A, X.d(k), self.hlayout.idx(k + 1), out_idx)
            if k in self.hlayout.blocks:
                H[self.layout.sl(k), self.hlayout.sl(k)] = f.reduce(
                    H[self.layout.sl(k), self.hlayout.sl(k)] + _post_matrix(A, Y.d(k - 1), self.hlayout.idx(k), out_idx)
                )
        self.H = H
        self.B = f.column_basis(H) if m and n else f.zeros(n, 0)
        cur = self.B
        reps = []
        for j in range(self.Z.shape[1]):
            cand = np.concatenate([cur, self.Z[:, j : j + 1]], axis=1)
            if f.rank(cand) > cur.shape[1]:
                reps.append(j)
                cur = cand
        self.reps = self.Z[:, reps] if reps else f.zeros(n, 0)

    @property
    def dim(self) -> int:
        return self.reps.shape[1]

    def vector(self, g: ChainMap) -> np.ndarray:
        return self.layout.pack(g.maps)

    def chain_map(self, vec: np.ndarray) -> ChainMap:
        return ChainMap(self.X, self.Y, self.layout.unpack(vec))

    def classes(self) -> list[ChainMap]:
        return [self.chain_map(self.reps[:, j]) for j in range(self.dim)]

    def homotopy(self, g: ChainMap) -> dict[int, np.ndarray] | None:
        """A homotopy s with g = s d + d s, or None when g is not null-homotopic."""
        f = self.X.algebra.field
        vec = self.vector(g)
        if self.layout.size == 0:
            return {}
        s = f.solve(self.H, vec) if self.H.shape[1] else (None if np.any(vec != 0) else f.zeros(0))
        if s is None:
            return None
        return self.hlayout.unpack(s)

    def is_null(self, g: ChainMap) -> bool:
        return self.homotopy(g) is not None


def hom_space(X: ProjComplex, Y: ProjComplex) -> HomSpace:
    key = ("hom", id(Y))
    hit = X.cache.get(key)
    if hit is None or hit[0] is not Y:
        hit = (Y, HomSpace(X, Y))
        X.cache[key] = hit
    return hit[1]


def hom_homotopy(X: ProjComplex, Y: ProjComplex, i: int = 0) -> HomSpace:
    """Hom_K(X, Y[i]) with a basis of classes."""
    return hom_space(X, shift(Y, i)) if i else hom_space(X, Y)


@dataclass
class HomotopyVerdict:
    null_homotopic: bool
    homotopy: dict[int, np.ndarray] | None = None


def null_homotopy(g: ChainMap) -> HomotopyVerdict:
    """Decide whether g is null-homotopic; the homotopy is verified before it is returned."""
    s = hom_space(g.source, g.target).homotopy(g)
    if s is None:
        return HomotopyVerdict(False)
    A = g.algebra
    f = A.field
    X, Y = g.source, g.target
    for k in g.degrees():
        acc = g.at(k)
        if k + 1 in s:
            acc = acc - pm.compose(A, X.d(k), s[k + 1])
        if k in s:
            acc = acc - pm.compose(A, s[k], Y.d(k - 1))
        assert f.is_zero(f.reduce(acc)), "homotopy certificate failed"
    return HomotopyVerdict(True, s)


def homotopic(g: ChainMap, h: ChainMap) -> bool:
    return null_homotopy(g.scaled_sum(h, 1, -1)).null_homotopic


# ---------------------------------------------------------------------------
# Cones, zero objects, minimal models
# ---------------------------------------------------------------------------


def cone(g: ChainMap) -> ProjComplex:
    X, Y = g.source, g.target
    A = X.algebra
    if X.is_zero_complex():
        return Y
    lo = min(X.lo - 1, Y.lo) if not Y.is_zero_complex() else X.lo - 1
    hi = max(X.hi - 1, Y.hi) if not Y.is_zero_complex() else X.hi - 1
    terms = [X.term(k + 1) + Y.term(k) for k in range(lo, hi + 1)]
    diffs = []
    f = A.field
    for k in range(lo, hi):
        nx0, ny0 = len(X.term(k + 1)), len(Y.term(k))
        d = pm.zero(A, terms[k - lo], terms[k + 1 - lo])
        d[: len(X.term(k + 2)), :nx0] = f.reduce(-X.d(k + 1))
        d[len(X.term(k + 2)) :, :nx0] = g.at(k + 1)
        d[len(X.term(k + 2)) :, nx0 : nx0 + ny0] = Y.d(k)
        diffs.append(d)
    return ProjComplex(A, lo, terms, diffs, name=f"Cone({X.name}->{Y.name})")


def is_zero_object(P: ProjComplex) -> bool:
    """P = 0 in K^b(proj A): the identity is null-homotopic."""
    if P.is_zero_complex():
        return True
    return hom_space(P, P).is_null(identity_map(P))


def is_iso_in_K(g: ChainMap) -> bool:
    return is_zero_object(cone(g))


@dataclass
class MinimalModel:
    """A radical complex homotopy equivalent to ``original``.

    ``iota: complex -> original`` and ``pi: original -> complex`` satisfy
    ``pi o iota = id`` exactly and ``iota o pi ~ id``.
    """

    original: ProjComplex
    complex: ProjComplex
    iota: ChainMap
    pi: ChainMap
    eliminated: int

    def check(self) -> None:
        f = self.complex.algebra.field
        self.iota.check()
        self.pi.check()
        comp = self.pi.after(self.iota)
        ident = identity_map(self.complex)
        for k in self.complex.degrees():
            assert f.is_zero(f.reduce(comp.at(k) - ident.at(k))), "pi o iota != id"
        assert homotopic(self.iota.after(self.pi), identity_map(self.original)), "iota o pi is not homotopic to id"


def _find_unit(P_terms, diffs, A, lo):
    for j, d in enumerate(diffs):
        ents = pm.unit_entries(A, d, P_terms[j], P_terms[j + 1])
        if ents:
            return lo + j, ents[0]
    return None


def minimal_model(P: ProjComplex) -> MinimalModel:
    """Split off contractible summands by Gaussian elimination on invertible entries."""
    A = P.algebra
    f = A.field
    lo = P.lo
    terms = [list(t) for t in P.terms]
    diffs = [d.copy() for d in P.diffs]
    # iota[k]: current^k -> P^k, pi[k]: P^k -> current^k
    iota = {k: pm.identity(A, P.term(k)) for k in P.degrees()}
    pi = {k: pm.identity(A, P.term(k)) for k in P.degrees()}
    count = 0
    while True:
        hit = _find_unit(terms, diffs, A, lo)
        if hit is None:
            break
        k, (r, c) = hit
        j = k - lo
        d = diffs[j]
        v = terms[j][c]
        uinv = pm.inverse_in_corner(A, d[r, c], v).reshape(1, 1, -1)
        keep_c = [x for x in range(len(terms[j])) if x != c]
        keep_r = [x for x in range(len(terms[j + 1])) if x != r]
        delta = d[r : r + 1, keep_c]  # B -> P(v)_r
        gamma = d[keep_r, c : c + 1]  # P(v)_c -> C
        D = d[np.ix_(keep_r, keep_c)]
        corr = pm.compose(A, delta, pm.compose(A, uinv, gamma))
        new_d = f.reduce(D - corr)
        # step maps between the new complex and the current one
        i_k = pm.zero(A, tuple(terms[j][x] for x in keep_c), tuple(terms[j]))
        for col, x in enumerate(keep_c):
            i_k[x, col] = pm.identity(A, (terms[j][x],))[0, 0]
        i_k[c : c + 1, :] = f.reduce(-pm.compose(A, delta, uinv))
        i_k1 = pm.zero(A, tuple(terms[j + 1][x] for x in keep_r), tuple(terms[j + 1]))
        for col, x in enumerate(keep_r):
            i_k1[x, col] = pm.identity(A, (terms[j + 1][x],))[0, 0]
        p_k = pm.zero(A, tuple(terms[j]), tuple(terms[j][x] for x in keep_c))
        for row, x in enumerate(keep_c):
            p_k[row, x] = pm.identity(A, (terms[j][x],))[0, 0]
        p_k1 = pm.zero(A, tuple(terms[j + 1]), tuple(terms[j + 1][x] for x in keep_r))
        for row, x in enumerate(keep_r):
            p_k1[row, x] = pm.identity(A, (terms[j + 1][x],))[0, 0]
        p_k1[:, r : r + 1] = f.reduce(-pm.compose(A, uinv, gamma))
        # accumulate: iota_total = iota_total o i_step, pi_total = p_step o pi_total
        iota[k] = pm.compose(A, i_k, iota[k])
        iota[k + 1] = pm.compose(A, i_k1, iota[k + 1])
        pi[k] = pm.compose(A, pi[k], p_k)
        pi[k + 1] = pm.compose(A, pi[k + 1], p_k1)
        # update the complex
        diffs[j] = new_d
        if j > 0:
            diffs[j - 1] = diffs[j - 1][keep_c]
        if j + 1 < len(diffs):
            diffs[j + 1] = diffs[j + 1][:, keep_r]
        terms[j] = [terms[j][x] for x in keep_c]
        terms[j + 1] = [terms[j + 1][x] for x in keep_r]
        count += 1
    # the constructor strips zero terms at the ends; keep the maps aligned with it
    M = ProjComplex(A, lo, terms, diffs, name=f"min({P.name})", origin=P.origin, check=False)
    iota_map = ChainMap(M, P, {k: iota[k] for k in M.degrees()})
    pi_map = ChainMap(P, M, {k: pi[k] for k in M.degrees()})
    if P.summands and count == 0:
        M.summands = P.summands
    return MinimalModel(P, M, iota_map, pi_map, count)


def is_minimal(P: ProjComplex) -> bool:
    return all(pm.is_radical(P.algebra, d) for d in P.diffs)


# ---------------------------------------------------------------------------
# Approximations and coresolutions
# ---------------------------------------------------------------------------


@dataclass
class Preenvelope:
    """A left add(P)-approximation ``map: X -> target`` with target a sum of summands of P."""

    map: ChainMap
    chosen: list[tuple[int, int]]  # (summand index, class index)
    summands: list[ProjComplex]

    @property
    def target(self) -> ProjComplex:
        return self.map.target


def add_preenvelope(X: ProjComplex, P: ProjComplex, minimize: bool = True) -> Preenvelope:
    """Left add(P)-approximation of X.

    One copy of a summand T of P is used per basis class of Hom_K(X, T); then
    copies are discarded, in fixed order, while every class X -> T still
    factors through the remaining ones.  With indecomposable summands the
    result is the minimal left approximation.
    """
    A = X.algebra
    f = A.field
    Ts = P.summand_list()
    spaces = [hom_space(X, T) for T in Ts]
    copies = [(i, h) for i, hs in enumerate(spaces) for h in range(hs.dim)]
    cls = [hs.classes() for hs in spaces]

    def factor_columns(i: int, chosen) -> np.ndarray:
        # vectors of g o h in Hom(X, T_i) for chosen copies (a, h) and g in Hom_K(T_a, T_i)
        hs = spaces[i]
        cols = [hs.B]
        for a, h in chosen:
            for g in hom_space(Ts[a], Ts[i]).classes():
                cols.append(hs.vector(g.after(cls[a][h])).reshape(-1, 1))
        return np.concatenate(cols, axis=1) if cols else f.zeros(hs.layout.size, 0)

    def approximates(chosen) -> bool:
        for i, hs in enumerate(spaces):
            if hs.dim == 0:
                continue
            if f.rank(factor_columns(i, chosen)) < hs.Z.shape[1]:
                return False
        return True

    chosen = list(copies)
    if minimize:
        for cand in copies:
            trial = [c for c in chosen if c != cand]
            if approximates(trial):
                chosen = trial
    targets = [Ts[i] for i, _ in chosen]
    if not targets:
        E = zero_complex(A)
        return Preenvelope(zero_chain_map(X, E), [], Ts)
    E = direct_sum(targets, name="+".join(T.name for T in targets))
    if len(targets) == 1:
        E = targets[0]
    g = stack_maps(X, [cls[i][h] for i, h in chosen], E)
    return Preenvelope(g, chosen, Ts)


def add_precover(X: ProjComplex, Ts: Sequence[ProjComplex], minimize: bool = True) -> ChainMap:
    """Right add(Ts)-approximation ``E -> X`` (dual to :func:`add_preenvelope`).

    Args:
        X: the complex to approximate.
        Ts: indecomposable complexes generating the additive class.
        minimize: discard redundant copies while every class T -> X still
            factors through the remaining ones.

    Returns:
        A chain map from a direct sum of members of ``Ts`` to ``X``.
    """
    A = X.algebra
    f = A.field
    spaces = [hom_space(T, X) for T in Ts]
    cls = [hs.classes() for hs in spaces]
    copies = [(i, h) for i, hs in enumerate(spaces) for h in range(hs.dim)]

    def approximates(chosen) -> bool:
        for i, hs in enumerate(spaces):
            if hs.dim == 0:
                continue
            cols = [hs.B]
            for a, h in chosen:
                for g in hom_space(Ts[i], Ts[a]).classes():
                    cols.append(hs.vector(cls[a][h].after(g)).reshape(-1, 1))
            if f.rank(np.concatenate(cols, axis=1)) < hs.Z.shape[1]:
                return False
        return True

    chosen = list(copies)
    if minimize:
        for cand in copies:
            trial = [c for c in chosen if c != cand]
            if approximates(trial):
                chosen = trial
    if not chosen:
        return zero_chain_map(zero_complex(A), X)
    sources = [Ts[i] for i, _ in chosen]
    E = sources[0] if len(sources) == 1 else direct_sum(sources)
    maps = {}
    for k in E.degrees():
        if not X.term(k):
            continue
        blocks = [cls[i][h].at(k) for i, h in chosen]
        maps[k] = np.concatenate(blocks, axis=1)
    return ChainMap(E, X, maps)


def cone_inclusion(g: ChainMap) -> ChainMap:
    """The canonical map Y -> Cone(g) for g: X -> Y."""
    X, Y = g.source, g.target
    C = cone(g)
    if X.is_zero_complex():
        return identity_map(Y)
    A = X.algebra
    maps = {}
    for k in Y.degrees():
        m = pm.zero(A, Y.term(k), C.term(k))
        off = len(X.term(k + 1))
        m[off:, :] = pm.identity(A, Y.term(k))
        maps[k] = m
    return ChainMap(Y, C, maps)


def split_mono_retraction(g: ChainMap) -> ChainMap | None:
    """Some r with r o g ~ id_source, or None."""
    X, E = g.source, g.target
    f = X.algebra.field
    if is_zero_object(X):
        return zero_chain_map(E, X)
    if E.is_zero_complex():
        return None
    back = hom_space(E, X)
    endo = hom_space(X, X)
    cols = [endo.vector(r.after(g)).reshape(-1, 1) for r in back.classes()]
    if not cols:
        return None
    mat = np.concatenate(cols + [endo.B], axis=1)
    sol = f.solve(mat, endo.vector(identity_map(X)))
    if sol is None:
        return None
    r = zero_chain_map(E, X)
    for a, cls in zip(sol[: len(cols)], back.classes()):
        if a != 0:
            r = r.scaled_sum(cls, 1, a)
    return r


def is_split_mono_in_K(g: ChainMap) -> bool:
    return split_mono_retraction(g) is not None


def in_add(X: ProjComplex, P: ProjComplex) -> bool:
    """X lies in add(P) in K^b(proj A): its add(P)-preenvelope splits."""
    return is_split_mono_in_K(add_preenvelope(X, P).map)


@dataclass
class CoresStep:
    source: ProjComplex
    preenvelope: ChainMap
    cone: ProjComplex


@dataclass
class CoresResult:
    """Outcome of an add(P)-coresolution search.

    ``finite`` with ``value`` = number of triangles used, or not within ``bound``.
    ``chain`` lists the triangles X_i -> E_i -> X_{i+1}; ``last`` is the final
    term and ``retraction`` the splitting certifying it lies in add(P).
    """

    finite: bool
    value: int | None
    bound: int
    chain: list[CoresStep]
    last: ProjComplex
    retraction: ChainMap | None = None

    def to_json(self) -> dict:
        if self.finite:
            return {"kind": "Finite", "value": self.value, "chain": [s.cone.shape() for s in self.chain]}
        return {"kind": "NotWithinBound", "bound": self.bound}

    def recheck(self, P: ProjComplex) -> bool:
        """Re-verify the certificate by recomputing every cone and the final splitting."""
        for i, step in enumerate(self.chain):
            step.preenvelope.check()
            C = minimal_model(cone(step.preenvelope)).complex
            nxt = self.chain[i + 1].source if i + 1 < len(self.chain) else self.last
            if C.shape() != nxt.shape():
                return False
        if not self.finite:
            return True
        if self.retraction is None:
            return False
        g = add_preenvelope(self.last, P).map
        return homotopic(self.retraction.after(g), identity_map(self.last))


def coresdim_within(X: ProjComplex, P: ProjComplex, bound: int) -> CoresResult:
    """Search for triangles X -> E_0 -> X_1, ..., X_d in add(P), d <= bound."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    chain: list[CoresStep] = []
    cur = minimal_model(X).complex
    for i in range(bound + 1):
        env = add_preenvelope(cur, P)
        r = split_mono_retraction(env.map)
        if r is not None:
            return CoresResult(True, i, bound, chain, cur, r)
        if i == bound:
            break
        C = minimal_model(cone(env.map)).complex
        chain.append(CoresStep(cur, env.map, C))
        cur = C
    return CoresResult(False, None, bound, chain, cur)


# ---------------------------------------------------------------------------
# Presilting and silting
# ---------------------------------------------------------------------------


def is_presilting(P: ProjComplex) -> Verdict:
    """Hom_K(P, P[i]) = 0 for i = 1 .. l(P)."""
    for i in range(1, P.length + 1):
        hs = hom_homotopy(P, P, i)
        if hs.dim:
            return Verdict.fails("complex", condition="self-extension", degree=i, dim=hs.dim)
    return Verdict.holds("complex", checked_degrees=P.length)


def is_silting(P: ProjComplex, bound: int | None = None) -> Verdict:
    """Presilting plus generation, certified by an add(P)-coresolution of A[0].

    The bound is exact (NotWithinBound means Fails) when P is a truncated
    resolution P_{>=-n}(M) and bound >= n; otherwise it yields Inconclusive.
    """
    A = P.algebra
    if bound is None:
        bound = max(P.length, 0)
    pre = is_presilting(P)
    if pre.fails_:
        return Verdict.fails("complex", condition="presilting", detail=pre.to_json())
    res = coresdim_within(regular_complex(A), P, bound)
    if res.finite:
        return Verdict.holds("complex", coresdim=res.value, chain=res.to_json()["chain"])
    exact = bool(P.origin and P.origin[0] == "resolution" and P.origin[1] <= bound)
    if exact:
        return Verdict.fails("complex", condition="generation", bound=bound)
    return Verdict.inconclusive("complex", bound, condition="generation")


# ---------------------------------------------------------------------------
# Lifting module maps
# ---------------------------------------------------------------------------


def _lift_columns(A: BasedAlgebra, lhs: np.ndarray, target: np.ndarray, src: tuple, mid: tuple) -> np.ndarray:
    """Entries of S: P(src) -> P(mid) with lhs o S = target on the summand generators.

    ``lhs`` is the module matrix of a map out of P(mid); ``target`` holds one
    column per summand of src, the required image of its generator.
    """
    f = A.field
    Pm, _ = projective_sum(A, mid)
    S = pm.zero(A, src, mid)
    for c, v in enumerate(src):
        y = f.solve(lhs, target[:, c])
        if y is None:
            raise ValueError("map does not lift")
        y = f.reduce(Pm.action(A.idempotents[v]) @ y)
        S[:, c, :] = pm.vector_to_entries(A, y, mid)
    return S


def lift_module_map(phi: ModuleMap, n: int) -> ChainMap:
    """A chain map P_{>=-n}(M) -> P_{>=-n}(N) inducing phi on H^0."""
    M, N = phi.source, phi.target
    A = M.algebra
    f = A.field
    rM, rN = min_resolution(M, n), min_resolution(N, n)
    X, Y = from_resolution(M, n), from_resolution(N, n)
    maps = {}
    src = rM.terms[0]
    PM, pidx = projective_sum(A, src)
    gens = np.stack([rM.augmentation[:, pidx[(c, A.idempotents[v])]] for c, v in enumerate(src)], axis=1) if src else f.zeros(M.dim, 0)
    tgt = f.matmul(phi.matrix, gens) if src else f.zeros(N.dim, 0)
    prev = _lift_columns(A, rN.augmentation, tgt, src, rN.terms[0]) if src else pm.zero(A, src, rN.terms[0])
    maps[0] = prev
    for i in range(1, n + 1):
        src, mid, dst = rM.terms[i], rN.terms[i], rN.terms[i - 1]
        if not src:
            break
        T = pm.compose(A, rM.diffs[i - 1], prev)  # P^{-i}(M) -> P^{-i+1}(N)
        Tm = pm.to_module_matrix(A, T, src, dst)
        _, sidx = projective_sum(A, src)
        cols = np.stack([Tm[:, sidx[(c, A.idempotents[v])]] for c, v in enumerate(src)], axis=1)
        if not mid:
            if np.any(cols != 0):
                raise ValueError("map does not lift")
            prev = pm.zero(A, src, mid)
        else:
            D = pm.to_module_matrix(A, rN.diffs[i - 1], mid, dst)
            prev = _lift_columns(A, D, cols, src, mid)
        maps[-i] = prev
    g = ChainMap(X, Y, {k: m for k, m in maps.items() if X.term(k) and Y.term(k)})
    return g
