"""Minimal projective resolutions, syzygies, the Nakayama functor, tau_n and Ext.

Degrees follow the cochain convention: the resolution of M is
``... -> P^{-2} -> P^{-1} -> P^0 -> M`` with ``pi^{-i}: P^{-i} -> P^{-i+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import projmaps as pm
from .decompose import decompose, is_iso, isomorphic
from .modules import (
    Module,
    ModuleMap,
    canonical_modules,
    hom_basis,
    injective_sum,
    kernel,
    projective_sum,
    top_generators,
    zero_module,
)
from .verdict import Verdict


class PreconditionViolated(ValueError):
    pass


class NotProjective(ValueError):
    pass


@dataclass
class MinResolution:
    """Minimal projective resolution computed to a given depth.

    Attributes:
        module: the resolved module M.
        depth: n; the projectives P^0 .. P^{-n} are known.
        terms: ``terms[i]`` lists the vertices of the indecomposable summands of P^{-i}.
        diffs: ``diffs[i-1]`` is pi^{-i}: P^{-i} -> P^{-i+1} as a projective map array.
        augmentation: matrix of the projective cover P^0 -> M.
        syzygies: ``syzygies[i]`` is Omega^i(M) for i = 0 .. n+1.
        inclusions: ``inclusions[i]`` embeds Omega^i(M) into P^{-i+1} (i >= 1).
        generators: images in Omega^i(M) of the summand generators of P^{-i}.
    """

    module: Module
    depth: int
    terms: list[tuple[int, ...]]
    diffs: list[np.ndarray]
    augmentation: np.ndarray
    syzygies: list[Module]
    inclusions: list[np.ndarray | None]
    generators: list[list[np.ndarray]]

    def truncated(self, n: int) -> "MinResolution":
        return MinResolution(
            self.module,
            n,
            self.terms[: n + 1],
            self.diffs[:n],
            self.augmentation,
            self.syzygies[: n + 2],
            self.inclusions[: n + 2],
            self.generators[: n + 1],
        )

    def term_module(self, i: int) -> Module:
        return projective_sum(self.module.algebra, self.terms[i])[0]

    def shape(self) -> str:
        """Printable shape "P(2)+P(1) <- P(3)^2 <- ..." up to the last nonzero term."""
        A = self.module.algebra
        parts = []
        last = max((i for i, t in enumerate(self.terms) if t), default=-1)
        for t in self.terms[: last + 1]:
            parts.append(format_projective(A, t))
        return " <- ".join(parts) if parts else "0"

    def check(self) -> None:
        """Exactness, minimality and d^2 = 0 at every computed degree."""
        A = self.module.algebra
        f = A.field
        for i, d in enumerate(self.diffs, start=1):
            assert pm.is_radical(A, d), f"pi^-{i} does not land in the radical"
        for i in range(1, len(self.diffs)):
            comp = pm.compose(A, self.diffs[i], self.diffs[i - 1])
            assert f.is_zero(comp), "consecutive differentials do not compose to zero"
        if self.diffs:
            d1 = pm.to_module_matrix(A, self.diffs[0], self.terms[1], self.terms[0])
            assert f.is_zero(f.matmul(self.augmentation, d1)), "augmentation o pi^-1 != 0"


def format_projective(A, verts) -> str:
    if not verts:
        return "0"
    counts: dict[int, int] = {}
    for v in verts:
        counts[v] = counts.get(v, 0) + 1
    return "+".join(f"P({A.vertices[v]})" + (f"^{m}" if m > 1 else "") for v, m in counts.items())


def parse_shape(shape: str) -> list[dict[str, int]]:
    """Multisets of projective labels per degree from a shape string (order within a degree ignored)."""
    out = []
    for term in shape.split("<-"):
        term = term.strip()
        counts: dict[str, int] = {}
        if term != "0":
            for piece in term.split("+"):
                piece = piece.strip()
                label, _, mult = piece.partition("^")
                counts[label[2:-1]] = counts.get(label[2:-1], 0) + int(mult or 1)
        out.append(counts)
    return out


def min_resolution(M: Module, n: int) -> MinResolution:
    """Minimal projective resolution of M through P^{-n}."""
    if n < 0:
        raise ValueError("depth must be non-negative")
    cached: MinResolution | None = M.cache.get("resolution")
    if cached is not None and cached.depth >= n:
        return cached.truncated(n)
    A = M.algebra
    f = A.field
    terms, diffs, gens_all = [], [], []
    syz, incl = [M], [None]
    augmentation = None
    X, emb = M, None
    for i in range(n + 1):
        gens = top_generators(X)
        verts = tuple(v for v in range(A.num_vertices) for _ in gens[v])
        vecs = [g for v in range(A.num_vertices) for g in gens[v]]
        P, pidx = projective_sum(A, verts)
        cover = f.zeros(X.dim, P.dim)
        for (c, b), col in pidx.items():
            cover[:, col] = f.reduce(X.action(b) @ vecs[c])
        terms.append(verts)
        gens_all.append(vecs)
        if i == 0:
            augmentation = cover
        else:
            d = pm.zero(A, verts, terms[i - 1])
            for c, g in enumerate(vecs):
                d[:, c, :] = pm.vector_to_entries(A, f.reduce(emb @ g), terms[i - 1])
            diffs.append(d)
        K, kin = kernel(ModuleMap(P, X, cover))
        K.name = f"Omega^{i + 1}({M.name})"
        syz.append(K)
        incl.append(kin.matrix)
        X, emb = K, kin.matrix
    res = MinResolution(M, n, terms, diffs, augmentation, syz, incl, gens_all)
    M.cache["resolution"] = res
    return res


def syzygy(M: Module, i: int) -> Module:
    if i == 0:
        return M
    return min_resolution(M, i - 1).syzygies[i]


def nakayama(P: Module) -> Module:
    """nu(P) for a projective module P, as a sum of indecomposable injectives."""
    gens = top_generators(P)
    verts = tuple(v for v in range(P.algebra.num_vertices) for _ in gens[v])
    cover_dim = projective_sum(P.algebra, verts)[0].dim
    if cover_dim != P.dim:
        raise NotProjective("module is not projective")
    return injective_sum(P.algebra, verts)[0]


def _tau_from(res: MinResolution, k: int, name: str) -> Module:
    """Kernel of nu(pi^{-k}) for the resolution ``res``."""
    A = res.module.algebra
    src, tgt = res.terms[k], res.terms[k - 1]
    if not src:
        return zero_module(A)
    I_src = injective_sum(A, src)[0]
    I_tgt = injective_sum(A, tgt)[0]
    mat = pm.nakayama_matrix(A, res.diffs[k - 1], src, tgt)
    K, _ = kernel(ModuleMap(I_src, I_tgt, mat))
    K.name = name
    return K


def tau(M: Module) -> Module:
    return _tau_from(min_resolution(M, 1), 1, f"tau({M.name})")


def tau_n(M: Module, n: int) -> Module:
    """tau_n(M) = tau(Omega^{n-1}(M)), read off pi^{-n} of the minimal resolution of M."""
    if n < 1:
        raise ValueError("n must be at least 1")
    key = ("tau_n", n)
    if key not in M.cache:
        M.cache[key] = _tau_from(min_resolution(M, n), n, f"tau_{n}({M.name})")
    return M.cache[key]


def _cochain_differential(res: MinResolution, N: Module, j: int) -> np.ndarray:
    """delta^j: Hom(P^{-j}, N) -> Hom(P^{-j-1}, N), with Hom(P(v), N) = e_v N."""
    A = N.algebra
    f = A.field
    src, tgt = res.terms[j], res.terms[j + 1]
    rows = sum(N.dims[v] for v in tgt)
    cols = sum(N.dims[v] for v in src)
    out = f.zeros(rows, cols)
    if rows == 0 or cols == 0:
        return out
    d = res.diffs[j]  # P^{-j-1} -> P^{-j}; entries d[r, c], r in src, c in tgt
    roff = np.concatenate([[0], np.cumsum([N.dims[v] for v in tgt])]).astype(int)
    coff = np.concatenate([[0], np.cumsum([N.dims[v] for v in src])]).astype(int)
    for c, vc in enumerate(tgt):
        for r, vr in enumerate(src):
            x = d[r, c]
            if np.any(x != 0):
                out[roff[c] : roff[c + 1], coff[r] : coff[r + 1]] = N.act(x)[N.sl(vc), N.sl(vr)]
    return out


def ext(M: Module, N: Module, i: int) -> int:
    """dim Ext^i(M, N) from the minimal resolution of M."""
    return len(ext_cocycles(M, N, i))


def ext_cocycles(M: Module, N: Module, i: int) -> list[np.ndarray]:
    """Representatives of a basis of Ext^i(M, N) as cocycles in Hom(P^{-i}, N)."""
    f = M.field
    if i == 0:
        return hom_basis(M, N)
    res = min_resolution(M, i + 1)
    size = sum(N.dims[v] for v in res.terms[i])
    if size == 0:
        return []
    delta = _cochain_differential(res, N, i)
    Z = f.nullspace(delta) if delta.shape[0] else f.eye(size)
    prev = _cochain_differential(res, N, i - 1)
    B = f.column_basis(prev) if prev.shape[1] else f.zeros(size, 0)
    reps = []
    current = B
    for j in range(Z.shape[1]):
        z = Z[:, j : j + 1]
        cand = np.concatenate([current, z], axis=1)
        if f.rank(cand) > current.shape[1]:
            reps.append(z.reshape(-1))
            current = cand
    return reps


@dataclass
class PdResult:
    """Projective dimension up to a bound.

    ``finite`` is True with ``value`` = pd, or False (ExceedsBound) with an
    optional periodicity pair (i, j), i < j, such that Omega^i ~ Omega^j,
    which certifies infinite projective dimension.
    """

    finite: bool
    value: int | None
    bound: int
    periodicity: tuple[int, int] | None = None

    def to_json(self) -> dict:
        if self.finite:
            return {"kind": "Finite", "value": self.value}
        out = {"kind": "ExceedsBound", "bound": self.bound}
        if self.periodicity:
            out["periodicity"] = list(self.periodicity)
        return out


def pd_up_to(M: Module, bound: int) -> PdResult:
    res = min_resolution(M, bound)
    for i in range(bound + 1):
        if res.syzygies[i + 1].dim == 0:
            return PdResult(True, 0 if M.dim == 0 else i, bound)
    syz = res.syzygies[: bound + 1]
    for j in range(1, bound + 1):
        for i in range(j):
            if syz[i].dims == syz[j].dims and syz[j].dim and isomorphic(syz[i], syz[j]):
                return PdResult(False, None, bound, (i, j))
    return PdResult(False, None, bound)


def describe(X: Module) -> str:
    """A readable name: a canonical module label when X is one, else the dimension vector."""
    A = X.algebra
    if X.dim == 0:
        return "0"
    canon = getattr(A, "_canon", None)
    if canon is None:
        canon = A._canon = canonical_modules(A)
    for kind in ("projective", "simple", "injective"):
        for Y in canon[kind].values():
            if Y.dims == X.dims and isomorphic(X, Y):
                return Y.name
    return "[" + ",".join(str(d) for d in X.dims) + "]"


def perp_violation(N: Module, M: Module, n: int) -> dict | None:
    """First failing condition of N in M^{perp tau_n}, or None if N belongs to it."""
    T = tau_n(M, n)
    h = hom_basis(N, T)
    if h:
        return {"condition": "hom", "source": N.name, "target": f"tau_{n}({M.name})", "dim": len(h)}
    for i in range(1, n):
        e = ext(M, N, i)
        if e:
            return {"condition": "ext", "degree": i, "source": M.name, "target": N.name, "dim": e}
    return None


def in_perp_tau_n(N: Module, M: Module, n: int) -> bool:
    """N lies in M^{perp tau_n}: Hom(N, tau_n M) = 0 and Ext^i(M, N) = 0 for 0 < i < n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return perp_violation(N, M, n) is None


def is_tau_n_rigid(M: Module, n: int) -> Verdict:
    """Module-route decision of tau_n-rigidity with a named witness on failure."""
    v = perp_violation(M, M, n)
    if v is None:
        return Verdict.holds("module", n=n)
    if v["condition"] == "hom":
        T = tau_n(M, n)
        pairs = []
        for X in decompose(M):
            for Y in decompose(T):
                if hom_basis(X, Y):
                    pairs.append(f"hom({describe(X)}, {describe(Y)}) != 0")
        v["summands"] = pairs
    return Verdict.fails("module", n=n, **v)


def descend_rigidity(M: Module, n: int) -> Verdict:
    """For tau_{n+1}-rigid M: tau_n-rigid iff Hom(P^{-n-1}(M), M) = 0."""
    if not is_tau_n_rigid(M, n + 1).holds_:
        raise PreconditionViolated(f"module is not tau_{n + 1}-rigid")
    res = min_resolution(M, n + 1)
    dim = sum(M.dims[v] for v in res.terms[n + 1])
    if dim == 0:
        return Verdict.holds("descent", n=n)
    return Verdict.fails("descent", n=n, hom_dim=dim, term=format_projective(M.algebra, res.terms[n + 1]))


def projective_support(M: Module, i: int) -> set[int]:
    """Vertices of the indecomposable summands of P^{-i}(M)."""
    return set(min_resolution(M, i).terms[i])
