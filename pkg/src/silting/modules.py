"""Finite-dimensional left modules over a based algebra and their morphisms.

The basis of a module is grouped by vertex: coordinates ``offsets[v]`` to
``offsets[v+1]`` span ``e_v M``.  A module stores the full matrix of every
algebra generator; the action of any other basis element is the product of
generator matrices along its word.  Module maps are matrices
``target.dim x source.dim`` that are block diagonal for the vertex grading.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .algebra import BasedAlgebra, QuotientAlgebra
from .linalg import Field, block_diag
from .verdict import Verdict


class AlgebraMismatch(ValueError):
    pass


class NotAnnihilated(ValueError):
    pass


class InvalidModule(ValueError):
    pass


class Module:
    """A left module given by the matrices of the algebra generators."""

    def __init__(self, algebra: BasedAlgebra, dims: Sequence[int], gens: Sequence[np.ndarray], name: str = "", check: bool = True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.num_vertices:
            raise InvalidModule("dimension vector length differs from the number of vertices")
        self.offsets = tuple(np.concatenate([[0], np.cumsum(self.dims)]).astype(int))
        n = self.offsets[-1]
        f = algebra.field
        self.gens = tuple(np.asarray(g, dtype=f.dtype).reshape(n, n) for g in gens)
        if len(self.gens) != len(algebra.generators):
            raise InvalidModule("one matrix per algebra generator is required")
        self.name = name
        self._actions: np.ndarray | None = None
        self.cache: dict = {}
        if check:
            self.check()

    # ----------------------------------------------------------------- layout
    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return self.offsets[-1]

    def sl(self, v: int) -> slice:
        return slice(self.offsets[v], self.offsets[v + 1])

    def vertex_of(self, k: int) -> int:
        return int(np.searchsorted(self.offsets, k, side="right") - 1)

    def dimvec(self) -> dict[str, int]:
        return dict(zip(self.algebra.vertices, self.dims))

    def is_zero(self) -> bool:
        return self.dim == 0

    def __repr__(self):
        dv = ",".join(str(d) for d in self.dims)
        return f"Module({self.name or '?'}, dim=({dv}))"

    # ----------------------------------------------------------------- action
    def actions(self) -> np.ndarray:
        """Stack of action matrices of all algebra basis elements, shape (d, n, n)."""
        if self._actions is None:
            A = self.algebra
            f = self.field
            out = np.zeros((A.dim, self.dim, self.dim), dtype=f.dtype)
            for b in range(A.dim):
                w = A.words[b]
                if w is None:
                    v = A.idempotents.index(b)
                    s = self.sl(v)
                    out[b, s, s] = f.eye(self.dims[v])
                else:
                    m = self.gens[w[0]]
                    for g in w[1:]:
                        m = f.matmul(m, self.gens[g])
                    out[b] = m
            self._actions = out
        return self._actions

    def action(self, b: int) -> np.ndarray:
        return self.actions()[b]

    def act(self, x: np.ndarray) -> np.ndarray:
        """Matrix of the algebra element x (a coordinate vector)."""
        return self.field.reduce(np.tensordot(x, self.actions(), axes=(0, 0)))

    def check(self) -> None:
        """Validate grading of the generator matrices and multiplicativity of the action."""
        A = self.algebra
        f = self.field
        for g, (name, _) in enumerate(A.generators):
            blk = A.gen_blocks[g]
            mask = np.ones((self.dim, self.dim), dtype=bool)
            if blk is not None:
                t, s = blk
                mask[self.sl(t), self.sl(s)] = False
            if np.any(self.gens[g][mask] != 0):
                raise InvalidModule(f"generator {name} acts outside its vertex block")
        acts = self.actions()
        if self.dim == 0:
            return
        lhs = f.reduce(np.einsum("iab,jbc->ijac", acts, acts))
        rhs = f.reduce(np.einsum("ijk,kac->ijac", A.mult, acts))
        if np.any(lhs != rhs):
            raise InvalidModule("the relations of the algebra do not act as zero")

    # -------------------------------------------------------------------- I/O
    @classmethod
    def from_blocks(cls, algebra: BasedAlgebra, dims, blocks: dict, name: str = "", check: bool = True) -> "Module":
        """Build from per-generator blocks ``e_t M <- e_s M``.

        Args:
            algebra: the algebra.
            dims: dimension vector, as a sequence or a mapping from vertex label.
            blocks: generator name -> (dim at target) x (dim at source) matrix;
                missing generators act as zero.
        """
        f = algebra.field
        if isinstance(dims, dict):
            unknown = set(map(str, dims)) - set(algebra.vertices)
            if unknown:
                raise InvalidModule(f"unknown vertices {sorted(unknown)}")
            dims = [int(dims.get(v, 0)) for v in algebra.vertices]
        offsets = np.concatenate([[0], np.cumsum(dims)]).astype(int)
        n = int(offsets[-1])
        names = [g for g, _ in algebra.generators]
        unknown = set(blocks) - set(names)
        if unknown:
            raise InvalidModule(f"unknown arrows {sorted(unknown)}")
        gens = []
        for g, gname in enumerate(names):
            m = f.zeros(n, n)
            if gname in blocks:
                blk = algebra.gen_blocks[g]
                data = f.array(blocks[gname]) if len(blocks[gname]) else None
                if blk is None:
                    if data is not None and np.any(data != 0):
                        raise InvalidModule(f"{gname} is zero in the algebra")
                else:
                    t, s = blk
                    shape = (dims[t], dims[s])
                    if data is None:
                        data = f.zeros(*shape)
                    data = data.reshape(shape) if data.size == shape[0] * shape[1] else data
                    if data.shape != shape:
                        raise InvalidModule(f"block for {gname} must be {shape[0]}x{shape[1]}")
                    m[offsets[t] : offsets[t + 1], offsets[s] : offsets[s + 1]] = data
            gens.append(m)
        return cls(algebra, dims, gens, name=name, check=check)

    @classmethod
    def from_json(cls, algebra: BasedAlgebra, data: dict, name: str = "") -> "Module":
        try:
            dims = {str(k): int(v) for k, v in data["dim"].items()}
            return cls.from_blocks(algebra, dims, dict(data.get("arrows", {})), name=name)
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidModule(f"malformed module JSON: {exc}") from exc

    def blocks(self) -> dict[str, np.ndarray]:
        out = {}
        for g, (gname, _) in enumerate(self.algebra.generators):
            blk = self.algebra.gen_blocks[g]
            if blk is None:
                continue
            t, s = blk
            out[gname] = self.gens[g][self.sl(t), self.sl(s)]
        return out

    def to_json(self) -> dict:
        f = self.field
        return {
            "dim": self.dimvec(),
            "arrows": {
                name: [[f.to_str(x) for x in row] for row in blk]
                for name, blk in self.blocks().items()
                if blk.size and np.any(blk != 0)
            },
        }

    def with_name(self, name: str) -> "Module":
        self.name = name
        return self


@dataclass(eq=False)
class ModuleMap:
    """A module homomorphism; ``matrix`` has shape (target.dim, source.dim)."""

    source: Module
    target: Module
    matrix: np.ndarray

    def __post_init__(self):
        if self.source.algebra is not self.target.algebra:
            raise AlgebraMismatch("source and target live over different algebras")
        assert self.matrix.shape == (self.target.dim, self.source.dim)

    @property
    def field(self) -> Field:
        return self.source.field

    def after(self, other: "ModuleMap") -> "ModuleMap":
        """Composite self . other."""
        return ModuleMap(other.source, self.target, self.field.matmul(self.matrix, other.matrix))

    def rank(self) -> int:
        return self.field.rank(self.matrix)

    def is_zero(self) -> bool:
        return self.field.is_zero(self.matrix)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def block(self, v: int) -> np.ndarray:
        return self.matrix[self.target.sl(v), self.source.sl(v)]

    def check(self) -> None:
        """Assert grading and the intertwining equations."""
        M, N, f = self.source, self.target, self.field
        for v in range(M.algebra.num_vertices):
            for w in range(M.algebra.num_vertices):
                if v != w and np.any(self.matrix[N.sl(v), M.sl(w)] != 0):
                    raise AssertionError("map does not respect the vertex grading")
        for g in range(len(M.gens)):
            if np.any(f.matmul(self.matrix, M.gens[g]) != f.matmul(N.gens[g], self.matrix)):
                raise AssertionError("map does not commute with the action")


def identity(M: Module) -> ModuleMap:
    return ModuleMap(M, M, M.field.eye(M.dim))


def zero_map(M: Module, N: Module) -> ModuleMap:
    return ModuleMap(M, N, M.field.zeros(N.dim, M.dim))


def zero_module(A: BasedAlgebra) -> Module:
    return Module(A, [0] * A.num_vertices, [A.field.zeros(0, 0)] * len(A.generators), name="0", check=False)


def _same_algebra(*mods: Module) -> BasedAlgebra:
    A = mods[0].algebra
    for M in mods[1:]:
        if M.algebra is not A:
            raise AlgebraMismatch("modules live over different algebras")
    return A


# ---------------------------------------------------------------------------
# Sums, submodules, quotients
# ---------------------------------------------------------------------------


def direct_sum(mods: Sequence[Module], name: str = "") -> tuple[Module, list[np.ndarray], list[np.ndarray]]:
    """Direct sum with its inclusion and projection matrices.

    The basis of the sum at vertex v lists the v-parts of the summands in order,
    so the summands' bases are interleaved across vertices.
    """
    if not mods:
        raise ValueError("empty direct sum; use zero_module")
    A = _same_algebra(*mods)
    f = A.field
    r = A.num_vertices
    dims = [sum(M.dims[v] for M in mods) for v in range(r)]
    total = sum(dims)
    # position of each summand's coordinates inside the sum
    positions = [np.zeros(M.dim, dtype=int) for M in mods]
    pos = 0
    for v in range(r):
        for k, M in enumerate(mods):
            positions[k][M.offsets[v] : M.offsets[v + 1]] = np.arange(pos, pos + M.dims[v])
            pos += M.dims[v]
    gens = []
    for g in range(len(A.generators)):
        m = f.zeros(total, total)
        for k, M in enumerate(mods):
            m[np.ix_(positions[k], positions[k])] = M.gens[g]
        gens.append(m)
    S = Module(A, dims, gens, name=name or "+".join(M.name or "?" for M in mods), check=False)
    incl, proj = [], []
    for k, M in enumerate(mods):
        i = f.zeros(total, M.dim)
        i[positions[k], np.arange(M.dim)] = 1
        incl.append(i)
        proj.append(np.ascontiguousarray(i.T))
    S.cache["summands"] = (list(mods), incl, proj)
    return S, incl, proj


def direct_sum_module(mods: Sequence[Module], name: str = "") -> Module:
    if not mods:
        raise ValueError("empty direct sum")
    return direct_sum(mods, name)[0]


def power(M: Module, r: int) -> Module:
    if r == 0:
        return zero_module(M.algebra)
    return direct_sum([M] * r, name=f"{M.name}^{r}")[0]


def submodule(M: Module, bases: Sequence[np.ndarray], name: str = "") -> tuple[Module, np.ndarray]:
    """Submodule spanned vertexwise by the columns of ``bases[v]`` (inside e_v M).

    Returns the submodule and its inclusion matrix (M.dim x sub.dim).
    """
    f = M.field
    A = M.algebra
    dims = [b.shape[1] for b in bases]
    incl = block_diag(f, [np.asarray(b, dtype=f.dtype).reshape(M.dims[v], dims[v]) for v, b in enumerate(bases)])
    sub_off = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    total = int(sub_off[-1])
    gens = []
    for g in range(len(A.generators)):
        m = f.zeros(total, total)
        blk = A.gen_blocks[g]
        if blk is not None and total:
            t, s = blk
            if dims[t] and dims[s]:
                image = f.matmul(M.gens[g][M.sl(t), M.sl(s)], bases[s])
                coeffs = f.solve(bases[t], image)
                if coeffs is None:
                    raise ValueError("subspace is not a submodule")
                m[sub_off[t] : sub_off[t + 1], sub_off[s] : sub_off[s + 1]] = coeffs
            elif dims[s] and not dims[t]:
                image = f.matmul(M.gens[g][M.sl(t), M.sl(s)], bases[s])
                if np.any(image != 0):
                    raise ValueError("subspace is not a submodule")
        gens.append(m)
    return Module(A, dims, gens, name=name, check=False), incl


def quotient(M: Module, bases: Sequence[np.ndarray], name: str = "") -> tuple[Module, np.ndarray]:
    """Quotient of M by the submodule spanned vertexwise by ``bases``.

    Returns the quotient and the projection matrix (Q.dim x M.dim).
    """
    f = M.field
    A = M.algebra
    r = A.num_vertices
    comp = [f.complement(bases[v], M.dims[v]) for v in range(r)]
    dims = [c.shape[1] for c in comp]
    # coordinates in the basis [bases[v] | comp[v]]; the quotient keeps the second part
    proj_blocks = []
    for v in range(r):
        change = np.concatenate([bases[v], comp[v]], axis=1).astype(f.dtype)
        inv = f.inverse(change) if change.shape[0] else f.zeros(0, 0)
        proj_blocks.append(inv[bases[v].shape[1] :, :])
    proj = block_diag(f, proj_blocks)
    off = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    total = int(off[-1])
    gens = []
    for g in range(len(A.generators)):
        m = f.zeros(total, total)
        blk = A.gen_blocks[g]
        if blk is not None:
            t, s = blk
            if dims[t] and dims[s]:
                m[off[t] : off[t + 1], off[s] : off[s + 1]] = f.chain(
                    proj_blocks[t], M.gens[g][M.sl(t), M.sl(s)], comp[s]
                )
        gens.append(m)
    return Module(A, dims, gens, name=name, check=False), proj


def kernel(f: ModuleMap) -> tuple[Module, ModuleMap]:
    """Kernel with its inclusion into the source."""
    F = f.field
    M = f.source
    bases = [F.nullspace(f.block(v)) if M.dims[v] else F.zeros(0, 0) for v in range(M.algebra.num_vertices)]
    K, incl = submodule(M, bases)
    return K, ModuleMap(K, M, incl)


def image(f: ModuleMap) -> tuple[Module, ModuleMap]:
    """Image with its inclusion into the target."""
    F = f.field
    N = f.target
    bases = [F.column_basis(f.block(v)) for v in range(N.algebra.num_vertices)]
    I, incl = submodule(N, bases)
    return I, ModuleMap(I, N, incl)


def cokernel(f: ModuleMap) -> tuple[Module, ModuleMap]:
    """Cokernel with the projection from the target."""
    F = f.field
    N = f.target
    bases = [F.column_basis(f.block(v)) for v in range(N.algebra.num_vertices)]
    C, proj = quotient(N, bases)
    return C, ModuleMap(N, C, proj)


def radical_bases(M: Module) -> list[np.ndarray]:
    """Per vertex, a basis of e_v rad(M) where rad(M) = rad(A) M."""
    f = M.field
    A = M.algebra
    bases = []
    for v in range(A.num_vertices):
        cols = [M.action(b)[M.sl(v), :] for b in A.radical if A.left[b] == v]
        stacked = np.concatenate(cols, axis=1) if cols else f.zeros(M.dims[v], 0)
        bases.append(f.column_basis(stacked))
    return bases


def radical_submodule(M: Module) -> tuple[Module, np.ndarray]:
    return submodule(M, radical_bases(M), name=f"rad({M.name})")


def top_generators(M: Module) -> list[list[np.ndarray]]:
    """Per vertex, vectors of M (supported in e_v M) whose images form a basis of e_v top(M)."""
    key = "top_generators"
    if key not in M.cache:
        f = M.field
        out = []
        for v, rad_v in enumerate(radical_bases(M)):
            comp = f.complement(rad_v, M.dims[v])
            vecs = []
            for j in range(comp.shape[1]):
                full = f.zeros(M.dim)
                full[M.sl(v)] = comp[:, j]
                vecs.append(full)
            out.append(vecs)
        M.cache[key] = out
    return M.cache[key]


def top(M: Module) -> Module:
    return quotient(M, radical_bases(M), name=f"top({M.name})")[0]


# ---------------------------------------------------------------------------
# Hom spaces
# ---------------------------------------------------------------------------


def hom_basis(M: Module, N: Module) -> list[np.ndarray]:
    """Basis of Hom(M, N) as matrices of shape (N.dim, M.dim)."""
    A = _same_algebra(M, N)
    key = ("hom", id(N))
    hit = M.cache.get(key)
    if hit is not None and hit[0] is N:
        return hit[1]
    f = A.field
    r = A.num_vertices
    var_off = [0]
    for v in range(r):
        var_off.append(var_off[-1] + N.dims[v] * M.dims[v])
    nvars = var_off[-1]
    rows = []
    for g in range(len(A.generators)):
        blk = A.gen_blocks[g]
        if blk is None:
            continue
        t, s = blk
        nt, ns, mt, ms = N.dims[t], N.dims[s], M.dims[t], M.dims[s]
        if nt * ms == 0:
            continue
        a = M.gens[g][M.sl(t), M.sl(s)]  # mt x ms
        b = N.gens[g][N.sl(t), N.sl(s)]  # nt x ns
        eq = f.zeros(nt * ms, nvars)
        # row-major vec: vec(X_t a) = (I_nt kron a^T) vec(X_t), vec(b X_s) = (b kron I_ms) vec(X_s)
        if mt:
            eq[:, var_off[t] : var_off[t + 1]] += np.kron(f.eye(nt), a.T)
        if ns:
            eq[:, var_off[s] : var_off[s + 1]] -= np.kron(b, f.eye(ms))
        rows.append(f.reduce(eq))
    if nvars == 0:
        sols = f.zeros(0, 0)
    elif rows:
        sols = f.nullspace(np.concatenate(rows, axis=0))
    else:
        sols = f.eye(nvars)
    out = []
    for j in range(sols.shape[1]):
        mat = f.zeros(N.dim, M.dim)
        for v in range(r):
            if N.dims[v] * M.dims[v]:
                mat[N.sl(v), M.sl(v)] = sols[var_off[v] : var_off[v + 1], j].reshape(N.dims[v], M.dims[v])
        out.append(mat)
    M.cache[key] = (N, out)
    return out


def hom(M: Module, N: Module) -> list[ModuleMap]:
    return [ModuleMap(M, N, m) for m in hom_basis(M, N)]


def hom_dim(M: Module, N: Module) -> int:
    return len(hom_basis(M, N))


def span_rank(field: Field, mats: Iterable[np.ndarray]) -> int:
    vecs = [m.reshape(-1) for m in mats]
    if not vecs:
        return 0
    return field.rank(np.stack(vecs))


# ---------------------------------------------------------------------------
# Annihilators, sincerity, restriction, duality
# ---------------------------------------------------------------------------


def annihilator(M: Module) -> np.ndarray:
    """Rows form a basis of {a in A : a M = 0}; the result is a two-sided ideal."""
    A = M.algebra
    f = M.field
    if M.dim == 0:
        return f.eye(A.dim)
    rep = M.actions().reshape(A.dim, -1).T  # (n*n) x d
    ker = f.nullspace(rep)
    return np.ascontiguousarray(ker.T)


def is_faithful(M: Module) -> bool:
    return annihilator(M).shape[0] == 0


def is_sincere(M: Module) -> bool:
    return all(d > 0 for d in M.dims)


def restrict(M: Module, G: QuotientAlgebra) -> Module:
    """M viewed as a module over the quotient G = A / I (requires I M = 0)."""
    A = M.algebra
    if G.parent is not A:
        raise AlgebraMismatch("quotient is not of the module's algebra")
    f = M.field
    ideal_in = f.nullspace(G.projection.T).T if G.projection.shape[1] else f.eye(A.dim)
    for x in ideal_in:
        if np.any(M.act(x) != 0):
            raise NotAnnihilated("the ideal does not annihilate the module")
    vmap = [A.vertices.index(v) for v in G.vertices]
    dropped = [v for v in range(A.num_vertices) if v not in vmap]
    if any(M.dims[v] for v in dropped):
        raise NotAnnihilated("module is supported on a vertex killed in the quotient")
    perm = np.concatenate([np.arange(M.offsets[v], M.offsets[v + 1]) for v in vmap]).astype(int)
    gens = []
    for _, vec in G.generators:
        act = M.act(G.lift(vec))
        gens.append(act[np.ix_(perm, perm)])
    return Module(G, [M.dims[v] for v in vmap], gens, name=M.name, check=True)


def inflate(N: Module, G: QuotientAlgebra) -> Module:
    """A module over the quotient G = A / I viewed as an A-module."""
    A = G.parent
    if N.algebra is not G:
        raise AlgebraMismatch("module is not over the given quotient")
    f = N.field
    vpos = {A.vertices.index(v): i for i, v in enumerate(G.vertices)}
    dims = [N.dims[vpos[v]] if v in vpos else 0 for v in range(A.num_vertices)]
    order = [v for v in range(A.num_vertices) if v in vpos]
    # coordinates of N are grouped by G's vertex order; regroup by A's
    perm = np.concatenate([np.arange(N.offsets[vpos[v]], N.offsets[vpos[v] + 1]) for v in order]).astype(int) if order else np.zeros(0, dtype=int)
    gens = []
    for _, vec in A.generators:
        act = N.act(G.project(vec))
        gens.append(act[np.ix_(perm, perm)])
    return Module(A, dims, gens, name=N.name, check=True)


def dual(M: Module) -> Module:
    """D(M) = Hom_k(M, k) as a module over the opposite algebra (dual bases)."""
    op = M.algebra.opposite()
    return Module(op, M.dims, [np.ascontiguousarray(g.T) for g in M.gens], name=f"D({M.name})", check=False)


# ---------------------------------------------------------------------------
# Canonical modules
# ---------------------------------------------------------------------------


def projective(A: BasedAlgebra, v: int) -> Module:
    """P(v) = A e_v with the left regular action."""
    return projective_sum(A, (v,))[0].with_name(f"P({A.vertices[v]})")


def projective_sum(A: BasedAlgebra, verts: Sequence[int]) -> tuple[Module, dict]:
    """The module P(v_1) + ... + P(v_k) with an index of its basis.

    Returns the module and a dict mapping (summand position, algebra basis index)
    to the module coordinate; summand ``c`` has basis {b : right[b] = v_c}.
    """
    key = tuple(verts)
    cache = A.__dict__.setdefault("_proj_cache", {})
    if key in cache:
        return cache[key]
    f = A.field
    r = A.num_vertices
    members = [[(c, b) for c, vc in enumerate(verts) for b in range(A.dim) if A.right[b] == vc and A.left[b] == v] for v in range(r)]
    order = [cb for v in range(r) for cb in members[v]]
    index = {cb: k for k, cb in enumerate(order)}
    n = len(order)
    gens = []
    for _, vec in A.generators:
        m = f.zeros(n, n)
        for (c, b), col in index.items():
            prod = A.mul(vec, A.unit_vector(b))
            for z in np.nonzero(prod)[0]:
                m[index[(c, int(z))], col] = prod[z]
        gens.append(m)
    label = "+".join(f"P({A.vertices[v]})" for v in verts) or "0"
    P = Module(A, [len(members[v]) for v in range(r)], gens, name=label, check=False)
    cache[key] = (P, index)
    return P, index


def injective_sum(A: BasedAlgebra, verts: Sequence[int]) -> tuple[Module, dict]:
    """I(v_1) + ... + I(v_k) with I(v) = D(e_v A); dual basis of {b : left[b] = v}.

    The dual basis vector of b sits at vertex right[b]; a acts by
    (a.phi)(y) = phi(y a).
    """
    key = tuple(verts)
    cache = A.__dict__.setdefault("_inj_cache", {})
    if key in cache:
        return cache[key]
    f = A.field
    r = A.num_vertices
    members = [[(c, b) for c, vc in enumerate(verts) for b in range(A.dim) if A.left[b] == vc and A.right[b] == v] for v in range(r)]
    order = [cb for v in range(r) for cb in members[v]]
    index = {cb: k for k, cb in enumerate(order)}
    n = len(order)
    gens = []
    for _, vec in A.generators:
        m = f.zeros(n, n)
        # (a.b*) = sum_y [coefficient of b in y*a] y*
        for (c, b), col in index.items():
            for (c2, y), row in index.items():
                if c2 != c:
                    continue
                coeff = A.mul(A.unit_vector(y), vec)[b]
                if coeff != 0:
                    m[row, col] = coeff
        gens.append(m)
    label = "+".join(f"I({A.vertices[v]})" for v in verts) or "0"
    I = Module(A, [len(members[v]) for v in range(r)], gens, name=label, check=False)
    cache[key] = (I, index)
    return I, index


def injective(A: BasedAlgebra, v: int) -> Module:
    return injective_sum(A, (v,))[0].with_name(f"I({A.vertices[v]})")


def simple(A: BasedAlgebra, v: int) -> Module:
    f = A.field
    dims = [1 if w == v else 0 for w in range(A.num_vertices)]
    return Module(A, dims, [f.zeros(1, 1)] * len(A.generators), name=f"S({A.vertices[v]})", check=False)


def regular_module(A: BasedAlgebra) -> Module:
    return projective_sum(A, tuple(range(A.num_vertices)))[0].with_name("A")


def canonical_modules(A: BasedAlgebra) -> dict[str, dict[str, Module]]:
    """Simple, indecomposable projective and indecomposable injective modules by vertex label."""
    return {
        "simple": {A.vertices[v]: simple(A, v) for v in range(A.num_vertices)},
        "projective": {A.vertices[v]: projective(A, v) for v in range(A.num_vertices)},
        "injective": {A.vertices[v]: injective(A, v) for v in range(A.num_vertices)},
    }


# ---------------------------------------------------------------------------
# Approximations and gen_n
# ---------------------------------------------------------------------------


def trace_precover(M: Module, X: Module) -> ModuleMap:
    """The evaluation map M^r -> X built from a basis of Hom(M, X)."""
    H = hom_basis(M, X)
    if not H:
        return zero_map(zero_module(M.algebra), X)
    S, _, proj = direct_sum([M] * len(H))
    f = M.field
    mat = f.zeros(X.dim, S.dim)
    for h, p in zip(H, proj):
        mat = mat + f.matmul(h, p)
    return ModuleMap(S, X, f.reduce(mat))


def right_approximation(X: Module, gens: Sequence[Module]) -> ModuleMap:
    """Right add(gens)-approximation of X, greedily minimized.

    Starts from the sum of trace precovers of the generators and discards
    copies while every map from a generator to X still factors through it.
    """
    f = X.field
    copies = [(k, h) for k, G in enumerate(gens) for h in hom_basis(G, X)]
    target = [len(hom_basis(G, X)) for G in gens]

    def factors(chosen):
        for k, G in enumerate(gens):
            if not target[k]:
                continue
            mats = [f.matmul(h, u) for (l, h) in chosen for u in hom_basis(G, gens[l])]
            if span_rank(f, mats) < target[k]:
                return False
        return True

    chosen = list(copies)
    for c in list(copies):
        trial = [x for x in chosen if x is not c]
        if factors(trial):
            chosen = trial
    if not chosen:
        return zero_map(zero_module(X.algebra), X)
    S, _, proj = direct_sum([gens[k] for k, _ in chosen])
    mat = f.zeros(X.dim, S.dim)
    for (k, h), p in zip(chosen, proj):
        mat = mat + f.matmul(h, p)
    return ModuleMap(S, X, f.reduce(mat))


def left_approximation(X: Module, gens: Sequence[Module]) -> ModuleMap:
    """Left add(gens)-approximation of X, greedily minimized (dual of the above)."""
    f = X.field
    copies = [(k, h) for k, G in enumerate(gens) for h in hom_basis(X, G)]
    target = [len(hom_basis(X, G)) for G in gens]

    def factors(chosen):
        for k, G in enumerate(gens):
            if not target[k]:
                continue
            mats = [f.matmul(u, h) for (l, h) in chosen for u in hom_basis(gens[l], G)]
            if span_rank(f, mats) < target[k]:
                return False
        return True

    chosen = list(copies)
    for c in list(copies):
        trial = [x for x in chosen if x is not c]
        if factors(trial):
            chosen = trial
    if not chosen:
        return zero_map(X, zero_module(X.algebra))
    S, incl, _ = direct_sum([gens[k] for k, _ in chosen])
    mat = f.zeros(S.dim, X.dim)
    for (k, h), i in zip(chosen, incl):
        mat = mat + f.matmul(i, h)
    return ModuleMap(X, S, f.reduce(mat))


def in_gen_n(X: Module, M: Module, n: int, gens: Sequence[Module] | None = None, minimal: bool = True) -> Verdict:
    """Decide X in gen_n(M) along the canonical precover chain.

    Args:
        X: module to test.
        M: the generator module.
        n: length of the required exact sequence.
        gens: indecomposable summands of M (computed when omitted).
        minimal: use minimal right approximations (default) instead of the
            raw trace precover, which keeps the chain small.

    Returns:
        Holds with the chain of approximation dimensions, or Fails naming the
        first stage whose approximation is not surjective.  Holds is always
        sound; Fails is complete only when X lies in the perpendicular class of
        a tau_n-tilting M.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if gens is None:
        from .decompose import basic_summands

        gens = basic_summands(M)
    chain = []
    Y = X
    for stage in range(1, n + 1):
        if Y.dim == 0:
            chain.append(0)
            continue
        p = right_approximation(Y, gens) if minimal else trace_precover(M, Y)
        if not p.is_surjective():
            return Verdict.fails(
                "module:gen-chain",
                stage=stage,
                image_dim=p.rank(),
                target_dim=Y.dim,
                chain=chain,
                semantics="canonical-chain",
            )
        chain.append(p.source.dim)
        Y, _ = kernel(p)
    return Verdict.holds("module:gen-chain", chain=chain)
