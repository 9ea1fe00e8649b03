"""Brute-force ground truth over small prime fields.

Modules of a given dimension vector are enumerated as all assignments of
generator matrices (the first nonzero generator block in rank normal form),
filtered by the module axioms in vectorised batches, bucketed by cheap
isomorphism invariants, deduplicated with the isomorphism test and finally
filtered by the indecomposability certificate.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .algebra import BasedAlgebra
from .decompose import DecompositionInconclusive, end_algebra, is_indecomposable, isomorphic
from .homology import describe, is_tau_n_rigid, pd_up_to
from .linalg import PrimeField
from .modules import Module, direct_sum_module
from .decompose import basic_summands
from .verdict import certificate_digest

DEFAULT_WORK_BOUND = 4_000_000
CHUNK = 1 << 15


class WorkBoundExceeded(RuntimeError):
    """The enumeration would exceed the configured work bound."""


def work_bound() -> int:
    """The candidate budget, from ``SILT_WORK_BOUND`` when set."""
    raw = os.environ.get("SILT_WORK_BOUND")
    return int(raw) if raw else DEFAULT_WORK_BOUND


@dataclass
class EnumerationConfig:
    """Parameters of an enumeration run.

    Attributes:
        algebra: a basic algebra over a prime field.
        max_dim: largest total dimension enumerated.
        bound: maximal number of candidate assignments examined.
        seed: seed for the randomised parts of the certificates.
    """

    algebra: BasedAlgebra
    max_dim: int
    bound: int | None = None
    seed: int = 0

    def validate(self) -> int:
        f = self.algebra.field
        if not isinstance(f, PrimeField):
            raise ValueError("enumeration needs a finite prime field")
        bound = self.bound if self.bound is not None else work_bound()
        if f.p * self.max_dim**2 > bound:
            raise WorkBoundExceeded(f"p * max_dim^2 = {f.p * self.max_dim ** 2} exceeds {bound}")
        return bound


# ---------------------------------------------------------------------------
# Dimension vectors
# ---------------------------------------------------------------------------


def _connected(A: BasedAlgebra, support: set[int]) -> bool:
    if len(support) <= 1:
        return True
    adj = {v: set() for v in support}
    for blk in A.gen_blocks:
        if blk and blk[0] in support and blk[1] in support:
            adj[blk[0]].add(blk[1])
            adj[blk[1]].add(blk[0])
    start = next(iter(support))
    seen, stack = {start}, [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == support


def dimension_vectors(A: BasedAlgebra, max_dim: int) -> list[tuple[int, ...]]:
    """Dimension vectors of total 1..max_dim with connected support, sorted by total then lexicographically."""
    r = A.num_vertices
    out = []
    for dims in itertools.product(range(max_dim + 1), repeat=r):
        s = sum(dims)
        if 1 <= s <= max_dim and _connected(A, {v for v in range(r) if dims[v]}):
            out.append(dims)
    return sorted(out, key=lambda d: (sum(d), d))


class _Plan:
    """Per dimension vector: which generator blocks are free and how many candidates there are."""

    def __init__(self, A: BasedAlgebra, dims: tuple[int, ...]):
        self.A = A
        self.dims = dims
        self.shapes = []
        for blk in A.gen_blocks:
            self.shapes.append((0, 0) if blk is None else (dims[blk[0]], dims[blk[1]]))
        self.free = [g for g, (a, b) in enumerate(self.shapes) if a * b]
        self.first = self.free[0] if self.free else None
        self.rest = self.free[1:]
        self.entries = sum(self.shapes[g][0] * self.shapes[g][1] for g in self.rest)
        p = A.field.p
        nf = min(self.shapes[self.first]) + 1 if self.first is not None else 1
        self.count = nf * p**self.entries


# ---------------------------------------------------------------------------
# Batched module-axiom filter
# ---------------------------------------------------------------------------


def _batch_candidates(plan: _Plan, start: int, stop: int, rank: int) -> dict[int, np.ndarray]:
    """Generator blocks for the assignments numbered start..stop-1 (base-p digits)."""
    A = plan.A
    p = A.field.p
    codes = np.arange(start, stop, dtype=np.int64)
    digits = np.zeros((len(codes), plan.entries), dtype=np.int64)
    for k in range(plan.entries):
        codes, digits[:, k] = np.divmod(codes, p)
    out = {}
    pos = 0
    for g in plan.rest:
        a, b = plan.shapes[g]
        out[g] = digits[:, pos : pos + a * b].reshape(-1, a, b)
        pos += a * b
    if plan.first is not None:
        a, b = plan.shapes[plan.first]
        nf = np.zeros((a, b), dtype=np.int64)
        nf[np.arange(rank), np.arange(rank)] = 1
        out[plan.first] = np.broadcast_to(nf, (stop - start, a, b))
    return out


def _basis_actions(plan: _Plan, G: dict[int, np.ndarray], n: int) -> dict[int, np.ndarray]:
    A = plan.A
    p = A.field.p
    dims = plan.dims
    acts = {}
    for b in range(A.dim):
        w = A.words[b]
        if w is None:
            continue
        shape = (n, dims[A.left[b]], dims[A.right[b]])
        if shape[1] * shape[2] == 0:
            continue
        m = G.get(w[0])
        for g in w[1:]:
            if m is None:
                break
            nxt = G.get(g)
            m = None if nxt is None else np.einsum("nij,njk->nik", m, nxt) % p
        acts[b] = m if m is not None else np.zeros(shape, dtype=np.int64)
    return acts


def _axioms_hold(plan: _Plan, G: dict[int, np.ndarray], n: int) -> np.ndarray:
    """Mask of candidates on which every generator times basis element acts correctly."""
    A = plan.A
    p = A.field.p
    dims = plan.dims
    acts = _basis_actions(plan, G, n)
    ok = np.ones(n, dtype=bool)
    idem = set(A.idempotents)
    for g, (_, vec) in enumerate(A.generators):
        if g not in G:
            continue
        for z in range(A.dim):
            if z in idem or A.gen_blocks[g][1] != A.left[z]:
                continue
            t, s = A.gen_blocks[g][0], A.right[z]
            if dims[t] * dims[s] == 0:
                continue
            lhs = np.einsum("nij,njk->nik", G[g], acts[z]) if z in acts else np.zeros((n, dims[t], dims[s]), dtype=np.int64)
            coeff = A.field.reduce(vec @ A.mult[:, z, :])
            rhs = np.zeros_like(lhs)
            for u in np.nonzero(coeff)[0]:
                if u in acts:
                    rhs = rhs + int(coeff[u]) * acts[u]
            ok &= np.all(((lhs - rhs) % p) == 0, axis=(1, 2))
    return ok


# ---------------------------------------------------------------------------
# Cheap invariants
# ---------------------------------------------------------------------------


def _invariants(M: Module) -> tuple:
    """Ranks of basis actions, of sums of parallel generators, and of stacked maps at each vertex."""
    A = M.algebra
    f = M.field
    acts = M.actions()
    key = [f.rank(acts[b]) for b in range(A.dim) if A.words[b] is not None]
    blocks = A.gen_blocks
    for g, h in itertools.combinations(range(len(blocks)), 2):
        if blocks[g] is not None and blocks[g] == blocks[h]:
            key.append(f.rank(f.reduce(M.gens[g] + M.gens[h])))
    for v in range(A.num_vertices):
        outs = [M.gens[g] for g, blk in enumerate(blocks) if blk and blk[1] == v]
        ins = [M.gens[g] for g, blk in enumerate(blocks) if blk and blk[0] == v]
        key.append(f.rank(np.concatenate(outs, axis=0)) if outs else 0)
        key.append(f.rank(np.concatenate(ins, axis=1)) if ins else 0)
    return tuple(key)


def _splits_simple(M: Module) -> bool:
    """Some simple S(v) is a direct summand: a socle vector at v outside the radical."""
    A = M.algebra
    f = M.field
    for v in range(A.num_vertices):
        d = M.dims[v]
        if not d:
            continue
        s = M.sl(v)
        outs = [M.gens[g][:, s] for g, blk in enumerate(A.gen_blocks) if blk and blk[1] == v]
        soc = f.nullspace(np.concatenate(outs, axis=0)) if outs else f.eye(d)
        ins = [M.gens[g][s, :] for g, blk in enumerate(A.gen_blocks) if blk and blk[0] == v]
        rad = np.concatenate(ins, axis=1) if ins else f.zeros(d, 0)
        if soc.shape[1] and f.rank(np.concatenate([rad, soc], axis=1)) > f.rank(rad):
            return True
    return False


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _modules_of(plan: _Plan) -> Iterator[Module]:
    A = plan.A
    f = A.field
    dims = plan.dims
    offsets = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    total = int(offsets[-1])
    if plan.first is None:
        yield Module(A, dims, [f.zeros(total, total) for _ in A.generators], check=False)
        return
    per_rank = A.field.p**plan.entries
    for rank in range(min(plan.shapes[plan.first]) + 1):
        for start in range(0, per_rank, CHUNK):
            stop = min(per_rank, start + CHUNK)
            G = _batch_candidates(plan, start, stop, rank)
            ok = _axioms_hold(plan, G, stop - start)
            for idx in np.nonzero(ok)[0]:
                gens = []
                for g, blk in enumerate(A.gen_blocks):
                    m = f.zeros(total, total)
                    if g in G:
                        t, s = blk
                        m[offsets[t] : offsets[t + 1], offsets[s] : offsets[s + 1]] = G[g][idx]
                    gens.append(m)
                yield Module(A, dims, gens, check=False)


def enumerate_indecomposables(cfg: EnumerationConfig) -> list[Module]:
    """Isomorphism-class representatives of the indecomposables of total dimension <= cfg.max_dim.

    Raises:
        WorkBoundExceeded: if the candidate count exceeds the work bound.
        DecompositionInconclusive: if an indecomposability certificate fails.
    """
    bound = cfg.validate()
    A = cfg.algebra
    plans = [_Plan(A, d) for d in dimension_vectors(A, cfg.max_dim)]
    need = sum(pl.count for pl in plans)
    if need > bound:
        raise WorkBoundExceeded(f"{need} candidate assignments exceed the work bound {bound}")
    # the bound is checked first so a cached run never hides an exceeded budget
    key = ("oracle", cfg.max_dim, cfg.seed)
    cache = A.__dict__.setdefault("_oracle_cache", {})
    if key in cache:
        return cache[key]
    out: list[Module] = []
    for plan in plans:
        buckets: dict[tuple, list[Module]] = {}
        for M in _modules_of(plan):
            if M.dim > 1 and _splits_simple(M):
                continue
            reps = buckets.setdefault(_invariants(M), [])
            if any(isomorphic(M, R, cfg.seed) for R in reps):
                continue
            reps.append(M)
        found = []
        for reps in buckets.values():
            for M in reps:
                ind = is_indecomposable(M, cfg.seed)
                if ind is None:
                    raise DecompositionInconclusive("indecomposability undecided", [M])
                if ind:
                    found.append(M)
        found.sort(key=lambda X: [x for g in X.gens for x in g.reshape(-1).tolist()])
        for k, M in enumerate(found):
            label = describe(M)
            M.name = label if not label.startswith("[") else f"{label}#{k}"
        out.extend(found)
    cache[key] = out
    return out


def classify_tau_n_rigid(cfg: EnumerationConfig, n: int) -> list[Module]:
    """The enumerated indecomposables that are tau_n-rigid."""
    return [M for M in enumerate_indecomposables(cfg) if is_tau_n_rigid(M, n).holds_]


def findim_lower_bound(cfg: EnumerationConfig, pd_bound: int) -> int:
    """Largest finite projective dimension (<= pd_bound) among enumerated indecomposables.

    A lower bound for the finitistic dimension: pd of a direct sum is the
    maximum over its summands, so indecomposables suffice up to the bounds.
    """
    best = 0
    for M in enumerate_indecomposables(cfg):
        r = pd_up_to(M, pd_bound)
        if r.finite:
            best = max(best, r.value)
    return best


def catalog(cfg: EnumerationConfig, ns: tuple[int, ...] = (1, 2, 3)) -> dict:
    """JSON catalog: dimension vector, certificate digest and tau_n-rigidity per module."""
    rows = []
    for M in enumerate_indecomposables(cfg):
        rows.append(
            {
                "name": M.name,
                "dims": list(M.dims),
                "certificate": certificate_digest({"module": M.to_json(), "indecomposable": True}),
                "tau_rigid": {str(n): is_tau_n_rigid(M, n).holds_ for n in ns},
            }
        )
    return {"algebra": cfg.algebra.name, "max_dim": cfg.max_dim, "field": repr(cfg.algebra.field), "modules": rows}


# ---------------------------------------------------------------------------
# Endomorphism algebras in monomial form
# ---------------------------------------------------------------------------


def monomial_rebase(A: BasedAlgebra, name: str = "") -> BasedAlgebra:
    """An isomorphic based algebra whose generators span rad / rad^2 and whose
    radical basis consists of monomials in them (fewest generators)."""
    f = A.field
    rad = list(A.radical)
    unit = [A.unit_vector(b) for b in rad]
    sq = [A.mul(x, y) for x in unit for y in unit]
    sq = [v for v in sq if np.any(v != 0)]
    base = f.row_basis(np.stack(sq)) if sq else f.zeros(0, A.dim)
    gens: list[np.ndarray] = []
    cur = base
    for v in unit:
        trial = np.vstack([cur, v.reshape(1, -1)])
        if f.rank(trial) > cur.shape[0]:
            gens.append(v)
            cur = trial
    chosen: list[tuple[tuple[int, ...], np.ndarray]] = []
    span = f.zeros(0, A.dim)
    frontier = []
    for g, v in enumerate(gens):
        chosen.append(((g,), v))
        span = np.vstack([span, v.reshape(1, -1)])
        frontier.append(((g,), v))
    while frontier and span.shape[0] < len(rad):
        nxt = []
        for w, v in frontier:
            for g, u in enumerate(gens):
                prod = A.mul(v, u)
                if not np.any(prod != 0):
                    continue
                trial = np.vstack([span, prod.reshape(1, -1)])
                if f.rank(trial) > span.shape[0]:
                    span = trial
                    chosen.append((w + (g,), prod))
                    nxt.append((w + (g,), prod))
        frontier = nxt
    if span.shape[0] != len(rad):
        raise ValueError("generators do not span the radical")
    vecs = [A.unit_vector(e) for e in A.idempotents] + [v for _, v in chosen]
    T = np.stack(vecs)
    Tinv = f.inverse(T)
    d = A.dim
    mult = f.zeros(d, d, d)
    for i in range(d):
        for j in range(d):
            mult[i, j] = f.matmul(A.mul(T[i], T[j]).reshape(1, -1), Tinv).reshape(-1)

    def block_of(v):
        b = int(np.nonzero(v)[0][0])
        return A.left[b], A.right[b]

    r = A.num_vertices
    gnames = [f"x{g}" for g in range(len(gens))]
    labels = [f"e{v}" for v in A.vertices] + ["*".join(gnames[g] for g in w) for w, _ in chosen]
    left = list(range(r)) + [block_of(v)[0] for _, v in chosen]
    right = list(range(r)) + [block_of(v)[1] for _, v in chosen]
    generators = []
    for g in range(len(gens)):
        u = f.zeros(d)
        u[r + g] = 1
        generators.append((gnames[g], u))
    words = [None] * r + [w for w, _ in chosen]
    return BasedAlgebra(f, labels, mult, A.vertices, list(range(r)), left, right, list(range(r, d)), generators, words, name=name or A.name)


def end_op_algebra(M: Module) -> BasedAlgebra:
    """End(M)^op of the basic part of M, in monomial form."""
    parts = basic_summands(M)
    B = parts[0] if len(parts) == 1 else direct_sum_module(parts, name=M.name)
    E = end_algebra(B)
    return monomial_rebase(E.opposite(), name=f"End({M.name})^op")


__all__ = [
    "EnumerationConfig",
    "WorkBoundExceeded",
    "catalog",
    "classify_tau_n_rigid",
    "dimension_vectors",
    "end_op_algebra",
    "enumerate_indecomposables",
    "findim_lower_bound",
    "monomial_rebase",
    "work_bound",
]
