"""Finite-dimensional algebras with a chosen basis.

An algebra is stored through its structure constants: ``mult[i, j, k]`` is
the coefficient of basis element ``k`` in ``b_i * b_j``.  Paths are written
right to left, so the path ``("b", "a")`` is ``b*a``: first ``a``, then ``b``.
A basis element ``b`` lies in the block ``e_left * A * e_right``; for a path
from ``s`` to ``t`` that block is ``(t, s)``.

Every basis element is remembered as a word in a fixed list of generators
(the arrows, for algebras built from quivers).  Module actions are then
determined by the generator matrices alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import Field, PrimeField, parse_field, field_json


class AdmissibilityFailure(ValueError):
    """Some path of the nilpotency bound length survives modulo the relations."""


class EmptyQuiver(ValueError):
    pass


class InvalidPresentation(ValueError):
    pass


class NotAnIdeal(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class QuiverPresentation:
    """A quiver with relations and a bound L such that every path of length L lies in the ideal.

    ``relations`` is a tuple of relation generators; each generator is a tuple
    of ``(coefficient, path)`` pairs and a path is a tuple of arrow names in
    written (right to left) order.
    """

    field: Field
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    relations: tuple[tuple[tuple[object, tuple[str, ...]], ...], ...] = ()
    nilpotency_bound: int = 2
    name: str = ""

    def __post_init__(self):
        if not self.vertices:
            raise EmptyQuiver("a quiver needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidPresentation("duplicate vertex labels")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise InvalidPresentation("duplicate arrow names")
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise InvalidPresentation(f"arrow {a.name} has an unknown endpoint")
        if self.nilpotency_bound < 2:
            raise InvalidPresentation("nilpotency bound must be at least 2")
        by_name = {a.name: a for a in self.arrows}
        for rel in self.relations:
            if not rel:
                raise InvalidPresentation("empty relation")
            ends = set()
            for _, path in rel:
                if len(path) < 2:
                    raise InvalidPresentation("relations must consist of paths of length >= 2")
                for name in path:
                    if name not in by_name:
                        raise InvalidPresentation(f"unknown arrow {name!r} in relation")
                for later, earlier in zip(path, path[1:]):
                    if by_name[earlier].target != by_name[later].source:
                        raise InvalidPresentation(f"path {path} is not composable")
                ends.add((by_name[path[-1]].source, by_name[path[0]].target))
            if len(ends) != 1:
                raise InvalidPresentation("paths in one relation must share source and target")

    @classmethod
    def from_json(cls, data: dict, field: Field | None = None, name: str = "") -> "QuiverPresentation":
        try:
            fld = field if field is not None else parse_field(data["field"])
            quiver = data["quiver"]
            arrows = tuple(Arrow(str(a["name"]), str(a["src"]), str(a["tgt"])) for a in quiver["arrows"])
            relations = tuple(
                tuple((fld.scalar(term["coeff"]), tuple(term["path"])) for term in rel)
                for rel in data.get("relations", [])
            )
            return cls(
                fld,
                tuple(str(v) for v in quiver["vertices"]),
                arrows,
                relations,
                int(data["nilpotency_bound"]),
                name,
            )
        except (KeyError, TypeError) as exc:
            raise InvalidPresentation(f"malformed algebra JSON: {exc}") from exc

    def to_json(self) -> dict:
        return {
            "field": field_json(self.field),
            "quiver": {
                "vertices": list(self.vertices),
                "arrows": [{"name": a.name, "src": a.source, "tgt": a.target} for a in self.arrows],
            },
            "relations": [
                [{"coeff": self.field.to_str(c), "path": list(p)} for c, p in rel] for rel in self.relations
            ],
            "nilpotency_bound": self.nilpotency_bound,
        }


class BasedAlgebra:
    """A finite-dimensional algebra given by structure constants.

    Attributes:
        field: base field.
        labels: printable name of each basis element.
        mult: structure constants, shape (d, d, d).
        vertices: labels of the primitive idempotents e_1..e_r.
        idempotents: basis index of each e_i.
        left, right: vertex index pair (i, j) with b in e_i A e_j, per basis element.
        radical: basis indices spanning the radical.
        generators: (name, coordinate vector) pairs; every basis element that is
            not an idempotent is the product of the generators listed in ``words``.
        words: generator indices per basis element (``None`` for idempotents).
    """

    def __init__(
        self,
        field: Field,
        labels: Sequence[str],
        mult: np.ndarray,
        vertices: Sequence[str],
        idempotents: Sequence[int],
        left: Sequence[int],
        right: Sequence[int],
        radical: Sequence[int],
        generators: Sequence[tuple[str, np.ndarray]],
        words: Sequence[tuple[int, ...] | None],
        name: str = "",
    ):
        self.field = field
        self.labels = tuple(labels)
        self.mult = mult
        self.vertices = tuple(vertices)
        self.idempotents = tuple(idempotents)
        self.left = tuple(left)
        self.right = tuple(right)
        self.radical = tuple(radical)
        self.generators = tuple((n, v) for n, v in generators)
        self.words = tuple(words)
        self.name = name
        self.presentation: QuiverPresentation | None = None
        self._opposite: BasedAlgebra | None = None
        self._flat = mult.reshape(self.dim, self.dim * self.dim)
        self.gen_blocks = tuple(self._block_of(v) for _, v in self.generators)

    # ----------------------------------------------------------------- basics
    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def __repr__(self):
        return f"BasedAlgebra({self.name or '?'}, dim={self.dim}, over {self.field!r})"

    def vertex_index(self, label: str) -> int:
        return self.vertices.index(label)

    def block(self, i: int, j: int) -> list[int]:
        """Basis indices of e_i A e_j."""
        return [b for b in range(self.dim) if self.left[b] == i and self.right[b] == j]

    def unit_vector(self, b: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[b] = 1
        return v

    def one(self) -> np.ndarray:
        v = self.field.zeros(self.dim)
        for e in self.idempotents:
            v[e] = 1
        return v

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product x*y of two coordinate vectors."""
        if self.dim == 0:
            return self.field.zeros(0)
        t = (x @ self._flat).reshape(self.dim, self.dim)
        return self.field.reduce(y @ t)

    def left_mult_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> x*y in basis coordinates (columns indexed by y)."""
        return self.field.reduce(np.einsum("i,ijk->kj", x, self.mult))

    def right_mult_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> y*x in basis coordinates."""
        return self.field.reduce(np.einsum("j,ijk->ki", x, self.mult))

    def _block_of(self, v: np.ndarray) -> tuple[int, int] | None:
        support = [b for b in range(self.dim) if v[b] != 0]
        blocks = {(self.left[b], self.right[b]) for b in support}
        if len(blocks) > 1:
            raise InvalidPresentation("generator is not homogeneous for the idempotents")
        return blocks.pop() if blocks else None

    def element_str(self, x: np.ndarray) -> str:
        terms = []
        for b in range(self.dim):
            c = x[b]
            if c != 0:
                cs = self.field.to_str(c)
                terms.append(self.labels[b] if cs == "1" else f"{cs}*{self.labels[b]}")
        return " + ".join(terms) if terms else "0"

    # -------------------------------------------------------------- structure
    def check(self) -> None:
        """Assert the algebra axioms exhaustively (associativity, idempotents, grading)."""
        f = self.field
        m = self.mult
        lhs = f.reduce(np.einsum("ijm,mkn->ijkn", m, m))
        rhs = f.reduce(np.einsum("jkm,imn->ijkn", m, m))
        assert not np.any(lhs != rhs), "multiplication is not associative"
        one = self.one()
        for b in range(self.dim):
            e = self.unit_vector(b)
            assert not np.any(self.mul(one, e) != e) and not np.any(self.mul(e, one) != e), "unit fails"
        for a, i in enumerate(self.idempotents):
            for c, j in enumerate(self.idempotents):
                prod = self.mul(self.unit_vector(i), self.unit_vector(j))
                expect = self.unit_vector(i) if a == c else f.zeros(self.dim)
                assert not np.any(prod != expect), "idempotents are not orthogonal"
        for b in range(self.dim):
            ei = self.unit_vector(self.idempotents[self.left[b]])
            ej = self.unit_vector(self.idempotents[self.right[b]])
            e = self.unit_vector(b)
            assert not np.any(self.mul(self.mul(ei, e), ej) != e), "bigrading is wrong"
        for w, b in zip(self.words, range(self.dim)):
            if w is None:
                assert b in self.idempotents
                continue
            prod = self.generators[w[0]][1]
            for g in w[1:]:
                prod = self.mul(prod, self.generators[g][1])
            assert not np.any(prod != self.unit_vector(b)), f"word of {self.labels[b]} is wrong"
        self.check_radical()

    def check_radical(self) -> None:
        """Assert the radical span is a nilpotent two-sided ideal (semisimplicity of the quotient
        holds by construction: the complement consists of idempotents)."""
        rad = self.radical
        rset = set(rad)
        for b in range(self.dim):
            for r in rad:
                for prod in (self.mult[b, r], self.mult[r, b]):
                    assert all(prod[k] == 0 for k in range(self.dim) if k not in rset), "radical not an ideal"
        power = [self.unit_vector(r) for r in rad]
        for _ in range(self.dim + 1):
            if not power:
                break
            nxt = [self.mul(x, self.unit_vector(r)) for x in power for r in rad]
            power = [v for v in nxt if np.any(v != 0)]
        assert not power, "radical is not nilpotent"

    def opposite(self) -> "BasedAlgebra":
        """The opposite algebra; ``A.opposite().opposite() is A``."""
        if self._opposite is None:
            op = BasedAlgebra(
                self.field,
                self.labels,
                np.ascontiguousarray(self.mult.transpose(1, 0, 2)),
                self.vertices,
                self.idempotents,
                self.right,
                self.left,
                self.radical,
                self.generators,
                [None if w is None else tuple(reversed(w)) for w in self.words],
                name=f"{self.name}^op",
            )
            op._opposite = self
            self._opposite = op
        return self._opposite

    def structurally_equal(self, other: "BasedAlgebra") -> bool:
        return (
            self.field == other.field
            and self.dim == other.dim
            and self.idempotents == other.idempotents
            and self.left == other.left
            and self.right == other.right
            and not np.any(self.mult != other.mult)
        )


class QuotientAlgebra(BasedAlgebra):
    """A / I together with the projection from A.

    Attributes:
        parent: the algebra A.
        kept: A-basis indices whose images form the basis of the quotient.
        projection: matrix (d_A x d_Q); row ``b`` is the image of basis element ``b``.
    """

    parent: BasedAlgebra
    kept: tuple[int, ...]
    projection: np.ndarray

    def project(self, x: np.ndarray) -> np.ndarray:
        return self.field.reduce(x @ self.projection)

    def lift(self, y: np.ndarray) -> np.ndarray:
        x = self.field.zeros(self.parent.dim)
        x[list(self.kept)] = y
        return x


# ---------------------------------------------------------------------------
# Construction from a quiver
# ---------------------------------------------------------------------------


def _enumerate_paths(q: QuiverPresentation, max_len: int):
    """All paths of length <= max_len as (source index, arrow index tuple in written order)."""
    vidx = {v: i for i, v in enumerate(q.vertices)}
    src = [vidx[a.source] for a in q.arrows]
    tgt = [vidx[a.target] for a in q.arrows]
    layer = [(v, ()) for v in range(len(q.vertices))]
    paths = list(layer)
    for _ in range(max_len):
        nxt = []
        for s, arrows in layer:
            end = s if not arrows else tgt[arrows[0]]
            for a in range(len(q.arrows)):
                if src[a] == end:
                    nxt.append((s, (a,) + arrows))
        paths.extend(nxt)
        layer = nxt
    return paths, src, tgt


def build_algebra(q: QuiverPresentation) -> BasedAlgebra:
    """The algebra kQ/I with basis a set of paths of length < L independent modulo I."""
    f = q.field
    L = q.nilpotency_bound
    paths, src, tgt = _enumerate_paths(q, L)
    index = {p: k for k, p in enumerate(paths)}
    aidx = {a.name: k for k, a in enumerate(q.arrows)}

    def target(p):
        s, arrows = p
        return s if not arrows else tgt[arrows[0]]

    def concat(p, r):
        """p * r (r first); None if not composable."""
        if p[0] != target(r):
            return None
        return (r[0], p[1] + r[1])

    # Span of p*g*r inside the path space of length <= L.
    rows = []
    for rel in q.relations:
        terms = [(c, (src[aidx[path[-1]]], tuple(aidx[n] for n in path))) for c, path in rel]
        s0, t0 = terms[0][1][0], target(terms[0][1])
        shortest = min(len(t[1][1]) for t in terms)
        for left in paths:
            if left[0] != t0 or len(left[1]) + shortest > L:
                continue
            for right in paths:
                if target(right) != s0 or len(left[1]) + len(right[1]) + shortest > L:
                    continue
                row = f.zeros(len(paths))
                for c, t in terms:
                    full = concat(left, concat(t, right))
                    if len(full[1]) <= L:
                        row[index[full]] += c
                row = f.reduce(row)
                if np.any(row != 0):
                    rows.append(row)
    order = sorted(range(len(paths)), key=lambda k: (-len(paths[k][1]), k))
    if rows:
        W = np.array(rows, dtype=f.dtype)[:, order]
        R, piv = f.rref(W)
        R = R[: len(piv)]
        pivots = [order[c] for c in piv]
    else:
        R = f.zeros(0, len(paths))
        pivots = []
    pivot_row = {p: i for i, p in enumerate(pivots)}
    # back to original column order
    Rorig = f.zeros(R.shape[0], len(paths))
    Rorig[:, order] = R
    for k, p in enumerate(paths):
        if len(p[1]) == L:
            i = pivot_row.get(k)
            ok = i is not None and all(Rorig[i, c] == 0 for c in range(len(paths)) if c != k)
            if not ok:
                raise AdmissibilityFailure(
                    f"path {_path_label(q, p)} of length {L} does not reduce to zero"
                )
    basis = [k for k in range(len(paths)) if k not in pivot_row]
    basis.sort(key=lambda k: (len(paths[k][1]), k))
    bpos = {k: i for i, k in enumerate(basis)}
    d = len(basis)

    def normal_form(path) -> np.ndarray:
        out = f.zeros(d)
        if path is None or len(path[1]) >= L + 1:
            return out
        k = index[path]
        if k in bpos:
            out[bpos[k]] = 1
            return out
        row = Rorig[pivot_row[k]]
        for c in basis:
            if row[c] != 0:
                out[bpos[c]] = -row[c]
        return f.reduce(out)

    mult = f.zeros(d, d, d)
    for i, ki in enumerate(basis):
        for j, kj in enumerate(basis):
            prod = concat(paths[ki], paths[kj])
            if prod is not None:
                mult[i, j] = normal_form(prod)
    labels = [_path_label(q, paths[k]) for k in basis]
    idem = [bpos[index[(v, ())]] for v in range(len(q.vertices))]
    left = [target(paths[k]) for k in basis]
    right = [paths[k][0] for k in basis]
    radical = [i for i, k in enumerate(basis) if paths[k][1]]
    generators = []
    for a in range(len(q.arrows)):
        v = f.zeros(d)
        v[bpos[index[(src[a], (a,))]]] = 1
        generators.append((q.arrows[a].name, v))
    words = [None if not paths[k][1] else paths[k][1] for k in basis]
    alg = BasedAlgebra(f, labels, mult, q.vertices, idem, left, right, radical, generators, words, name=q.name)
    alg.presentation = q
    return alg


def _path_label(q: QuiverPresentation, p) -> str:
    s, arrows = p
    if not arrows:
        return f"e{q.vertices[s]}"
    names = [q.arrows[a].name for a in arrows]
    return "".join(names) if all(len(n) == 1 for n in names) else "*".join(names)


def algebra_from_json(data: dict, field: Field | None = None, name: str = "") -> BasedAlgebra:
    return build_algebra(QuiverPresentation.from_json(data, field=field, name=name))


# ---------------------------------------------------------------------------
# Quotients
# ---------------------------------------------------------------------------


def quotient_algebra(A: BasedAlgebra, ideal: np.ndarray, name: str = "") -> QuotientAlgebra:
    """A / I for a two-sided ideal I spanned by the rows of ``ideal``.

    Radical basis elements are eliminated before idempotents, so an idempotent
    survives whenever it is not itself in the ideal.

    Raises:
        NotAnIdeal: if the span is not closed under multiplication by basis elements.
    """
    f = A.field
    d = A.dim
    ideal = np.asarray(ideal, dtype=f.dtype).reshape(-1, d)
    I = f.row_basis(ideal) if ideal.shape[0] else ideal
    k = I.shape[0]
    if k:
        products = [A.mul(A.unit_vector(b), v) for v in I for b in range(d)]
        products += [A.mul(v, A.unit_vector(b)) for v in I for b in range(d)]
        if f.rank(np.vstack([I] + [p.reshape(1, -1) for p in products])) != k:
            raise NotAnIdeal("subspace is not closed under multiplication")
    idem = set(A.idempotents)
    order = sorted((b for b in range(d) if b not in idem), reverse=True) + list(A.idempotents)
    if k:
        R, piv = f.rref(I[:, order])
        pivots = [order[c] for c in piv]
        Rorig = f.zeros(k, d)
        Rorig[:, order] = R
    else:
        pivots, Rorig = [], f.zeros(0, d)
    kept = [b for b in range(d) if b not in set(pivots)]
    kpos = {b: i for i, b in enumerate(kept)}
    dq = len(kept)
    proj = f.zeros(d, dq)
    for b in kept:
        proj[b, kpos[b]] = 1
    for i, c in enumerate(pivots):
        for b in kept:
            if Rorig[i, b] != 0:
                proj[c, kpos[b]] = -Rorig[i, b]
    proj = f.reduce(proj)
    mult = f.zeros(dq, dq, dq)
    for i, a in enumerate(kept):
        for j, b in enumerate(kept):
            mult[i, j] = f.reduce(A.mult[a, b] @ proj)
    kept_vertices = [v for v, e in enumerate(A.idempotents) if e in kpos]
    vpos = {v: i for i, v in enumerate(kept_vertices)}
    gen_map = {}
    generators = []
    for g, (gname, vec) in enumerate(A.generators):
        img = f.reduce(vec @ proj)
        if np.any(img != 0):
            gen_map[g] = len(generators)
            generators.append((gname, img))
    words = []
    for b in kept:
        w = A.words[b]
        words.append(None if w is None else tuple(gen_map[g] for g in w))
    Q = QuotientAlgebra(
        f,
        [A.labels[b] for b in kept],
        mult,
        [A.vertices[v] for v in kept_vertices],
        [kpos[A.idempotents[v]] for v in kept_vertices],
        [vpos[A.left[b]] for b in kept],
        [vpos[A.right[b]] for b in kept],
        [kpos[b] for b in kept if b not in idem],
        generators,
        words,
        name=name or f"{A.name}/I",
    )
    Q.parent = A
    Q.kept = tuple(kept)
    Q.projection = proj
    return Q


# ---------------------------------------------------------------------------
# Isomorphism of based algebras
# ---------------------------------------------------------------------------

ISO_SEARCH_BOUND = 200_000


def block_dimensions(A: BasedAlgebra) -> np.ndarray:
    """Matrix of dim e_i A e_j, an invariant up to simultaneous vertex permutation."""
    r = A.num_vertices
    out = np.zeros((r, r), dtype=np.int64)
    for b in range(A.dim):
        out[A.left[b], A.right[b]] += 1
    return out


def _generator_candidates(B: BasedAlgebra, i: int, j: int) -> tuple[list[np.ndarray], bool]:
    """Radical elements of e_i B e_j to try as generator images, and whether the list is complete."""
    f = B.field
    rad = set(B.radical)
    block = [b for b in B.block(i, j) if b in rad]
    if isinstance(f, PrimeField) and f.p ** len(block) <= ISO_SEARCH_BOUND:
        out = []
        for coeffs in itertools.product(range(f.p), repeat=len(block)):
            if any(coeffs):
                v = f.zeros(B.dim)
                v[block] = coeffs
                out.append(v)
        return out, True
    return [B.unit_vector(b) for b in block], False


def _extend(A: BasedAlgebra, B: BasedAlgebra, sigma, images) -> np.ndarray:
    """Matrix whose row b is the image of the basis element b of A."""
    T = B.field.zeros(A.dim, B.dim)
    for b in range(A.dim):
        w = A.words[b]
        if w is None:
            T[b] = B.unit_vector(B.idempotents[sigma[A.left[b]]])
            continue
        x = images[w[0]]
        for g in w[1:]:
            x = B.mul(x, images[g])
        T[b] = x
    return T


def _is_algebra_iso(A: BasedAlgebra, B: BasedAlgebra, T: np.ndarray) -> bool:
    f = B.field
    if f.rank(T) != A.dim:
        return False
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = f.reduce(A.mult[i, j] @ T)
            if np.any(lhs != B.mul(T[i], T[j])):
                return False
    return True


def algebra_iso(A: BasedAlgebra, B: BasedAlgebra) -> tuple[bool | None, dict | None]:
    """Search for an isomorphism A -> B sending idempotents to idempotents.

    Vertex bijections are filtered by the block-dimension matrix; each generator
    of A is then sent to a radical element of the matching block of B (every
    such element over small prime fields, basis elements otherwise) and the
    assignment is extended multiplicatively and checked exhaustively.

    Returns:
        ``(True, certificate)`` with the vertex map and generator images,
        ``(False, reason)`` when an invariant rules an isomorphism out, or
        ``(None, None)`` when the search found nothing but was not exhaustive.
    """
    if A.field != B.field:
        return False, {"reason": "different fields"}
    if A.dim != B.dim or A.num_vertices != B.num_vertices:
        return False, {"reason": "dimension or vertex count differs", "dims": [A.dim, B.dim]}
    DA, DB = block_dimensions(A), block_dimensions(B)
    r = A.num_vertices
    perms = [s for s in itertools.permutations(range(r)) if np.array_equal(DA, DB[np.ix_(s, s)])]
    if not perms:
        return False, {"reason": "block dimension matrices differ", "A": DA.tolist(), "B": DB.tolist()}
    exhaustive = True
    for sigma in perms:
        pools = []
        for i, j in A.gen_blocks:
            pool, complete = _generator_candidates(B, sigma[i], sigma[j])
            exhaustive = exhaustive and complete
            pools.append(pool)
        for images in itertools.product(*pools):
            T = _extend(A, B, sigma, images)
            if _is_algebra_iso(A, B, T):
                cert = {
                    "vertex_map": {A.vertices[v]: B.vertices[sigma[v]] for v in range(r)},
                    "generator_images": {
                        name: B.element_str(img) for (name, _), img in zip(A.generators, images)
                    },
                }
                return True, cert
    if exhaustive:
        return False, {"reason": "exhaustive search over vertex maps and generator images found none"}
    return None, None
