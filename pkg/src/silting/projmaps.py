"""Maps between direct sums of indecomposable projectives.

A map from ``P(i_1) + ... + P(i_C)`` to ``P(j_1) + ... + P(j_R)`` is stored as
an array ``F`` of shape ``(R, C, d)``: ``F[r, c]`` is the coordinate vector of
an element of ``e_{i_c} A e_{j_r}``, acting by right multiplication
``A e_{i_c} -> A e_{j_r}``.  Composition ``G o F`` therefore multiplies the
elements of ``F`` on the left of those of ``G``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .algebra import BasedAlgebra
from .modules import injective_sum, projective_sum

Verts = tuple[int, ...]


def zero(A: BasedAlgebra, src: Verts, tgt: Verts) -> np.ndarray:
    return A.field.zeros(len(tgt), len(src), A.dim)


def identity(A: BasedAlgebra, verts: Verts) -> np.ndarray:
    out = zero(A, verts, verts)
    for k, v in enumerate(verts):
        out[k, k, A.idempotents[v]] = 1
    return out


def mask(A: BasedAlgebra, src: Verts, tgt: Verts) -> np.ndarray:
    """Boolean array marking the coordinates allowed by the grading."""
    left = np.array(A.left)
    right = np.array(A.right)
    s = np.array(src, dtype=int).reshape(1, -1, 1)
    t = np.array(tgt, dtype=int).reshape(-1, 1, 1)
    return (left.reshape(1, 1, -1) == s) & (right.reshape(1, 1, -1) == t)


def compose(A: BasedAlgebra, F: np.ndarray, G: np.ndarray) -> np.ndarray:
    """G o F for F: P -> Q and G: Q -> R."""
    if F.shape[0] == 0 or F.shape[1] == 0 or G.shape[0] == 0:
        return A.field.zeros(G.shape[0], F.shape[1], A.dim)
    # out[s, c] = sum_r G[s, r] * F[r, c], contracted in two steps
    FM = np.tensordot(F, A.mult, axes=([2], [0]))  # r c y z
    out = np.tensordot(G, FM, axes=([1, 2], [0, 2]))  # s c z
    return A.field.reduce(out)


def is_radical(A: BasedAlgebra, F: np.ndarray) -> bool:
    """No entry has a nonzero idempotent coefficient (the map lands in the radical)."""
    if F.size == 0:
        return True
    return not np.any(F[:, :, list(A.idempotents)] != 0)


def unit_entries(A: BasedAlgebra, F: np.ndarray, src: Verts, tgt: Verts) -> list[tuple[int, int]]:
    """Positions (r, c) whose entry is invertible in e_v A e_v."""
    out = []
    for r in range(F.shape[0]):
        for c in range(F.shape[1]):
            if src[c] == tgt[r] and F[r, c, A.idempotents[src[c]]] != 0:
                out.append((r, c))
    return out


def inverse_in_corner(A: BasedAlgebra, u: np.ndarray, v: int) -> np.ndarray:
    """Inverse of an invertible element u of e_v A e_v."""
    f = A.field
    idx = A.block(v, v)
    L = A.left_mult_matrix(u)[np.ix_(idx, idx)]
    target = f.zeros(len(idx))
    target[idx.index(A.idempotents[v])] = 1
    w = f.solve(L, target)
    if w is None:
        raise ValueError("element is not invertible")
    out = f.zeros(A.dim)
    out[idx] = w
    return out


def to_module_matrix(A: BasedAlgebra, F: np.ndarray, src: Verts, tgt: Verts) -> np.ndarray:
    """Matrix of the map between the modules ``projective_sum(src)`` and ``projective_sum(tgt)``."""
    f = A.field
    P, pidx = projective_sum(A, src)
    Q, qidx = projective_sum(A, tgt)
    out = f.zeros(Q.dim, P.dim)
    for (c, b), col in pidx.items():
        for r in range(len(tgt)):
            x = F[r, c]
            if not np.any(x != 0):
                continue
            prod = f.reduce(x @ A.mult[b])  # b * x
            for z in np.nonzero(prod)[0]:
                out[qidx[(r, int(z))], col] = prod[z]
    return out


def from_module_matrix(A: BasedAlgebra, mat: np.ndarray, src: Verts, tgt: Verts) -> np.ndarray:
    """Inverse of :func:`to_module_matrix`: read off images of the summand generators."""
    _, pidx = projective_sum(A, src)
    out = zero(A, src, tgt)
    for c, v in enumerate(src):
        col = mat[:, pidx[(c, A.idempotents[v])]]
        out[:, c, :] = vector_to_entries(A, col, tgt)
    return out


def vector_to_entries(A: BasedAlgebra, vec: np.ndarray, tgt: Verts) -> np.ndarray:
    """Split a vector of ``projective_sum(tgt)`` into algebra elements per summand, shape (R, d)."""
    _, qidx = projective_sum(A, tgt)
    out = A.field.zeros(len(tgt), A.dim)
    for (r, z), k in qidx.items():
        out[r, z] = vec[k]
    return out


def nakayama_matrix(A: BasedAlgebra, F: np.ndarray, src: Verts, tgt: Verts) -> np.ndarray:
    """Matrix of nu(F): ``injective_sum(src) -> injective_sum(tgt)``.

    For x in e_i A e_j, nu(x) sends phi in D(e_i A) to z -> phi(x z).
    """
    f = A.field
    I, iidx = injective_sum(A, src)
    J, jidx = injective_sum(A, tgt)
    out = f.zeros(J.dim, I.dim)
    for (c, y), col in iidx.items():
        for (r, z), row in jidx.items():
            x = F[r, c]
            if not np.any(x != 0):
                continue
            coeff = f.reduce(x @ A.mult[:, z, y])
            if coeff != 0:
                out[row, col] = coeff
    return out


def block(A: BasedAlgebra, F: np.ndarray, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    return F[np.ix_(list(rows), list(cols))] if F.size else A.field.zeros(len(rows), len(cols), A.dim)
