"""Trace-orthonormal bases for spans of interaction matrices.

The span of raw matrices J_1..J_k is equipped with the inner product
<A, B> = sum_ij A_ij B_ij, and parameter vectors live in coordinates of
the orthonormalized basis A_1..A_k'.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import frobenius_norm, trace_inner, validate_interaction
from .errors import (
    AllDegenerate,
    DegenerateFamily,
    LengthMismatch,
    NotBinary,
    ShapeMismatch,
)


@dataclass(frozen=True)
class MatrixBasis:
    raw: list            # original J_1..J_k
    ortho: list          # orthonormal A_1..A_k'
    change: np.ndarray   # (k', k): each A_i as a combination of the raw J's
    rank_tol: float

    @property
    def n(self):
        return self.raw[0].shape[0]

    @property
    def k(self):
        return len(self.ortho)

    def stacked(self):
        return np.stack(self.ortho)


def _fix_sign(A, coeffs):
    """Make the first nonzero upper-triangle entry (row-major) positive."""
    n = A.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    vals = A[iu, ju]
    nz = np.flatnonzero(np.abs(vals) > 1e-14)
    if nz.size and vals[nz[0]] < 0:
        return -A, -coeffs
    return A, coeffs


def gram_schmidt(raw, rank_tol=1e-9):
    """Modified Gram-Schmidt under the trace inner product.

    One re-orthogonalization pass is applied to each vector.  Inputs whose
    residual drops below rank_tol times their original Frobenius norm are
    dropped (recorded via the change matrix having fewer rows), not an
    error.
    """
    if not raw:
        raise AllDegenerate("empty matrix family")
    mats = [validate_interaction(J) for J in raw]
    n = mats[0].shape[0]
    for J in mats:
        if J.shape != (n, n):
            raise ShapeMismatch("matrices in a family must share a dimension")
    ortho = []
    rows = []
    for idx, J in enumerate(mats):
        scale = frobenius_norm(J)
        V = J.copy()
        coeffs = np.zeros(len(mats))
        coeffs[idx] = 1.0
        for _ in range(2):  # MGS + one re-orthogonalization pass
            for A, row in zip(ortho, rows):
                c = trace_inner(V, A)
                V = V - c * A
                coeffs = coeffs - c * row
        r = frobenius_norm(V)
        if scale == 0.0 or r <= rank_tol * scale:
            continue
        V = V / r
        coeffs = coeffs / r
        V, coeffs = _fix_sign(V, coeffs)
        np.fill_diagonal(V, 0.0)
        ortho.append(V)
        rows.append(coeffs)
    if not ortho:
        raise AllDegenerate("every input matrix is numerically zero")
    return MatrixBasis(mats, ortho, np.array(rows), rank_tol)


def combine(basis, beta):
    """sum_i beta_i A_i in the orthonormal basis."""
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (basis.k,):
        raise LengthMismatch(f"beta length {beta.shape} vs basis rank {basis.k}")
    J = np.tensordot(beta, basis.stacked(), axes=1)
    # symmetric & zero-diagonal by the basis invariant; re-zero for safety
    np.fill_diagonal(J, 0.0)
    return 0.5 * (J + J.T)


def project(basis, J):
    """Coordinates of J on the span plus the orthogonal residual norm."""
    J = np.asarray(J, dtype=np.float64)
    if J.shape != (basis.n, basis.n):
        raise ShapeMismatch(f"matrix shape {J.shape} vs basis dimension {basis.n}")
    beta = np.array([trace_inner(J, A) for A in basis.ortho])
    residual = frobenius_norm(J - combine(basis, beta))
    return beta, residual


def gram_matrix(mats):
    k = len(mats)
    G = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            G[i, j] = G[j, i] = trace_inner(mats[i], mats[j])
    return G


def min_singular_value(raw):
    """Smallest singular value of beta -> sum_i beta_i J_i.

    Computed as the square root of the smallest eigenvalue of the k x k
    Gram matrix; 0 for rank-deficient families.
    """
    G = gram_matrix([np.asarray(J, dtype=np.float64) for J in raw])
    ev = np.linalg.eigvalsh(G)
    return float(np.sqrt(max(ev[0], 0.0)))


def unique_edge_counts(incidence):
    """Per-graph counts of unordered edges not shared with any other graph."""
    edge_sets = []
    for J in incidence:
        J = np.asarray(J)
        if not np.all(np.isin(J, (0, 1))):
            raise NotBinary("incidence matrices must be 0/1")
        validate_interaction(J.astype(np.float64))
        i, j = np.nonzero(np.triu(J, k=1))
        edge_sets.append(set(zip(i.tolist(), j.tolist())))
    out = []
    for s, E in enumerate(edge_sets):
        others = set().union(*(F for t, F in enumerate(edge_sets) if t != s)) \
            if len(edge_sets) > 1 else set()
        out.append(len(E - others))
    return np.array(out)


def beta_error_bound(lambda_s, frob_error):
    """Certified l2 bound on the parameter error from a Frobenius error."""
    lambda_s = np.asarray(lambda_s, dtype=np.float64)
    if np.any(lambda_s <= 0):
        raise DegenerateFamily("bound is vacuous when some lambda_s = 0")
    return float(frob_error / np.sqrt(np.min(lambda_s)))
