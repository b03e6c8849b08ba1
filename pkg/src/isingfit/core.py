"""Core Ising-model data types and elementary operations.

Interaction matrices are dense, symmetric, zero-diagonal float64 arrays.
Symmetry and diagonal are enforced once at construction; all downstream
code assumes a validated matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AsymmetryError,
    DiagonalError,
    DimensionMismatch,
    EmptySubset,
    IndexOutOfRange,
    MissingAssignment,
)


def validate_interaction(J, tol=1e-12):
    """Validate and canonicalize an interaction matrix.

    Small asymmetries (at most ``tol``) are averaged out; diagonal entries
    at most ``tol`` in magnitude are zeroed.  Anything larger raises.
    """
    J = np.asarray(J, dtype=np.float64)
    if J.ndim != 2 or J.shape[0] != J.shape[1]:
        raise DimensionMismatch(f"expected square matrix, got shape {J.shape}")
    asym = np.max(np.abs(J - J.T)) if J.size else 0.0
    if asym > tol:
        raise AsymmetryError(f"max |J_ij - J_ji| = {asym:g} exceeds tol {tol:g}")
    d = np.max(np.abs(np.diag(J))) if J.size else 0.0
    if d > tol:
        raise DiagonalError(f"max |J_ii| = {d:g} exceeds tol {tol:g}")
    out = 0.5 * (J + J.T)
    np.fill_diagonal(out, 0.0)
    out.flags.writeable = False
    return out


def infinity_norm(J):
    """Maximum absolute row sum."""
    J = np.asarray(J, dtype=np.float64)
    if J.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(J), axis=1)))


def frobenius_norm(J):
    return float(np.sqrt(np.sum(np.asarray(J, dtype=np.float64) ** 2)))


def trace_inner(A, B):
    """Entrywise inner product sum_ij A_ij B_ij."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape} differ")
    return float(np.sum(A * B))


@dataclass(frozen=True)
class SpectralEstimate:
    value: float
    converged: bool
    iterations: int

    def __float__(self):
        return self.value


def spectral_norm(J, tol=1e-10, max_iter=10000, seed=0):
    """Largest absolute eigenvalue of a symmetric matrix by power iteration.

    Returns a :class:`SpectralEstimate`; ``converged`` is False if the
    relative change never dropped below ``tol`` within ``max_iter`` steps.
    """
    J = np.asarray(J, dtype=np.float64)
    n = J.shape[0]
    if n == 0 or not np.any(J):
        return SpectralEstimate(0.0, True, 0)
    rng = np.random.Generator(np.random.Philox(seed))
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    est = 0.0
    for it in range(1, max_iter + 1):
        w = J @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # v landed in the kernel; restart from a fresh direction
            v = rng.standard_normal(n)
            v /= np.linalg.norm(v)
            continue
        new_est = nw
        v = w / nw
        if abs(new_est - est) <= tol * max(new_est, 1e-300):
            return SpectralEstimate(float(new_est), True, it)
        est = new_est
    return SpectralEstimate(float(est), False, max_iter)


@dataclass(frozen=True)
class IsingSpec:
    """A pairwise model over {-1,+1}^n: density proportional to
    exp(x'Jx/2 + h'x).  ``M`` caches the infinity norm of J."""

    J: np.ndarray
    h: np.ndarray
    M: float = field(init=False)

    def __post_init__(self):
        J = validate_interaction(self.J)
        h = np.asarray(self.h, dtype=np.float64)
        if h.shape != (J.shape[0],):
            raise DimensionMismatch(
                f"field length {h.shape} does not match n={J.shape[0]}"
            )
        if not np.all(np.isfinite(h)):
            raise ValueError("external field must be finite")
        h = h.copy()
        h.flags.writeable = False
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "M", infinity_norm(J))

    @property
    def n(self):
        return self.J.shape[0]

    @classmethod
    def zero_field(cls, J):
        J = np.asarray(J, dtype=np.float64)
        return cls(J, np.zeros(J.shape[0]))


def check_spins(x, n=None):
    x = np.asarray(x)
    if not np.all(np.abs(x) == 1):
        raise ValueError("spin entries must be exactly +1 or -1")
    if n is not None and x.shape != (n,):
        raise DimensionMismatch(f"spin vector shape {x.shape}, expected ({n},)")
    return x.astype(np.float64)


def local_field(spec, x, i):
    """sum_j J_ij x_j + h_i (the diagonal is zero, so x_i drops out)."""
    if not 0 <= i < spec.n:
        raise IndexOutOfRange(f"site {i} outside [0, {spec.n})")
    x = np.asarray(x, dtype=np.float64)
    return float(spec.J[i] @ x + spec.h[i])


def conditional_prob_plus(spec, x, i):
    """Pr[x_i = +1 | x_{-i}] = (1 + tanh(local field)) / 2."""
    return 0.5 * (1.0 + np.tanh(local_field(spec, x, i)))


def restrict(spec, I, x_minus):
    """Conditional model on the coordinates in ``I`` given spins outside.

    ``x_minus`` is a length-n vector whose entries outside ``I`` must be
    +-1 (entries inside ``I`` are ignored).  The interaction restricts to
    I x I and the conditioned spins fold into the external field.
    """
    I = np.asarray(I, dtype=np.intp)
    if I.size == 0:
        raise EmptySubset("restriction subset must be nonempty")
    n = spec.n
    if np.any(I < 0) or np.any(I >= n):
        raise IndexOutOfRange("subset index outside [0, n)")
    mask = np.zeros(n, dtype=bool)
    mask[I] = True
    outside = ~mask
    x_minus = np.asarray(x_minus, dtype=np.float64)
    if x_minus.shape != (n,):
        raise MissingAssignment(f"need a length-{n} assignment vector")
    if np.any(np.abs(x_minus[outside]) != 1):
        raise MissingAssignment("every coordinate outside I needs a +-1 value")
    Jp = spec.J[np.ix_(I, I)]
    hp = spec.h[I] + spec.J[np.ix_(I, np.flatnonzero(outside))] @ x_minus[outside]
    return IsingSpec(Jp, hp)


# ---------------------------------------------------------------------------
# File formats: sparse-triplet JSON for matrices, plain arrays for spins.

def matrix_to_json(J):
    """Serialize to {"n": n, "entries": [[i, j, value], ...]} with strictly
    upper-triangular nonzeros."""
    J = np.asarray(J, dtype=np.float64)
    n = J.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    vals = J[iu, ju]
    nz = vals != 0.0
    entries = [[int(i), int(j), float(v)] for i, j, v in zip(iu[nz], ju[nz], vals[nz])]
    return {"n": n, "entries": entries}


def matrix_from_json(obj):
    n = int(obj["n"])
    J = np.zeros((n, n))
    for i, j, v in obj["entries"]:
        if not (0 <= i < j < n):
            raise ValueError(f"entry ({i},{j}) is not strictly upper triangular")
        J[i, j] = v
        J[j, i] = v
    return validate_interaction(J)


def load_matrix(path):
    with open(path) as f:
        return matrix_from_json(json.load(f))


def save_matrix(path, J):
    with open(path, "w") as f:
        json.dump(matrix_to_json(J), f)


def load_spins(path):
    with open(path) as f:
        x = np.asarray(json.load(f), dtype=np.int64)
    return check_spins(x)


def save_spins(path, x):
    with open(path, "w") as f:
        json.dump([int(v) for v in np.asarray(x)], f)
