"""Randomized subset covers that make each conditional model weakly
dependent.

A cover is a family I_1..I_ell of subsets of [n] such that every
coordinate lies in exactly ceil(eta' * ell / 8) sets (eta' = eta / M) and
the within-set absolute row sums of J never exceed eta.  Conditioning on
the spins outside any I_j then yields a model with infinity norm at most
eta, i.e. high-temperature when eta < 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import infinity_norm, restrict, validate_interaction
from .errors import InvalidEta, NegativeWeight, RetryExhausted
from .sampler import make_rng


@dataclass(frozen=True)
class SubsetCover:
    sets: list           # ell sorted index arrays
    eta: float           # target conditional infinity norm
    M: float             # infinity norm of the source matrix
    target_count: int    # exact per-coordinate membership count
    ell: int
    attempts: int


def cover_size(n, eta_prime):
    """ell = ceil(32 log4 log n / eta'^2); at least 1."""
    if n <= 1:
        return 1
    return max(1, math.ceil(32.0 * math.log(4.0) * math.log(n) / eta_prime ** 2))


def build_cover(J, eta, rng=None, max_retries=64, seed=0):
    """Draw a cover by the probabilistic construction.

    Each candidate set takes coordinates independently with probability
    eta'/2, prunes coordinates whose within-set row sum of |J|/M exceeds
    eta', and the whole family is redrawn until every coordinate is in at
    least target_count sets, then trimmed (from the lowest-index sets) to
    exact counts.
    """
    J = validate_interaction(J)
    n = J.shape[0]
    M = infinity_norm(J)
    if M <= 0:
        # no interactions: a single full set covers everything with eta 0
        return SubsetCover([np.arange(n)], eta, 0.0, 1, 1, 0)
    if not 0 < eta <= M:
        raise InvalidEta(f"need 0 < eta <= M={M:g}, got {eta:g}")
    if rng is None:
        rng = make_rng(seed)
    eta_prime = eta / M
    ell = cover_size(n, eta_prime)
    target = math.ceil(eta_prime * ell / 8.0)
    R = np.abs(J) / M  # normalized row weights
    for attempt in range(1, max_retries + 1):
        B = rng.random((ell, n)) < eta_prime / 2.0
        # within-set row sums for every (set, coordinate) pair at once
        S = B.astype(np.float64) @ R.T
        B &= S <= eta_prime
        counts = B.sum(axis=0)
        if np.all(counts >= target):
            excess = counts - target
            # drop each over-covered coordinate from its lowest-index sets
            rank = np.cumsum(B, axis=0)
            B &= rank > excess[None, :]
            sets = [np.flatnonzero(B[j]) for j in range(ell)]
            return SubsetCover(sets, eta, M, target, ell, attempt)
    raise RetryExhausted(f"no valid cover after {max_retries} redraws")


def bipartite_cover(J, parts):
    """Deterministic two-set cover for a bipartite interaction pattern.

    Valid whenever J has no nonzeros within either part; the conditional
    models are then interaction-free (eta = 0 in spirit; stored eta is 0).
    """
    J = validate_interaction(J)
    L, Rt = (np.asarray(p, dtype=np.intp) for p in parts)
    if np.any(J[np.ix_(L, L)] != 0) or np.any(J[np.ix_(Rt, Rt)] != 0):
        raise InvalidEta("matrix is not bipartite across the given parts")
    return SubsetCover([np.sort(L), np.sort(Rt)], 0.0, infinity_norm(J), 1, 2, 0)


@dataclass
class CoverReport:
    ok: bool
    count_violations: list       # coordinates with wrong membership count
    worst_row_sum: float         # max within-set sum of |J|
    row_sum_violations: list     # (set, coordinate) pairs exceeding eta
    restricted_norms: list       # ||J'||_inf for sampled conditionings


def verify_cover(J, cover, spec=None, rng=None, samples_per_set=2):
    """Check membership counts and the conditional infinity-norm bound.

    When ``spec`` is given, also restricts it on each set for a few random
    outside assignments and records the conditional norms directly.
    """
    J = validate_interaction(J)
    n = J.shape[0]
    counts = np.zeros(n, dtype=np.int64)
    for I in cover.sets:
        counts[I] += 1
    count_viol = np.flatnonzero(counts != cover.target_count).tolist()
    worst = 0.0
    row_viol = []
    tol = 1e-12
    for j, I in enumerate(cover.sets):
        if len(I) == 0:
            continue
        sub = np.abs(J[np.ix_(I, I)]).sum(axis=1)
        worst = max(worst, float(sub.max()))
        for pos in np.flatnonzero(sub > cover.eta + tol):
            row_viol.append((j, int(I[pos])))
    restricted = []
    if spec is not None:
        if rng is None:
            rng = make_rng(0)
        for I in cover.sets[: min(len(cover.sets), 32)]:
            if len(I) == 0:
                continue
            for _ in range(samples_per_set):
                x = 1.0 - 2.0 * rng.integers(0, 2, size=n)
                restricted.append(restrict(spec, I, x).M)
    ok = not count_viol and not row_viol
    return CoverReport(ok, count_viol, worst, row_viol, restricted)


def best_subset_for_weights(cover, theta):
    """Set with the largest theta-mass; guaranteed eta/(8M) of the total."""
    theta = np.asarray(theta, dtype=np.float64)
    if np.any(theta < 0):
        raise NegativeWeight("weights must be nonnegative")
    masses = np.array([theta[I].sum() for I in cover.sets])
    j = int(np.argmax(masses))
    return j, float(masses[j])
