"""Clustering evaluation: Hungarian-matched accuracy and NMI.

Both metrics are invariant to how either side labels its groups.
Accuracy maps predicted clusters to true classes by optimal one-to-one
assignment on the contingency table; NMI is mutual information divided
by the larger of the two partition entropies (natural log, so the base
cancels).
"""

import numpy as np
from scipy.optimize import linear_sum_assignment


def _check_pair(pred, truth):
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.size == 0:
        raise ValueError("empty assignment vectors")
    if pred.size != truth.size:
        raise ValueError(
            f"length mismatch: pred has {pred.size}, truth has {truth.size}"
        )
    return pred, truth


def contingency(pred, truth) -> np.ndarray:
    """Count matrix indexed (predicted group, true group).

    Group ids may be arbitrary hashables; rows and columns follow the
    sorted unique values of each side.
    """
    pred, truth = _check_pair(pred, truth)
    pu, pi = np.unique(pred, return_inverse=True)
    tu, ti = np.unique(truth, return_inverse=True)
    counts = np.zeros((pu.size, tu.size), dtype=np.int64)
    np.add.at(counts, (pi, ti), 1)
    return counts


def hungarian(cost) -> np.ndarray:
    """Minimum-cost injective row-to-column assignment.

    Rectangular inputs are zero-padded to square first. Returns, per
    row, the assigned column, or -1 for rows matched to padding.
    """
    cost = np.asarray(cost, dtype=float)
    if not np.all(np.isfinite(cost)):
        raise ValueError("cost matrix contains non-finite entries")
    r, c = cost.shape
    size = max(r, c)
    padded = np.zeros((size, size))
    padded[:r, :c] = cost
    rows, cols = linear_sum_assignment(padded)
    out = np.full(r, -1, dtype=int)
    for i, j in zip(rows, cols):
        if i < r and j < c:
            out[i] = j
    return out


def accuracy(pred, truth) -> float:
    """Best achievable agreement under one-to-one cluster-to-class mapping."""
    pred, truth = _check_pair(pred, truth)
    w = contingency(pred, truth)
    # negate counts so minimum cost = maximum agreement; the zero padding
    # then reads as "maps to nothing", which is what unmatched clusters mean
    match = hungarian(-w.astype(float))
    total = sum(w[i, j] for i, j in enumerate(match) if j >= 0)
    return float(total) / pred.size


def nmi(pred, truth) -> float:
    """Mutual information over max entropy, in [0, 1].

    Conventions for the degenerate cases: two single-group partitions
    are identical (1.0); a single-group partition against a real split
    carries no information (0.0).
    """
    pred, truth = _check_pair(pred, truth)
    w = contingency(pred, truth)
    n = pred.size
    p = w / n
    pi = p.sum(axis=1)
    pj = p.sum(axis=0)
    hi = float(-np.sum(pi[pi > 0] * np.log(pi[pi > 0])))
    hj = float(-np.sum(pj[pj > 0] * np.log(pj[pj > 0])))
    if hi == 0.0 and hj == 0.0:
        return 1.0
    if hi == 0.0 or hj == 0.0:
        return 0.0
    nz = p > 0
    outer = pi[:, None] * pj[None, :]
    mi = float(np.sum(p[nz] * np.log(p[nz] / outer[nz])))
    return max(mi, 0.0) / max(hi, hj)
