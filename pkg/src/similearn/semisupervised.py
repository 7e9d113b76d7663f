"""Graph-based semi-supervised classification.

Implements local-and-global-consistency label propagation: given a
Laplacian L, a partial one-hot label matrix Y and a fitting weight
gamma, the score matrix solves (L + gamma I) F = gamma Y. Predictions
are row argmaxes with ties broken toward the lowest class id.

ssl_experiment runs the stratified-sampling protocol: per repeat, a
fraction of each class is labeled, labels are propagated over the graph
built from a learned coefficient matrix, and accuracy is scored on the
unlabeled samples only.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import LinearSolveError
from .graph import build_graph, laplacian


@dataclass
class LabelMatrix:
    """One-hot labels on labeled rows, all-zero rows elsewhere."""

    values: np.ndarray
    labeled_mask: np.ndarray


@dataclass
class PropagationResult:
    scores: np.ndarray
    predictions: np.ndarray


@dataclass
class SSLResult:
    fraction: float
    mean_acc: float
    std_acc: float
    per_repeat: list = field(default_factory=list)


def make_label_matrix(labels, mask, c) -> LabelMatrix:
    """Build the n x c partial label matrix from ground truth and a mask."""
    labels = np.asarray(labels)
    mask = np.asarray(mask, dtype=bool)
    n = labels.shape[0]
    Y = np.zeros((n, c))
    idx = np.flatnonzero(mask)
    Y[idx, labels[idx]] = 1.0
    return LabelMatrix(values=Y, labeled_mask=mask)


def lgc_propagate(L, Y, gamma, factor=None) -> PropagationResult:
    """Solve (L + gamma I) F = gamma Y and take row argmaxes.

    ``factor`` is an optional precomputed cho_factor of (L + gamma I);
    ssl_experiment shares one factorization across repeats.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    Yv = Y.values if isinstance(Y, LabelMatrix) else np.asarray(Y, dtype=float)
    n = Yv.shape[0]
    if L.shape != (n, n):
        raise ValueError(f"shape mismatch: L {L.shape}, Y {Yv.shape}")
    if factor is None:
        try:
            factor = cho_factor(L + gamma * np.eye(n))
        except LinAlgError as e:
            raise LinearSolveError(
                "L + gamma I is not positive definite; L must be a PSD Laplacian"
            ) from e
    F = gamma * cho_solve(factor, Yv)
    return PropagationResult(scores=F, predictions=F.argmax(axis=1))


def _class_indices(labels):
    """Indices per class; labels must be dense ids 0..c-1, every class nonempty."""
    labels = np.asarray(labels)
    c = int(labels.max()) + 1
    groups = [np.flatnonzero(labels == k) for k in range(c)]
    for k, g in enumerate(groups):
        if g.size == 0:
            raise ValueError(f"class {k} has no samples; relabel densely first")
    return groups, c


def ssl_experiment(Z, labels, fraction, repeats=20, gamma=1.0, seed=0) -> SSLResult:
    """Stratified label-propagation protocol over a learned Z.

    Parameters
    ----------
    Z : ndarray of shape (n, n)
        Learned coefficient matrix.
    labels : ndarray of shape (n,)
        Ground-truth class ids 0..c-1.
    fraction : float in (0, 1)
        Per-class share of samples to label, rounded up to at least one.
    repeats : int
        Number of random labeled sets; each gets its own rng spawned
        from the master seed.
    gamma : float
        LGC fitting weight.

    Returns
    -------
    SSLResult
        Mean and population std of accuracy on unlabeled samples.
    """
    labels = np.asarray(labels)
    n = labels.shape[0]
    if not 0 < fraction <= 1:
        raise ValueError("fraction must lie in (0, 1]")
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    groups, c = _class_indices(labels)
    sizes = [max(1, math.ceil(fraction * g.size)) for g in groups]
    if sum(sizes) >= n:
        raise ValueError(
            "no unlabeled samples left to evaluate; lower the fraction"
        )

    L = laplacian(build_graph(Z))
    try:
        factor = cho_factor(L + gamma * np.eye(n))
    except LinAlgError as e:
        raise LinearSolveError("L + gamma I is not positive definite") from e

    accs = []
    for ss in np.random.SeedSequence(seed).spawn(repeats):
        rng = np.random.default_rng(ss)
        mask = np.zeros(n, dtype=bool)
        for g, k in zip(groups, sizes):
            mask[rng.choice(g, size=k, replace=False)] = True
        Y = make_label_matrix(labels, mask, c)
        pred = lgc_propagate(L, Y, gamma, factor=factor).predictions
        unlabeled = ~mask
        accs.append(float((pred[unlabeled] == labels[unlabeled]).mean()))
    return SSLResult(
        fraction=fraction,
        mean_acc=float(np.mean(accs)),
        std_acc=float(np.std(accs)),
        per_repeat=accs,
    )
