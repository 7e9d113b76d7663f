"""From coefficient matrix to clusters.

The learned Z is symmetrized into a nonnegative similarity graph
S = (|Z| + |Z'|)/2, turned into the unnormalized Laplacian
L = diag(rowsum(S)) - S, embedded by the eigenvectors of the c smallest
eigenvalues, and finished with k-means (k-means++ seeding, restarts).
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


@dataclass
class SimilarityGraph:
    weights: np.ndarray
    degree: np.ndarray


@dataclass
class SpectralEmbedding:
    vectors: np.ndarray
    eigenvalues: np.ndarray


@dataclass
class ClusteringResult:
    assignments: np.ndarray
    inertia: float
    seed: int


def build_graph(Z: np.ndarray) -> SimilarityGraph:
    """S = (|Z| + |Z'|)/2; exactly symmetric, nonnegative, zero diagonal."""
    A = np.abs(np.asarray(Z, dtype=float))
    S = (A + A.T) / 2.0
    return SimilarityGraph(weights=S, degree=S.sum(axis=1))


def laplacian(graph: SimilarityGraph) -> np.ndarray:
    """Unnormalized graph Laplacian diag(degree) - S."""
    return np.diag(graph.degree) - graph.weights


def spectral_embed(L: np.ndarray, c: int) -> SpectralEmbedding:
    """Eigenvectors of the c smallest eigenvalues of a symmetric L."""
    n = L.shape[0]
    if not 1 <= c <= n:
        raise ValueError(f"need 1 <= c <= n, got c={c}, n={n}")
    evals, evecs = np.linalg.eigh(L)
    return SpectralEmbedding(vectors=evecs[:, :c], eigenvalues=evals[:c])


def _kmeanspp(X, c, rng):
    """k-means++ seeding: centers drawn proportionally to squared distance."""
    n = X.shape[0]
    centers = np.empty((c, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for k in range(1, c):
        total = d2.sum()
        if total > 0:
            j = rng.choice(n, p=d2 / total)
        else:
            # every point coincides with a chosen center
            j = rng.integers(n)
        centers[k] = X[j]
        d2 = np.minimum(d2, ((X - centers[k]) ** 2).sum(axis=1))
    return centers


def _assign(X, centers):
    """Nearest-center assignment with empty-cluster repair.

    An empty cluster steals the point currently farthest from its own
    center, which can only lower the objective. Returns (assignments,
    inertia, possibly-updated centers).
    """
    n = X.shape[0]
    d2 = cdist(X, centers, "sqeuclidean")
    assign = d2.argmin(axis=1)
    for k in range(centers.shape[0]):
        if not np.any(assign == k):
            far = d2[np.arange(n), assign].argmax()
            centers[k] = X[far]
            assign[far] = k
            d2[:, k] = ((X - centers[k]) ** 2).sum(axis=1)
    inertia = float(d2[np.arange(n), assign].sum())
    return assign, inertia, centers


def _lloyd(X, centers, max_iter, tol):
    c = centers.shape[0]
    prev = np.inf
    assign, inertia = None, np.inf
    for _ in range(max_iter):
        assign, inertia, centers = _assign(X, centers)
        # Lloyd steps cannot increase the objective (up to rounding)
        assert inertia <= prev * (1 + 1e-12) + 1e-12
        prev = inertia
        new_centers = np.stack([X[assign == k].mean(axis=0) for k in range(c)])
        move = np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max()
        centers = new_centers
        if move < tol:
            break
    return assign, inertia


def kmeans(X, c, seed, restarts=20, max_iter=300, tol=1e-6) -> ClusteringResult:
    """Best-of-restarts k-means on the rows of X.

    Each restart gets its own rng spawned from the master seed, so the
    result is deterministic and restart order does not matter.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if not 1 <= c <= n:
        raise ValueError(f"need 1 <= c <= n, got c={c}, n={n}")
    best_assign, best_inertia = None, np.inf
    for ss in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(ss)
        centers = _kmeanspp(X, c, rng)
        assign, inertia = _lloyd(X, centers.copy(), max_iter, tol)
        if inertia < best_inertia:
            best_assign, best_inertia = assign, inertia
    return ClusteringResult(
        assignments=best_assign, inertia=best_inertia, seed=seed
    )


def cluster(Z: np.ndarray, c: int, seed: int) -> ClusteringResult:
    """Full pipeline: graph, Laplacian, spectral embedding, k-means."""
    emb = spectral_embed(laplacian(build_graph(Z)), c)
    return kmeans(emb.vectors, c, seed=seed, restarts=20)
