"""
Final clustering step: affinity from the learned representation, normalized-Laplacian embedding with k-means, and
connected component counting for verifying block structure.
"""
import logging
logger = logging.getLogger(__name__)

import numpy as np
from sklearn.cluster import KMeans
from sklearn.preprocessing import normalize

from .bootstrap import build_affinity
from .exceptions import ParameterError, RejectedInputError
from .numerics import SymMatrix, sym_eig

DEFAULT_THRESHOLD = 1e-3
KMEANS_RESTARTS = 20


class LabelVector:
    """
    Cluster assignment of N points to ids in [0, k).

    Parameters
    ----------
    labels: array_like[int]
    k: int | None
        Number of clusters. Defaults to max(labels) + 1.
    """
    def __init__(self, labels, k=None):
        labels = np.asarray(labels)
        if labels.ndim != 1 or labels.size == 0:
            raise RejectedInputError('Labels must be a non-empty one-dimensional sequence.')
        if not np.issubdtype(labels.dtype, np.integer):
            if not np.all(np.mod(labels, 1) == 0):
                raise RejectedInputError('Labels must be integers.')
            labels = labels.astype(int)
        k = int(labels.max()) + 1 if k is None else int(k)
        if labels.min() < 0 or labels.max() >= k:
            raise RejectedInputError(f'Label ids must lie in [0, {k}).')
        self.labels = labels.astype(int)
        self.k = k

    @classmethod
    def of(cls, labels):
        if isinstance(labels, cls):
            return labels
        return cls(labels)

    def __len__(self):
        return self.labels.size

    def __repr__(self):
        return f'{self.__class__.__name__}(n={len(self)}, k={self.k})'

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.labels
        return self.labels.astype(dtype)


class UnionFind:
    """
    Disjoint set forest with path compression, used to count connected components.
    """
    def __init__(self, size):
        self.parents = list(range(size))
        self.num_components = size

    def find(self, elem):
        root = elem
        while root != self.parents[root]:
            root = self.parents[root]
        # compress the path so every visited element points to the root
        while elem != root:
            self.parents[elem], elem = root, self.parents[elem]
        return root

    def union(self, a, b):
        ra = self.find(a)
        rb = self.find(b)
        if ra == rb:
            return
        # keep the smaller index as root so component ids are stable
        if rb < ra:
            ra, rb = rb, ra
        self.parents[rb] = ra
        self.num_components -= 1

    def components(self):
        groups = dict()
        for i in range(len(self.parents)):
            groups.setdefault(self.find(i), []).append(i)
        return list(groups.values())


def laplacian(w):
    """
    Returns the unnormalized graph Laplacian Diag(W 1) - W.
    """
    w = SymMatrix.of(w).m
    return np.diag(w.sum(axis=1)) - w


def affinity_from_z(z):
    """
    Builds the spectral clustering affinity (Z + Z^T) / 2 with negatives clamped and a zero diagonal.

    Parameters
    ----------
    z: SelfRepMatrix | array_like

    Returns
    -------
    SymMatrix
    """
    return build_affinity(z)


def binarize(w, threshold=DEFAULT_THRESHOLD):
    """
    Returns the 0/1 adjacency matrix of edges with weight >= threshold. The diagonal is zero.
    """
    w = SymMatrix.of(w).m
    adjacency = (w >= threshold).astype(np.float64)
    np.fill_diagonal(adjacency, 0)
    return adjacency


def count_components(w, threshold=DEFAULT_THRESHOLD):
    """
    Counts the connected components of the graph whose edges are the entries of w with weight >= threshold.

    Parameters
    ----------
    w: SymMatrix | array_like
        Symmetric nonnegative affinity.
    threshold: float, default 1e-3

    Returns
    -------
    int
    """
    adjacency = binarize(w, threshold)
    uf = UnionFind(adjacency.shape[0])
    for i, j in np.argwhere(np.triu(adjacency, 1)):
        uf.union(int(i), int(j))
    return uf.num_components


def zero_eigenvalue_multiplicity(w, threshold=DEFAULT_THRESHOLD, tol=1e-6):
    """
    Counts the Laplacian eigenvalues below tol of the binarized graph, which equals its number of connected
    components.
    """
    values = sym_eig(laplacian(binarize(w, threshold))).values
    return int(np.sum(values < tol))


def spectral_embedding(w, k):
    """
    Embeds the graph into the bottom k eigenvectors of the normalized Laplacian I - D^-1/2 W D^-1/2, with rows
    scaled to unit length. Zero-degree rows and zero embedding rows are left as zero vectors.

    Returns
    -------
    ndarray
        N x k embedding.
    """
    w = SymMatrix.of(w).m
    degree = w.sum(axis=1)
    isolated = degree <= 0
    if np.any(isolated):
        logger.warning(f'{int(isolated.sum())} points have zero degree in the affinity graph.')
    scale = np.zeros_like(degree)
    np.divide(1.0, np.sqrt(degree), out=scale, where=~isolated)
    lsym = np.eye(w.shape[0]) - w * np.outer(scale, scale)
    vectors = sym_eig(lsym).vectors[:, :k]
    return normalize(vectors)


def farthest_first_centers(x, k, rng):
    """
    Chooses k initial centers: the first uniformly at random, every following one as the point farthest from the
    centers chosen so far. Ties go to the lowest index.
    """
    n = x.shape[0]
    chosen = [int(rng.integers(n))]
    dist = np.sum((x - x[chosen[0]]) ** 2, axis=1)
    for _ in range(1, k):
        nxt = int(np.argmax(dist))
        chosen.append(nxt)
        dist = np.minimum(dist, np.sum((x - x[nxt]) ** 2, axis=1))
    return x[chosen]


def canonical_labels(labels):
    """
    Renames cluster ids in order of first appearance.
    """
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.argsort(np.argsort(first))
    return rank[inverse.ravel()]


def kmeans(x, k, seed, n_restarts=KMEANS_RESTARTS):
    """
    Lloyd k-means with farthest-first initialization. Each restart draws its first center from a generator derived
    from (seed, restart) and the restart with the lowest inertia is kept.

    Returns
    -------
    labels: ndarray
    """
    best_inertia = np.inf
    best_labels = None
    for restart in range(n_restarts):
        rng = np.random.default_rng([seed, restart])
        centers = farthest_first_centers(x, k, rng)
        model = KMeans(n_clusters=k, init=centers, n_init=1, random_state=seed).fit(x)
        if model.inertia_ < best_inertia:
            best_inertia = model.inertia_
            best_labels = model.labels_
    return canonical_labels(best_labels)


def spectral_cluster(w, k, seed=0):
    """
    Spectral clustering of a symmetric nonnegative affinity into k clusters.

    Parameters
    ----------
    w: SymMatrix | array_like
    k: int
        Number of clusters, 1 <= k <= N.
    seed: int, default 0
        Master seed for the k-means restarts.

    Returns
    -------
    LabelVector
    """
    w = SymMatrix.of(w)
    if not 1 <= k <= w.n:
        raise ParameterError(f'Number of clusters must lie in [1, {w.n}], got {k}.')
    if np.any(w.m < 0):
        raise RejectedInputError('Affinity must be nonnegative.')
    if k == 1:
        return LabelVector(np.zeros(w.n, dtype=int), k=1)
    embedding = spectral_embedding(w, k)
    return LabelVector(kmeans(embedding, k, seed), k=k)
