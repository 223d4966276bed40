"""
Nystroem approximation of the learned kernel. Landmarks are drawn from preliminary groups found by spectral
clustering of the bootstrap affinity, only the N x Q cross block of the kernel is evaluated and the approximation
K* = K_nq K_qq^-1 K_nq^T + rho I is shifted by rho so that it stays positive semi-definite.
"""
import logging
logger = logging.getLogger(__name__)

import numpy as np
from scipy.linalg import solve_triangular

from .bootstrap import SelfRepMatrix, build_affinity, check_data_matrix, normalize_degree
from .exceptions import ParameterError, RejectedInputError, SingularMatrixError
from .kernel import DEFAULT_XI, KernelMatrix, kernel_entries
from .numerics import cholesky, min_eigenvalue
from .spectral import kmeans, spectral_embedding

RHO_MARGIN = 1e-8
PIVOT_RTOL = 1e-10


class NystromKernel:
    """
    Low-rank kernel approximation from Q sampled columns.

    Parameters
    ----------
    k_nq: ndarray
        N x Q similarities between all points and the sampled points.
    k_qq: ndarray
        Q x Q similarities among the sampled points, i.e. k_nq[sample_indices].
    rho: float
        Diagonal shift added when the approximation is assembled.
    sample_indices: array_like[int]
        Indices of the Q sampled points.
    low_rank: ndarray, optional
        Precomputed unshifted product K_nq K_qq^-1 K_nq^T. Computed on first use if omitted.
    """
    def __init__(self, k_nq, k_qq, rho, sample_indices, low_rank=None):
        self.k_nq = np.asarray(k_nq, dtype=np.float64)
        self.k_qq = np.asarray(k_qq, dtype=np.float64)
        self.sample_indices = np.asarray(sample_indices, dtype=int)
        self.rho = float(rho)
        n, q = self.k_nq.shape
        if self.k_qq.shape != (q, q) or self.sample_indices.shape != (q,):
            raise RejectedInputError('Nystroem blocks have inconsistent shapes.')
        if not np.allclose(self.k_nq[self.sample_indices], self.k_qq, rtol=0, atol=1e-12):
            raise RejectedInputError('k_qq must equal the rows of k_nq at the sample indices.')
        if self.rho < 0:
            raise ParameterError(f'rho must be nonnegative, got {rho}.')
        if low_rank is not None and np.shape(low_rank) != (n, n):
            raise RejectedInputError(f'Low-rank product must have shape {(n, n)}, got {np.shape(low_rank)}.')
        self._low_rank = None if low_rank is None else np.asarray(low_rank, dtype=np.float64)

    @property
    def n(self):
        return self.k_nq.shape[0]

    @property
    def q(self):
        return self.k_nq.shape[1]

    @property
    def low_rank(self):
        """
        Unshifted product K_nq K_qq^-1 K_nq^T. The sampled block is factored at most once per instance.
        """
        if self._low_rank is None:
            self._low_rank = _low_rank_product(self.k_nq, self.k_qq)
        return self._low_rank

    def __repr__(self):
        return f'{self.__class__.__name__}(n={self.n}, q={self.q}, rho={self.rho:.3g})'

    def assemble(self):
        return assemble_nystrom(self)


def _regularized_cholesky(k_qq):
    """
    Cholesky factor of the sampled block. If the factorization fails or its smallest pivot falls below
    1e-10 * trace, the block is shifted by 1e-10 * trace * I first.
    """
    shift = PIVOT_RTOL * max(float(np.trace(k_qq)), np.finfo(float).tiny)
    try:
        r = cholesky(k_qq)
        if np.min(np.diag(r)) ** 2 >= shift:
            return r
        reason = f'smallest pivot {np.min(np.diag(r)) ** 2:.3e}'
    except SingularMatrixError as error:
        reason = f'factorization failed at pivot {error.pivot}'
    logger.warning(f'Sampled kernel block is numerically singular ({reason}); adding {shift:.3e} * I.')
    return cholesky(k_qq + shift * np.eye(k_qq.shape[0]))


def _low_rank_product(k_nq, k_qq):
    """
    Returns K_nq K_qq^-1 K_nq^T, computed as H^T H with H = R^-T K_nq^T for the Cholesky factor R of K_qq.
    """
    r = _regularized_cholesky(k_qq)
    h = solve_triangular(r, k_nq.T, trans='T', lower=False)
    product = h.T @ h
    return (product + product.T) / 2


def assemble_nystrom(nk):
    """
    Assembles the dense approximation K* = K_nq K_qq^-1 K_nq^T + rho I.

    Parameters
    ----------
    nk: NystromKernel

    Returns
    -------
    KernelMatrix
        Symmetric approximation. Its xi is None since it has no construction margin.
    """
    product = nk.low_rank.copy()
    product[np.diag_indices_from(product)] += nk.rho
    return KernelMatrix(product)


def nystrom_error(nk, dense):
    """
    Relative Frobenius error of the assembled approximation against a dense kernel.
    """
    dense = KernelMatrix.of(dense).k
    return float(np.linalg.norm(assemble_nystrom(nk).k - dense) / np.linalg.norm(dense))


def allocate_samples(group_sizes, q):
    """
    Splits q samples across groups proportionally to their sizes. Remaining samples go to the groups with the
    largest fractional share, ties to the lower group id, and no group receives more samples than it has members.
    """
    group_sizes = np.asarray(group_sizes, dtype=int)
    share = q * group_sizes / group_sizes.sum()
    quota = np.minimum(np.floor(share).astype(int), group_sizes)
    while quota.sum() < q:
        priority = np.where(quota < group_sizes, share - quota, -np.inf)
        quota[np.argmax(priority)] += 1
    return quota


def sample_landmarks(w, q, n_groups=2, seed=0):
    """
    Selects q landmark points. The bootstrap affinity is split into preliminary groups by spectral clustering, every
    group contributes samples proportionally to its size and within a group the points closest to the group
    centroid in the spectral embedding are taken first.

    Returns
    -------
    ndarray
        Sorted sample indices.
    """
    n = w.shape[0]
    n_groups = max(1, min(n_groups, q))
    if n_groups == 1:
        embedding = np.zeros((n, 1))
        groups = np.zeros(n, dtype=int)
    else:
        embedding = spectral_embedding(w, n_groups)
        groups = kmeans(embedding, n_groups, seed)
    ids = np.unique(groups)
    quota = allocate_samples([np.sum(groups == g) for g in ids], q)
    selected = []
    for g, count in zip(ids, quota):
        members = np.flatnonzero(groups == g)
        centroid = embedding[members].mean(axis=0)
        dist = np.sum((embedding[members] - centroid) ** 2, axis=1)
        selected.extend(members[np.argsort(dist, kind='stable')[:count]])
    return np.sort(np.asarray(selected, dtype=int))


def nystrom_approx(x, z_boot, q, xi=DEFAULT_XI, rho_policy='adaptive', n_groups=2, seed=0):
    """
    Approximates the learned kernel from q sampled points.

    Parameters
    ----------
    x: ndarray
        D x N data matrix. Only its point count is used, the kernel is derived from z_boot.
    z_boot: SelfRepMatrix | array_like
        Bootstrap self-representation of x.
    q: int
        Number of sampled points, 2 <= q <= N.
    xi: float, default 0.1
        Diagonal dominance margin of the learned kernel.
    rho_policy: 'adaptive' | float, default 'adaptive'
        'adaptive' uses rho = max(0, -lambda_min) + 1e-8 for the unshifted approximation. A fixed value is used as
        given unless it leaves the approximation indefinite, in which case it is raised to the adaptive value.
    n_groups: int, default 2
        Number of preliminary groups used for sampling.
    seed: int, default 0

    Returns
    -------
    NystromKernel
    """
    x = check_data_matrix(x)
    z_boot = SelfRepMatrix.of(z_boot)
    n = x.shape[1]
    if z_boot.n != n:
        raise RejectedInputError(f'Bootstrap has {z_boot.n} points but the data has {n}.')
    if not 2 <= q <= n:
        raise ParameterError(f'Sample count q must lie in [2, {n}], got {q}.')
    if not 0 < xi < 1:
        raise ParameterError(f'xi must lie in (0, 1), got {xi}.')

    w = build_affinity(z_boot)
    g = normalize_degree(w)
    sample = sample_landmarks(w.m, q, n_groups=n_groups, seed=seed)
    k_nq = kernel_entries(g.g, g.max_entry, xi, rows=sample).T
    k_qq = k_nq[sample]

    low_rank = _low_rank_product(k_nq, k_qq)
    lam = min_eigenvalue(low_rank)
    adaptive = max(0.0, -lam) + RHO_MARGIN
    if rho_policy == 'adaptive':
        rho = adaptive
    else:
        rho = float(rho_policy)
        if rho < 0:
            raise ParameterError(f'rho must be nonnegative, got {rho}.')
        if lam + rho < 0:
            logger.warning(f'rho={rho:.3g} leaves the approximation indefinite; using {adaptive:.3g} instead.')
            rho = adaptive
    logger.info(f'Nystroem approximation with q={q} of n={n} points, rho={rho:.3g}.')
    return NystromKernel(k_nq, k_qq, rho, sample, low_rank=low_rank)
