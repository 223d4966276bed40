"""
Data-driven kernel learned from the degree-normalized bootstrap affinity, together with verifiers for the kernel
conditions (nonnegativity, symmetry, positive semi-definiteness) and the multiplicative triangle inequality.
"""
import logging
logger = logging.getLogger(__name__)
from collections import namedtuple

import numpy as np

from .bootstrap import NormalizedAffinity
from .exceptions import ParameterError, RejectedInputError
from .numerics import min_eigenvalue

DEFAULT_XI = 0.1
PSD_TOLERANCE = 1e-8
TRIANGLE_TOLERANCE = 1e-12


class KernelMatrix:
    """
    N x N kernel (similarity) matrix.

    Parameters
    ----------
    k: array_like
        Square matrix with finite entries. Symmetry is not enforced here, use validate_kernel to check it.
    xi: float | None
        Diagonal dominance margin the kernel was constructed with. None for approximated kernels.
    """
    def __init__(self, k, xi=None):
        k = np.asarray(k, dtype=np.float64)
        if k.ndim != 2 or k.shape[0] != k.shape[1]:
            raise RejectedInputError(f'Kernel matrix must be square, got shape {k.shape}.')
        if not np.all(np.isfinite(k)):
            raise RejectedInputError('Kernel matrix contains non-finite entries.')
        self.k = k
        self.xi = xi

    @classmethod
    def of(cls, k):
        if isinstance(k, cls):
            return k
        return cls(k)

    @property
    def n(self):
        return self.k.shape[0]

    def __repr__(self):
        return f'{self.__class__.__name__}(n={self.n}, xi={self.xi})'

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.k
        return self.k.astype(dtype)


class ValidationReport(namedtuple('ValidationReport', ['nonnegative', 'symmetric', 'psd', 'min_eigenvalue',
                                                       'dominance_margin'])):
    """
    Outcome of validate_kernel. Failed conditions are reported, never raised.
    """
    __slots__ = ()

    @property
    def valid(self):
        return self.nonnegative and self.symmetric and self.psd

    def to_dict(self):
        return dict(nonnegative=bool(self.nonnegative), symmetric=bool(self.symmetric), psd=bool(self.psd),
                    min_eigenvalue=float(self.min_eigenvalue), dominance_margin=float(self.dominance_margin),
                    valid=bool(self.valid))


def kernel_entries(g, max_entry, xi, rows=None):
    """
    Evaluates rows of the learned kernel. Off-diagonal entries are exp(-2 max(G) + G_ij); the diagonal entry of row
    i is the sum of its off-diagonal entries plus xi.

    Parameters
    ----------
    g: ndarray
        Full N x N normalized affinity.
    max_entry: float
        Maximum entry of g.
    xi: float
        Diagonal dominance margin.
    rows: array_like[int] | None
        Row indices to evaluate. All rows if None.

    Returns
    -------
    ndarray
        len(rows) x N block of the kernel.
    """
    n = g.shape[0]
    rows = np.arange(n) if rows is None else np.asarray(rows, dtype=int)
    block = np.exp(-2 * max_entry + g[rows])
    block[np.arange(rows.size), rows] = 0
    block[np.arange(rows.size), rows] = block.sum(axis=1) + xi
    return block


def learn_kernel(g, xi=DEFAULT_XI):
    """
    Learns the kernel matrix from the degree-normalized affinity G.

    The result is symmetric, nonnegative and strictly diagonally dominant with margin xi, which makes it positive
    definite.

    Parameters
    ----------
    g: NormalizedAffinity | array_like
    xi: float, default 0.1
        Diagonal dominance margin in (0, 1).

    Returns
    -------
    KernelMatrix
    """
    if not 0 < xi < 1:
        raise ParameterError(f'xi must lie in (0, 1), got {xi}.')
    if not isinstance(g, NormalizedAffinity):
        g = NormalizedAffinity(g)
    return KernelMatrix(kernel_entries(g.g, g.max_entry, xi), xi=xi)


def dominance_margin(k):
    """
    Returns min_i (K_ii - sum_{j != i} |K_ij|).
    """
    k = KernelMatrix.of(k).k
    diag = np.diag(k)
    off = np.abs(k).sum(axis=1) - np.abs(diag)
    return float(np.min(diag - off))


def validate_kernel(k, tol=PSD_TOLERANCE):
    """
    Checks the three kernel conditions: nonnegative entries, symmetry and positive semi-definiteness (smallest
    eigenvalue not below -tol). Also measures the diagonal dominance margin.

    Parameters
    ----------
    k: KernelMatrix | array_like
    tol: float, default 1e-8

    Returns
    -------
    ValidationReport
    """
    k = KernelMatrix.of(k).k
    scale = max(1.0, float(np.abs(k).max()))
    symmetric = bool(np.all(np.abs(k - k.T) <= 1e-12 * scale))
    lam = min_eigenvalue(k)
    return ValidationReport(nonnegative=bool(np.all(k >= 0)), symmetric=symmetric, psd=lam >= -tol,
                            min_eigenvalue=lam, dominance_margin=dominance_margin(k))


def check_mult_triangle(k, tol=TRIANGLE_TOLERANCE):
    """
    Exhaustively checks the multiplicative triangle inequality K_ij >= K_il * K_lj over all triples of distinct
    indices.

    Parameters
    ----------
    k: KernelMatrix | array_like
    tol: float, default 1e-12
        Slack allowed before a triple counts as a violation.

    Returns
    -------
    violations: list[tuple[int, int, int]]
        Violating triples (i, l, j), zero-based. Empty for every learned kernel.
    """
    k = KernelMatrix.of(k).k
    n = k.shape[0]
    violations = []
    off_diagonal = ~np.eye(n, dtype=bool)
    for l in range(n):
        mask = k < np.outer(k[:, l], k[l, :]) - tol
        mask &= off_diagonal
        mask[l, :] = False
        mask[:, l] = False
        violations.extend((int(i), l, int(j)) for i, j in np.argwhere(mask))
    violations.sort()
    return violations
