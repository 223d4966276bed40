"""
Dense linear algebra shared by all other modules: symmetric eigendecomposition, SPD solves via Cholesky and
PSD verification. Eigenvalues are always reported in ascending order.
"""
import logging
logger = logging.getLogger(__name__)
from collections import namedtuple

import numpy as np
from scipy import linalg
from scipy.linalg.lapack import dpotrf

from .exceptions import RejectedInputError, SingularMatrixError

EigenPairs = namedtuple('EigenPairs', ['values', 'vectors'])


class SymMatrix:
    """
    Dense real symmetric matrix. The entries are symmetrized at construction by storing (M + M^T) / 2.

    Parameters
    ----------
    m: array_like
        Square matrix with finite entries.

    Raises
    ------
    RejectedInputError
        If the matrix is not square or contains non-finite values.
    """
    def __init__(self, m):
        m = np.asarray(m, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise RejectedInputError(f'Expected a square matrix, got shape {m.shape}.')
        if not np.all(np.isfinite(m)):
            raise RejectedInputError('Matrix contains non-finite entries.')
        self.m = (m + m.T) / 2

    @classmethod
    def of(cls, m):
        """
        Returns m unchanged if it already is a SymMatrix, otherwise wraps it.
        """
        if isinstance(m, cls):
            return m
        return cls(m)

    @property
    def n(self):
        return self.m.shape[0]

    def __repr__(self):
        return f'{self.__class__.__name__}(n={self.n})'

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.m
        return self.m.astype(dtype)


def sym_eig(m):
    """
    Computes the full eigendecomposition of a symmetric matrix.

    Parameters
    ----------
    m: SymMatrix | array_like

    Returns
    -------
    EigenPairs
        Eigenvalues in ascending order and orthonormal eigenvectors as columns. Equal eigenvalues keep the
        order in which the solver returned them.
    """
    m = SymMatrix.of(m)
    values, vectors = linalg.eigh(m.m)
    order = np.argsort(values, kind='stable')
    return EigenPairs(values[order], vectors[:, order])


def min_eigenvalue(m):
    """
    Returns the smallest eigenvalue of a symmetric matrix.

    Parameters
    ----------
    m: SymMatrix | array_like

    Returns
    -------
    float
    """
    m = SymMatrix.of(m)
    return float(linalg.eigh(m.m, eigvals_only=True, subset_by_index=[0, 0])[0])


def cholesky(a):
    """
    Computes the upper Cholesky factor R with R^T R = a.

    Parameters
    ----------
    a: SymMatrix | array_like
        Positive definite matrix.

    Raises
    ------
    SingularMatrixError
        If a is not positive definite. The failing pivot is available as the pivot attribute.

    Returns
    -------
    r: ndarray
        Upper triangular factor.
    """
    a = SymMatrix.of(a)
    r, info = dpotrf(a.m, lower=False, clean=True)
    if info > 0:
        raise SingularMatrixError(f'Matrix is not positive definite: pivot {info} is not positive.', pivot=info)
    if info < 0:
        raise RejectedInputError(f'Illegal value in argument {-info} of the Cholesky factorization.')
    return r


def cholesky_solve(r, b):
    """
    Solves a x = b given the upper Cholesky factor r of a.
    """
    return linalg.cho_solve((r, False), np.asarray(b, dtype=np.float64), check_finite=False)


def solve_spd(a, b):
    """
    Solves a x = b for a symmetric positive definite matrix a.

    Parameters
    ----------
    a: SymMatrix | array_like
        Positive definite coefficient matrix.
    b: array_like
        Right hand side, vector or matrix.

    Raises
    ------
    SingularMatrixError
        If a is not positive definite.

    Returns
    -------
    x: ndarray
    """
    b = np.asarray(b, dtype=np.float64)
    if not np.all(np.isfinite(b)):
        raise RejectedInputError('Right hand side contains non-finite entries.')
    return cholesky_solve(cholesky(a), b)
