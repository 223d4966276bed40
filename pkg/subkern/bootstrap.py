"""
Linear-space self-representation used to seed kernel learning. The bootstrap representation Z is turned into an
affinity W = (Z + Z^T) / 2 and then into the degree-normalized matrix G = D^-1/2 W D^-1/2 from which the kernel is
learned.
"""
import logging
logger = logging.getLogger(__name__)

import numpy as np

from .exceptions import ParameterError, RejectedInputError
from .numerics import SymMatrix, solve_spd

DEFAULT_DEGREE_EPS = 1e-12


def check_data_matrix(x, min_points=2):
    """
    Validates a D x N data matrix with points as columns and returns it as a float64 array.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise RejectedInputError(f'Data matrix must be two-dimensional, got {x.ndim} dimensions.')
    if x.shape[1] < min_points:
        raise RejectedInputError(f'Data matrix must contain at least {min_points} points (columns).')
    if not np.all(np.isfinite(x)):
        raise RejectedInputError('Data matrix contains non-finite entries.')
    return x


class SelfRepMatrix:
    """
    N x N self-representation coefficient matrix, where column j holds the coefficients that express point j as a
    combination of the other points.

    Parameters
    ----------
    z: array_like
        Square matrix with finite entries.
    """
    def __init__(self, z):
        z = np.asarray(z, dtype=np.float64)
        if z.ndim != 2 or z.shape[0] != z.shape[1]:
            raise RejectedInputError(f'Self-representation must be square, got shape {z.shape}.')
        if not np.all(np.isfinite(z)):
            raise RejectedInputError('Self-representation contains non-finite entries.')
        self.z = z

    @classmethod
    def of(cls, z):
        if isinstance(z, cls):
            return z
        return cls(z)

    @property
    def n(self):
        return self.z.shape[0]

    def __repr__(self):
        return f'{self.__class__.__name__}(n={self.n})'

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.z
        return self.z.astype(dtype)


class NormalizedAffinity:
    """
    Degree-normalized affinity G with its cached maximum entry.
    """
    def __init__(self, g):
        self.g = SymMatrix.of(g).m
        self.max_entry = float(self.g.max()) if self.g.size else 0.0

    @property
    def n(self):
        return self.g.shape[0]

    def __repr__(self):
        return f'{self.__class__.__name__}(n={self.n}, max={self.max_entry:.4f})'


def lsr_selfrep(x, gamma_boot):
    """
    Computes the least-squares self-representation Z = (X^T X + gamma I)^-1 X^T X, sets its diagonal to zero and
    clamps negative coefficients to zero.

    If the data has fewer dimensions than points, the equivalent D x D system X^T (X X^T + gamma I)^-1 X is solved
    instead of the N x N one.

    Parameters
    ----------
    x: ndarray
        D x N data matrix with points as columns.
    gamma_boot: float
        Ridge weight, must be positive.

    Returns
    -------
    SelfRepMatrix
    """
    if not gamma_boot > 0:
        raise ParameterError(f'Bootstrap gamma must be positive, got {gamma_boot}.')
    x = check_data_matrix(x)
    d, n = x.shape
    if d < n:
        z = x.T @ solve_spd(x @ x.T + gamma_boot * np.eye(d), x)
    else:
        gram = x.T @ x
        z = solve_spd(gram + gamma_boot * np.eye(n), gram)
    np.fill_diagonal(z, 0)
    np.maximum(z, 0, out=z)
    return SelfRepMatrix(z)


class Bootstrap:
    """
    Base class for linear-space self-representation solvers that seed kernel learning. Subclasses implement fit.
    """
    def fit(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return self.fit(x)


class LeastSquaresBootstrap(Bootstrap):
    """
    Closed-form least-squares bootstrap, see lsr_selfrep.

    Parameters
    ----------
    gamma: float, default 1.0
        Ridge weight.
    """
    def __init__(self, gamma=1.0):
        if not gamma > 0:
            raise ParameterError(f'Bootstrap gamma must be positive, got {gamma}.')
        self.gamma = gamma

    def __repr__(self):
        return f'{self.__class__.__name__}(gamma={self.gamma})'

    def fit(self, x):
        return lsr_selfrep(x, self.gamma)


def build_affinity(z):
    """
    Builds the symmetric affinity W = (Z + Z^T) / 2 with negative entries clamped to zero and a zero diagonal.

    Parameters
    ----------
    z: SelfRepMatrix | array_like

    Returns
    -------
    SymMatrix
    """
    z = SelfRepMatrix.of(z).z
    w = np.maximum((z + z.T) / 2, 0)
    np.fill_diagonal(w, 0)
    return SymMatrix(w)


def normalize_degree(w, eps=DEFAULT_DEGREE_EPS):
    """
    Symmetric degree normalization G_ij = W_ij / sqrt((d_i + eps)(d_j + eps)) with d the row sums of W.
    Points with a larger degree receive smaller normalized weights. Rows with zero degree stay zero.

    Parameters
    ----------
    w: SymMatrix | array_like
        Symmetric nonnegative affinity with zero diagonal.
    eps: float, default 1e-12
        Guard added to each degree.

    Returns
    -------
    NormalizedAffinity
    """
    w = SymMatrix.of(w).m
    if np.any(w < 0):
        raise RejectedInputError('Affinity must be nonnegative.')
    degree = w.sum(axis=1) + eps
    scale = np.zeros_like(degree)
    np.divide(1.0, np.sqrt(degree), out=scale, where=degree > 0)
    return NormalizedAffinity(w * np.outer(scale, scale))
