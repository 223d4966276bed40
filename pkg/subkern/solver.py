"""
Alternating minimization of the relaxed kernel self-representation objective

    1/2 Tr(K + Z^T K Z) - alpha Tr(K Z) + beta/2 ||Z - C||^2 + gamma <Diag(C 1) - C, S>

over Z (unconstrained), S (0 <= S <= I, Tr S = k) and C (symmetric, nonnegative, zero diagonal). Every update is
the exact minimizer of its convex subproblem, so the objective never increases.
"""
import logging
logger = logging.getLogger(__name__)
from dataclasses import dataclass, asdict

import numpy as np
import pandas as pd
from tqdm.auto import tqdm

from .bootstrap import SelfRepMatrix
from .exceptions import ParameterError, RejectedInputError
from .kernel import KernelMatrix
from .numerics import SymMatrix, cholesky, cholesky_solve, sym_eig
from .spectral import laplacian

TIE_TOLERANCE = 1e-10


@dataclass
class SolverConfig:
    """
    Weights and stopping rule of the alternating minimization.

    Parameters
    ----------
    alpha: float, default 2
        Weight of the local structure term -Tr(K Z).
    beta: float, default 10
        Weight of the relaxation term ||Z - C||^2.
    gamma: float, default 1
        Weight of the block diagonal regularizer.
    k: int, default 2
        Number of blocks (clusters).
    max_iters: int, default 300
    tol: float, default 1e-6
        Stop once the largest absolute change of Z and C falls below tol.
    """
    alpha: float = 2.0
    beta: float = 10.0
    gamma: float = 1.0
    k: int = 2
    max_iters: int = 300
    tol: float = 1e-6

    def validate(self, n=None):
        for name in ('alpha', 'beta', 'gamma', 'tol'):
            if not getattr(self, name) > 0:
                raise ParameterError(f'{name} must be positive, got {getattr(self, name)}.')
        if int(self.k) != self.k or self.k < 1:
            raise ParameterError(f'k must be a positive integer, got {self.k}.')
        if n is not None and not self.k < n:
            raise ParameterError(f'k must be smaller than the number of points {n}, got {self.k}.')
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ParameterError(f'max_iters must be a positive integer, got {self.max_iters}.')
        return self

    def to_dict(self):
        return asdict(self)


class SolverState:
    """
    Iterates of the alternating minimization together with the objective history.

    Attributes
    ----------
    z: SelfRepMatrix
    c: SelfRepMatrix
        Symmetric, nonnegative, zero diagonal.
    s: SymMatrix
        Spectral projection onto the k smallest Laplacian eigenvectors of the previous C.
    objective_history: list[float]
        Objective of the initial point followed by the objective after every iteration.
    z_deltas, c_deltas: list[float]
        Largest absolute change of Z and C per iteration.
    iterations: int
    converged: bool
        False if max_iters was reached before the tolerance was met.
    """
    def __init__(self, z, c, s):
        self.z = z
        self.c = c
        self.s = s
        self.objective_history = []
        self.z_deltas = []
        self.c_deltas = []
        self.iterations = 0
        self.converged = False

    def __repr__(self):
        return (f'{self.__class__.__name__}(n={self.z.n}, iterations={self.iterations}, '
                f'converged={self.converged})')

    def history_frame(self):
        """
        Returns the objective history as a DataFrame with columns iteration, objective, z_delta and c_delta. The
        first row is the initial point, which has no deltas.
        """
        return pd.DataFrame(dict(
            iteration=np.arange(len(self.objective_history)),
            objective=self.objective_history,
            z_delta=[np.nan] + self.z_deltas,
            c_delta=[np.nan] + self.c_deltas,
        ))


def _check_k(k, n):
    if int(k) != k or not 1 <= k < n:
        raise ParameterError(f'k must be an integer in [1, {n}), got {k}.')


def block_diag_norm(c, k):
    """
    Sum of the k smallest eigenvalues of the Laplacian Diag(C 1) - C. It is zero exactly when the graph of C has at
    least k connected components.

    Parameters
    ----------
    c: SymMatrix | array_like
        Symmetric nonnegative matrix with zero diagonal.
    k: int
        1 <= k < n.

    Returns
    -------
    float
    """
    c = SymMatrix.of(c)
    _check_k(k, c.n)
    return float(np.sum(sym_eig(laplacian(c)).values[:k]))


def update_z(kernel, c, alpha, beta, factor=None):
    """
    Minimizes 1/2 Tr(Z^T K Z) - alpha Tr(K Z) + beta/2 ||Z - C||^2 over Z, giving Z = (K + beta I)^-1 (alpha K + beta C).

    Parameters
    ----------
    kernel: KernelMatrix | array_like
        Positive semi-definite kernel.
    c: SelfRepMatrix | array_like
    alpha: float
    beta: float
        Must be positive so that K + beta I is positive definite.
    factor: ndarray, optional
        Upper Cholesky factor of K + beta I, reused across iterations by the solver.

    Returns
    -------
    SelfRepMatrix
    """
    if not beta > 0:
        raise ParameterError(f'beta must be positive, got {beta}.')
    k = KernelMatrix.of(kernel).k
    c = SelfRepMatrix.of(c).z
    if factor is None:
        factor = cholesky(k + beta * np.eye(k.shape[0]))
    return SelfRepMatrix(cholesky_solve(factor, alpha * k + beta * c))


def update_s(c, k, tie_tol=TIE_TOLERANCE):
    """
    Minimizes <Diag(C 1) - C, S> over 0 <= S <= I with Tr S = k.

    The minimizer is U U^T for the eigenvectors U of the k smallest Laplacian eigenvalues. If the k-th and
    (k+1)-th eigenvalues coincide, the tied eigenspace of dimension r is weighted uniformly with m/r, where m of its
    directions are needed to reach trace k. That choice is also optimal and does not depend on the eigenbasis the
    eigensolver picked, so the update commutes with permutations of the points.

    Parameters
    ----------
    c: SymMatrix | SelfRepMatrix | array_like
        Symmetric nonnegative matrix with zero diagonal.
    k: int
        1 <= k < n.
    tie_tol: float, default 1e-10
        Relative tolerance under which eigenvalues count as tied.

    Returns
    -------
    SymMatrix
    """
    c = SymMatrix.of(np.asarray(c))
    _check_k(k, c.n)
    values, vectors = sym_eig(laplacian(c))
    tol = tie_tol * max(1.0, float(np.abs(values).max()))
    boundary = values[k - 1]
    below = int(np.sum(values < boundary - tol))
    tied = np.flatnonzero(np.abs(values - boundary) <= tol)
    if tied.size == 0 or tied.max() < k:
        u = vectors[:, :k]
        return SymMatrix(u @ u.T)
    u_below = vectors[:, :below]
    u_tied = vectors[:, tied]
    weight = (k - below) / tied.size
    return SymMatrix(u_below @ u_below.T + weight * (u_tied @ u_tied.T))


def update_c(z, s, gamma, beta):
    """
    Minimizes 1/2 ||C - A||^2 over symmetric, nonnegative C with zero diagonal, where
    A = Z - gamma/beta (diag(S) 1^T - S). The solution projects A elementwise: C = [(A_hat + A_hat^T) / 2]_+ with
    A_hat the matrix A with its diagonal set to zero.

    Parameters
    ----------
    z: SelfRepMatrix | array_like
    s: SymMatrix | array_like
    gamma: float
    beta: float

    Returns
    -------
    SelfRepMatrix
    """
    if not beta > 0:
        raise ParameterError(f'beta must be positive, got {beta}.')
    z = SelfRepMatrix.of(z).z
    s = SymMatrix.of(s).m
    if z.shape != s.shape:
        raise RejectedInputError(f'Shapes of Z {z.shape} and S {s.shape} do not match.')
    a = z - gamma / beta * (np.diag(s)[:, None] - s)
    np.fill_diagonal(a, 0)
    return SelfRepMatrix(np.maximum((a + a.T) / 2, 0))


def objective(kernel, z, c, s, cfg):
    """
    Evaluates 1/2 Tr(K + Z^T K Z) - alpha Tr(K Z) + beta/2 ||Z - C||^2 + gamma <Diag(C 1) - C, S>.

    Returns
    -------
    float
    """
    k = KernelMatrix.of(kernel).k
    z = SelfRepMatrix.of(z).z
    c = SelfRepMatrix.of(c).z
    s = np.asarray(s, dtype=np.float64)
    if not k.shape == z.shape == c.shape == s.shape:
        raise RejectedInputError('Kernel, Z, C and S must have the same shape.')
    kz = k @ z
    lc = np.diag(c.sum(axis=1)) - c
    return float(0.5 * (np.trace(k) + np.sum(z * kz)) - cfg.alpha * np.trace(kz)
                 + cfg.beta / 2 * np.sum((z - c) ** 2) + cfg.gamma * np.sum(lc * s))


def solve_representation(kernel, cfg, progress=False):
    """
    Runs the alternating minimization from Z = C = S = 0. Each iteration updates Z, then S from the previous C, then
    C, and records the objective. Stops once max(|Z - Z_prev|_inf, |C - C_prev|_inf) < cfg.tol or after
    cfg.max_iters iterations. Running out of iterations is reported through SolverState.converged.

    Parameters
    ----------
    kernel: KernelMatrix | array_like
        Valid (positive semi-definite) kernel.
    cfg: SolverConfig
    progress: bool, default False
        Show a progress bar.

    Returns
    -------
    SolverState
    """
    kernel = KernelMatrix.of(kernel)
    k = SymMatrix(kernel.k).m
    n = k.shape[0]
    cfg.validate(n)
    factor = cholesky(k + cfg.beta * np.eye(n))

    zeros = np.zeros((n, n))
    state = SolverState(SelfRepMatrix(zeros), SelfRepMatrix(zeros), SymMatrix(zeros))
    state.objective_history.append(objective(k, state.z, state.c, state.s.m, cfg))

    for _ in tqdm(range(cfg.max_iters), desc='Solving', disable=not progress):
        z = update_z(k, state.c, cfg.alpha, cfg.beta, factor=factor)
        s = update_s(state.c.z, cfg.k)
        c = update_c(z, s, cfg.gamma, cfg.beta)
        z_delta = float(np.abs(z.z - state.z.z).max())
        c_delta = float(np.abs(c.z - state.c.z).max())
        state.z, state.s, state.c = z, s, c
        state.iterations += 1
        state.z_deltas.append(z_delta)
        state.c_deltas.append(c_delta)
        state.objective_history.append(objective(k, z, c, s.m, cfg))
        logger.debug(f'Iteration {state.iterations}: objective={state.objective_history[-1]:.10g}, '
                     f'dZ={z_delta:.3e}, dC={c_delta:.3e}')
        if max(z_delta, c_delta) < cfg.tol:
            state.converged = True
            break

    if not state.converged:
        logger.warning(f'Solver did not converge within {cfg.max_iters} iterations.')
    return state
