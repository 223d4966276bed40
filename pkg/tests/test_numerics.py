import numpy as np
import pytest
from pytest import approx

from subkern.exceptions import RejectedInputError, SingularMatrixError
from subkern.numerics import SymMatrix, sym_eig, min_eigenvalue, cholesky, solve_spd

rng = np.random.default_rng(0)
a = rng.normal(size=(5, 5))
random_sym = (a + a.T) / 2
b = rng.normal(size=(6, 6))
random_spd = b @ b.T + 6 * np.eye(6)


def test_symmatrix_symmetrizes():
    m = SymMatrix([[1.0, 2.0], [4.0, 3.0]])
    assert m.m[0, 1] == m.m[1, 0] == 3.0
    assert m.n == 2


def test_symmatrix_rejects_bad_input():
    with pytest.raises(RejectedInputError):
        SymMatrix(np.ones((2, 3)))
    with pytest.raises(RejectedInputError):
        SymMatrix([[1.0, np.nan], [np.nan, 1.0]])


def test_sym_eig_identity():
    assert sym_eig(np.eye(3)).values == approx([1, 1, 1])


def test_sym_eig_diagonal_sorted():
    assert sym_eig(np.diag([3.0, 1.0, 2.0])).values == approx([1, 2, 3])


def test_sym_eig_matches_general_eigensolver():
    oracle = np.sort(np.linalg.eigvals(random_sym).real)
    np.testing.assert_allclose(sym_eig(random_sym).values, oracle, atol=1e-8)


def test_sym_eig_reconstruction_and_orthonormality():
    values, vectors = sym_eig(random_sym)
    reconstructed = vectors @ np.diag(values) @ vectors.T
    assert np.linalg.norm(random_sym - reconstructed) <= 1e-8 * np.linalg.norm(random_sym)
    np.testing.assert_allclose(vectors.T @ vectors, np.eye(5), atol=1e-8)
    assert np.all(np.diff(values) >= 0)


def test_spectrum_invariant_under_orthogonal_conjugation():
    q, _ = np.linalg.qr(rng.normal(size=(5, 5)))
    np.testing.assert_allclose(sym_eig(q.T @ random_sym @ q).values, sym_eig(random_sym).values, atol=1e-8)


def test_sym_eig_rejects_non_finite():
    with pytest.raises(RejectedInputError):
        sym_eig([[np.inf, 0.0], [0.0, 1.0]])


def test_min_eigenvalue():
    assert min_eigenvalue(np.eye(4)) == approx(1.0)
    assert min_eigenvalue(np.diag([-1.0, 5.0])) == approx(-1.0)


def test_solve_spd_identity():
    rhs = rng.normal(size=(4, 2))
    np.testing.assert_allclose(solve_spd(np.eye(4), rhs), rhs)


def test_solve_spd_scaled_identity():
    assert solve_spd(2 * np.eye(2), np.array([4.0, 6.0])) == approx([2.0, 3.0])


def test_solve_spd_matches_explicit_inverse():
    rhs = rng.normal(size=(6, 3))
    x = solve_spd(random_spd, rhs)
    np.testing.assert_allclose(x, np.linalg.inv(random_spd) @ rhs, atol=1e-9)
    assert np.linalg.norm(random_spd @ x - rhs) <= 1e-10 * np.linalg.norm(rhs)


def test_solve_spd_names_failing_pivot():
    with pytest.raises(SingularMatrixError) as excinfo:
        solve_spd(np.array([[1.0, 2.0], [2.0, 1.0]]), np.ones(2))
    assert excinfo.value.pivot == 2


def test_singular_matrix_error_is_linalg_error():
    with pytest.raises(np.linalg.LinAlgError):
        cholesky(-np.eye(3))


def test_cholesky_factor():
    r = cholesky(random_spd)
    np.testing.assert_allclose(r.T @ r, random_spd, atol=1e-10)
    assert np.allclose(np.tril(r, -1), 0)
