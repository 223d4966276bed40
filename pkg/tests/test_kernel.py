import numpy as np
import pytest
from pytest import approx

from subkern.bootstrap import build_affinity, lsr_selfrep, normalize_degree
from subkern.exceptions import ParameterError
from subkern.kernel import check_mult_triangle, dominance_margin, learn_kernel, validate_kernel

rng = np.random.default_rng(2)


def _learned_kernel(n, xi=0.1, dims=3, seed=None):
    gen = rng if seed is None else np.random.default_rng(seed)
    x = gen.normal(size=(dims, n))
    return learn_kernel(normalize_degree(build_affinity(lsr_selfrep(x, 1.0))), xi=xi)


def test_learn_kernel_two_points():
    k = learn_kernel(np.array([[0.0, 1.0], [1.0, 0.0]]), xi=0.1).k
    assert k[0, 1] == approx(np.exp(-1))
    assert k[1, 0] == approx(0.36788, abs=1e-5)
    assert k[0, 0] == approx(np.exp(-1) + 0.1)
    assert k[1, 1] == approx(0.46788, abs=1e-5)


def test_learn_kernel_zero_affinity():
    k = learn_kernel(np.zeros((3, 3)), xi=0.5).k
    expected = np.ones((3, 3))
    np.fill_diagonal(expected, 2.5)
    np.testing.assert_allclose(k, expected)


def test_learn_kernel_rejects_xi_out_of_range():
    for xi in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ParameterError):
            learn_kernel(np.zeros((3, 3)), xi=xi)


def test_kernel_validity_suite():
    for trial in range(40):
        n = int(rng.integers(5, 81))
        xi = (0.05, 0.1, 0.5)[trial % 3]
        kernel = _learned_kernel(n, xi=xi)
        report = validate_kernel(kernel)
        assert report.valid
        assert report.min_eigenvalue >= -1e-8
        k = kernel.k
        off = k.sum(axis=1) - np.diag(k)
        np.testing.assert_allclose(np.diag(k) - off, xi, atol=1e-10)
        assert dominance_margin(kernel) == approx(xi, abs=1e-10)


def test_validate_identity():
    report = validate_kernel(np.eye(3))
    assert report.nonnegative and report.symmetric and report.psd
    assert report.dominance_margin == approx(1.0)


def test_validate_negative_entries():
    report = validate_kernel(np.array([[1.0, -0.5], [-0.5, 1.0]]))
    assert not report.nonnegative
    assert report.symmetric
    assert report.psd
    assert not report.valid
    assert report.min_eigenvalue == approx(0.5)


def test_validate_asymmetric_and_indefinite():
    report = validate_kernel(np.array([[0.0, 1.0], [2.0, 0.0]]))
    assert not report.symmetric
    report = validate_kernel(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert not report.psd
    assert set(report.to_dict()) == {'nonnegative', 'symmetric', 'psd', 'min_eigenvalue', 'dominance_margin',
                                     'valid'}


def test_triangle_inequality_on_learned_kernels():
    for _ in range(12):
        n = int(rng.integers(3, 41))
        assert check_mult_triangle(_learned_kernel(n)) == []


def test_triangle_two_points_is_vacuous():
    assert check_mult_triangle(np.array([[1.0, 0.0], [0.0, 1.0]])) == []


def test_triangle_reports_constructed_violation():
    k = np.array([[1.0, 0.1, 0.9],
                  [0.1, 1.0, 0.9],
                  [0.9, 0.9, 1.0]])
    violations = check_mult_triangle(k)
    assert (0, 2, 1) in violations
    assert (1, 2, 0) in violations
    assert (0, 1, 2) not in violations


def test_learn_kernel_permutation_equivariance():
    x = rng.normal(size=(3, 15))
    g = normalize_degree(build_affinity(lsr_selfrep(x, 1.0))).g
    p = rng.permutation(15)
    np.testing.assert_allclose(learn_kernel(g[np.ix_(p, p)]).k, learn_kernel(g).k[np.ix_(p, p)], atol=1e-12)


def test_learn_kernel_monotone_in_affinity():
    g = np.array([[0.0, 0.2, 0.5], [0.2, 0.0, 0.8], [0.5, 0.8, 0.0]])
    k = learn_kernel(g).k
    assert k[0, 1] < k[0, 2] < k[1, 2]
