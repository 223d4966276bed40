import numpy as np
import pytest

from subkern.exceptions import ParameterError, RejectedInputError
from subkern.metrics import accuracy
from subkern.solver import block_diag_norm
from subkern.spectral import (LabelVector, UnionFind, affinity_from_z, binarize, canonical_labels, count_components,
                              spectral_cluster, spectral_embedding, zero_eigenvalue_multiplicity)

rng = np.random.default_rng(7)


def _planted_blocks(sizes, low=0.1, high=1.0):
    n = sum(sizes)
    w = np.zeros((n, n))
    truth = np.repeat(np.arange(len(sizes)), sizes)
    start = 0
    for size in sizes:
        block = rng.uniform(low, high, size=(size, size))
        w[start:start + size, start:start + size] = (block + block.T) / 2
        start += size
    np.fill_diagonal(w, 0)
    return w, truth


def test_label_vector():
    labels = LabelVector([0, 2, 1, 2])
    assert labels.k == 3
    assert len(labels) == 4
    with pytest.raises(RejectedInputError):
        LabelVector([0, 3], k=2)
    with pytest.raises(RejectedInputError):
        LabelVector([])
    with pytest.raises(RejectedInputError):
        LabelVector([0.5, 1])


def test_union_find():
    uf = UnionFind(5)
    uf.union(0, 1)
    uf.union(3, 4)
    uf.union(1, 0)
    assert uf.num_components == 3
    assert uf.find(1) == 0
    assert sorted(map(sorted, uf.components())) == [[0, 1], [2], [3, 4]]


def test_affinity_from_z():
    z = np.array([[0.0, 0.2], [0.2, 0.0]])
    np.testing.assert_array_equal(affinity_from_z(z).m, z)
    w = affinity_from_z(np.array([[0.0, 1.0], [-1.0, 0.0]])).m
    np.testing.assert_array_equal(w, np.zeros((2, 2)))
    np.testing.assert_array_equal(affinity_from_z(np.zeros((3, 3))).m, np.zeros((3, 3)))


def test_binarize():
    w = np.array([[0.0, 1e-4, 0.5], [1e-4, 0.0, 1e-3], [0.5, 1e-3, 0.0]])
    expected = np.array([[0, 0, 1], [0, 0, 1], [1, 1, 0]], dtype=float)
    np.testing.assert_array_equal(binarize(w, 1e-3), expected)


def test_count_components_two_blocks():
    w, _ = _planted_blocks([3, 4])
    assert count_components(w) == 2
    assert zero_eigenvalue_multiplicity(w) == 2


def test_count_components_fully_connected():
    w = np.ones((5, 5)) - np.eye(5)
    assert count_components(w) == 1
    assert zero_eigenvalue_multiplicity(w) == 1


def test_count_components_respects_threshold():
    w, _ = _planted_blocks([3, 3])
    w[0, 5] = w[5, 0] = 1e-4
    assert count_components(w, 1e-3) == 2
    assert count_components(w, 1e-5) == 1


def test_component_count_matches_laplacian_null_space():
    for _ in range(30):
        b = int(rng.integers(1, 7))
        sizes = rng.integers(3, 7, size=b).tolist()
        w, _ = _planted_blocks(sizes)
        assert count_components(w, 1e-3) == b
        assert zero_eigenvalue_multiplicity(w, 1e-3) == b
        assert block_diag_norm(w, b) <= 1e-8
        assert block_diag_norm(w, b + 1) > 1e-8


def test_spectral_cluster_two_blocks():
    w = np.zeros((6, 6))
    w[:3, :3] = 1
    w[3:, 3:] = 1
    np.fill_diagonal(w, 0)
    labels = spectral_cluster(w, 2)
    assert accuracy([0, 0, 0, 1, 1, 1], labels) == 1.0
    assert labels.labels[0] == 0


def test_spectral_cluster_single_cluster():
    w, _ = _planted_blocks([4, 4])
    labels = spectral_cluster(w, 1)
    np.testing.assert_array_equal(labels.labels, np.zeros(8, dtype=int))
    assert labels.k == 1


def test_spectral_cluster_recovers_planted_cliques():
    w, truth = _planted_blocks([5, 7, 6])
    labels = spectral_cluster(w, 3, seed=3)
    uf = UnionFind(w.shape[0])
    for i, j in np.argwhere(np.triu(binarize(w), 1)):
        uf.union(int(i), int(j))
    oracle = np.array([uf.find(i) for i in range(w.shape[0])])
    assert accuracy(canonical_labels(oracle), labels) == 1.0
    assert accuracy(truth, labels) == 1.0


def test_spectral_cluster_deterministic_and_permutation_equivariant():
    w, truth = _planted_blocks([6, 5, 7])
    w[0, 10] = w[10, 0] = 0.05
    first = spectral_cluster(w, 3, seed=11).labels
    np.testing.assert_array_equal(first, spectral_cluster(w, 3, seed=11).labels)
    p = rng.permutation(w.shape[0])
    permuted = spectral_cluster(w[np.ix_(p, p)], 3, seed=11).labels
    assert accuracy(first[p], permuted) == 1.0


def test_spectral_cluster_rejects_invalid_k():
    w, _ = _planted_blocks([2, 2])
    with pytest.raises(ParameterError):
        spectral_cluster(w, 5)
    with pytest.raises(ParameterError):
        spectral_cluster(w, 0)


def test_spectral_embedding_isolated_point():
    w, _ = _planted_blocks([3, 3])
    w = np.pad(w, ((0, 1), (0, 1)))
    embedding = spectral_embedding(w, 2)
    assert embedding.shape == (7, 2)
    assert np.all(np.isfinite(embedding))


def test_canonical_labels():
    np.testing.assert_array_equal(canonical_labels(np.array([2, 2, 0, 1, 0])), [0, 0, 1, 2, 1])
