import itertools
import json

import numpy as np
import pytest
from pytest import approx

from subkern.exceptions import RejectedInputError
from subkern.metrics import MetricReport, accuracy, evaluate, nmi, purity

rng = np.random.default_rng(8)


def _table(truth, pred):
    table = np.zeros((truth.max() + 1, pred.max() + 1), dtype=int)
    for t, p in zip(truth, pred):
        table[t, p] += 1
    # drop empty classes and clusters
    return table[table.sum(axis=1) > 0][:, table.sum(axis=0) > 0]


def _accuracy_oracle(truth, pred):
    table = _table(truth, pred)
    size = max(table.shape)
    padded = np.zeros((size, size), dtype=int)
    padded[:table.shape[0], :table.shape[1]] = table
    best = max(sum(padded[i, perm[i]] for i in range(size)) for perm in itertools.permutations(range(size)))
    return best / len(truth)


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return -np.sum(p * np.log(p))


def _nmi_oracle(truth, pred):
    table = _table(truth, pred)
    n = len(truth)
    if table.shape == (1, 1):
        return 1.0
    if 1 in table.shape:
        return 0.0
    rows = table.sum(axis=1)
    cols = table.sum(axis=0)
    mi = 0.0
    for i in range(table.shape[0]):
        for j in range(table.shape[1]):
            if table[i, j]:
                mi += table[i, j] / n * np.log(n * table[i, j] / (rows[i] * cols[j]))
    return mi / ((_entropy(rows, n) + _entropy(cols, n)) / 2)


def _purity_oracle(truth, pred):
    total = 0
    for cluster in np.unique(pred):
        members = truth[pred == cluster]
        total += np.bincount(members).max()
    return total / len(truth)


def test_accuracy_relabeling():
    assert accuracy([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0


def test_accuracy_half():
    assert accuracy([0, 0, 1, 1], [0, 1, 0, 1]) == 0.5


def test_nmi_identical_and_independent():
    assert nmi([0, 0, 1, 1, 2], [2, 2, 0, 0, 1]) == approx(1.0)
    assert nmi([0, 0, 1, 1], [0, 1, 0, 1]) == approx(0.0, abs=1e-12)


def test_nmi_degenerate_partitions():
    assert nmi([0, 0, 0], [0, 0, 0]) == 1.0
    assert nmi([0, 0, 0, 0], [0, 1, 0, 1]) == 0.0
    assert nmi([0, 1, 0, 1], [0, 0, 0, 0]) == 0.0


def test_purity():
    assert purity([0, 1, 2, 2], [1, 0, 2, 2]) == 1.0
    assert purity([0, 0, 1, 1], [0, 0, 0, 0]) == 0.5


def test_length_mismatch():
    for metric in (accuracy, nmi, purity):
        with pytest.raises(RejectedInputError):
            metric([0, 1, 1], [0, 1])


def test_metrics_match_oracles():
    for _ in range(200):
        n = int(rng.integers(1, 9))
        truth = rng.integers(0, int(rng.integers(1, 6)), size=n)
        pred = rng.integers(0, int(rng.integers(1, 6)), size=n)
        assert accuracy(truth, pred) == _accuracy_oracle(truth, pred)
        assert nmi(truth, pred) == approx(_nmi_oracle(truth, pred), abs=1e-12)
        assert purity(truth, pred) == approx(_purity_oracle(truth, pred), abs=1e-12)


def test_metrics_invariant_under_relabeling():
    truth = rng.integers(0, 4, size=30)
    pred = rng.integers(0, 3, size=30)
    renamed = np.array([2, 0, 1])[pred]
    assert accuracy(truth, renamed) == accuracy(truth, pred)
    assert nmi(truth, renamed) == approx(nmi(truth, pred), abs=1e-12)
    assert purity(truth, renamed) == purity(truth, pred)


def test_evaluate_report():
    report = evaluate([0, 0, 1, 1], [1, 1, 0, 0])
    assert isinstance(report, MetricReport)
    assert tuple(report) == approx((1.0, 1.0, 1.0))
    assert json.loads(report.to_json()) == {'acc': 1.0, 'nmi': approx(1.0), 'purity': 1.0}
