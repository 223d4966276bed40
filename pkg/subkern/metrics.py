"""
External clustering metrics: accuracy under the optimal label matching, normalized mutual information and purity.
"""
import json
from collections import namedtuple

import numpy as np
from scipy.optimize import linear_sum_assignment
from sklearn.metrics import normalized_mutual_info_score
from sklearn.metrics.cluster import contingency_matrix

from .exceptions import RejectedInputError
from .spectral import LabelVector


class MetricReport(namedtuple('MetricReport', ['acc', 'nmi', 'purity'])):
    __slots__ = ()

    def to_dict(self):
        return dict(acc=float(self.acc), nmi=float(self.nmi), purity=float(self.purity))

    def to_json(self):
        return json.dumps(self.to_dict())


def _contingency(truth, pred):
    truth = LabelVector.of(truth).labels
    pred = LabelVector.of(pred).labels
    if truth.size != pred.size:
        raise RejectedInputError(f'Label vectors differ in length: {truth.size} and {pred.size}.')
    return contingency_matrix(truth, pred)


def accuracy(truth, pred):
    """
    Fraction of points labeled correctly under the best one-to-one matching of predicted to true clusters. The
    matching is found by solving the assignment problem on the contingency table.

    Parameters
    ----------
    truth: LabelVector | array_like[int]
    pred: LabelVector | array_like[int]

    Returns
    -------
    float
    """
    table = _contingency(truth, pred)
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum() / table.sum())


def nmi(truth, pred):
    """
    Mutual information normalized by the arithmetic mean of both entropies. Two single-cluster partitions score 1,
    a single cluster against several clusters scores 0.

    Returns
    -------
    float
    """
    table = _contingency(truth, pred)
    n_truth, n_pred = table.shape
    if n_truth == 1 and n_pred == 1:
        return 1.0
    if n_truth == 1 or n_pred == 1:
        return 0.0
    truth = LabelVector.of(truth).labels
    pred = LabelVector.of(pred).labels
    return float(normalized_mutual_info_score(truth, pred, average_method='arithmetic'))


def purity(truth, pred):
    """
    Fraction of points that belong to the majority true class of their predicted cluster.

    Returns
    -------
    float
    """
    table = _contingency(truth, pred)
    return float(table.max(axis=0).sum() / table.sum())


def evaluate(truth, pred):
    """
    Computes all metrics at once.

    Returns
    -------
    MetricReport
    """
    return MetricReport(acc=accuracy(truth, pred), nmi=nmi(truth, pred), purity=purity(truth, pred))
