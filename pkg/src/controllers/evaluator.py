#!/usr/bin/env python3
"""Top-N ranking metrics and cost-sensitive classification metrics"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..models.costs import CostModel, SumWeights
from ..models.errors import UndefinedMetricError
from ..models.matrices import DenseMatrix, ObservationMatrix, check_same_shape


@dataclass(frozen=True)
class RankedList:
    """Candidate items for one user, best first; ties resolved by ascending item index"""
    user: int
    items: np.ndarray
    scores: np.ndarray


@dataclass(frozen=True)
class MetricValues:
    precision: float
    recall: float
    f1: float
    ndcg: float


@dataclass
class MetricsReport:
    """Per-cutoff metrics averaged over users with a non-empty test set"""
    by_n: Dict[int, MetricValues] = field(default_factory=dict)
    n_users: int = 0

    def as_rows(self) -> List[Tuple[int, MetricValues]]:
        return sorted(self.by_n.items())


def rank_items(user: int, scores: np.ndarray, exclude: Iterable[int],
               limit: Optional[int] = None) -> RankedList:
    """Order items by descending score, dropping the user's training positives"""
    scores = np.asarray(scores, dtype=np.float64)
    candidates = np.ones(len(scores), dtype=bool)
    candidates[np.fromiter(exclude, dtype=np.int64)] = False
    items = np.flatnonzero(candidates)
    # stable sort on the negated scores keeps ascending item order inside ties
    order = np.argsort(-scores[items], kind='stable')
    if limit is not None:
        order = order[:limit]
    ranked = items[order]
    return RankedList(user=user, items=ranked, scores=scores[ranked])


def precision_recall_at_n(ranked: RankedList, relevant: FrozenSet[int], n: int) -> Tuple[float, float]:
    if n < 1:
        raise ValueError(f"cutoff must be positive, got {n}")
    if not relevant:
        raise UndefinedMetricError(f"user {ranked.user} has no relevant items")
    hits = sum(1 for item in ranked.items[:n] if int(item) in relevant)
    return hits / n, hits / len(relevant)


def f1_at_n(p: float, r: float) -> float:
    if p + r == 0:
        return 0.0
    return 2.0 * p * r / (p + r)


def _dcg(gains: np.ndarray) -> float:
    ranks = np.arange(1, len(gains) + 1)
    return float(np.dot(gains, 1.0 / np.log2(ranks + 1)))


def ndcg_at_n(ranked: RankedList, relevant: FrozenSet[int], n: int) -> float:
    """Binary-gain NDCG with a log2(i + 1) discount; the ideal list has min(n, |relevant|) hits"""
    if n < 1:
        raise ValueError(f"cutoff must be positive, got {n}")
    if not relevant:
        raise UndefinedMetricError(f"user {ranked.user} has no relevant items")
    gains = np.array([1.0 if int(item) in relevant else 0.0 for item in ranked.items[:n]])
    ideal = _dcg(np.ones(min(n, len(relevant))))
    return _dcg(gains) / ideal


def evaluate_scores(scores: DenseMatrix, train: ObservationMatrix,
                    test: Mapping[int, FrozenSet[int]], ns: Sequence[int]) -> MetricsReport:
    """Rank every user's unseen items by score and average the top-N metrics

    F1 is reported as the harmonic mean of the user-averaged precision and recall.
    """
    check_same_shape(scores, train)
    ns = sorted(set(ns))
    limit = max(ns)
    sums = {n: np.zeros(3) for n in ns}   # precision, recall, ndcg
    users = 0

    for user in sorted(test):
        relevant = test[user]
        if not relevant:
            continue
        ranked = rank_items(user, scores[:, user], train.column_items(user), limit)
        for n in ns:
            p, r = precision_recall_at_n(ranked, relevant, n)
            sums[n] += (p, r, ndcg_at_n(ranked, relevant, n))
        users += 1

    if users == 0:
        raise UndefinedMetricError("no user has a non-empty test set")

    report = MetricsReport(n_users=users)
    for n in ns:
        precision, recall, ndcg = sums[n] / users
        report.by_n[n] = MetricValues(precision=float(precision), recall=float(recall),
                                      f1=f1_at_n(precision, recall), ndcg=float(ndcg))
    return report


def confusion_counts(predictions: DenseMatrix, truth: ObservationMatrix, q: float) -> Dict[str, int]:
    """True/false positive/negative counts when classifying by X_ij > q"""
    check_same_shape(predictions, truth)
    predicted = np.asarray(predictions) > q
    actual = truth.dense() != 0
    return {
        'tp': int(np.sum(predicted & actual)),
        'fn': int(np.sum(~predicted & actual)),
        'fp': int(np.sum(predicted & ~actual)),
        'tn': int(np.sum(~predicted & ~actual)),
    }


def weighted_sum_metric(predictions: DenseMatrix, truth: ObservationMatrix, q: float,
                        w: SumWeights) -> float:
    """mu_p * recall + mu_n * specificity"""
    counts = confusion_counts(predictions, truth, q)
    t_p = counts['tp'] + counts['fn']
    t_n = counts['tn'] + counts['fp']
    if t_p == 0 or t_n == 0:
        raise UndefinedMetricError(f"weighted sum needs both classes, got T_p={t_p}, T_n={t_n}")
    recall = (t_p - counts['fn']) / t_p
    specificity = (t_n - counts['fp']) / t_n
    return w.mu_p * recall + w.mu_n * specificity


def weighted_cost_metric(predictions: DenseMatrix, truth: ObservationMatrix, q: float,
                         cm: CostModel) -> float:
    """c_p * false negatives + c_n * false positives"""
    counts = confusion_counts(predictions, truth, q)
    return cm.c_p * counts['fn'] + cm.c_n * counts['fp']
