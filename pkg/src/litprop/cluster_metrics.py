"""Cluster-overlap scoring for quote-speaker attributions.

Gold and predicted clusterings partition the same set of quote ids, one
cluster per speaker. Three standard metrics are computed (MUC link-based,
B-cubed per-item, CEAF with the phi4 similarity and an optimal one-to-one
cluster alignment) plus their average.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import UndefinedScoreWarning


@dataclass(frozen=True)
class Clustering:
    """Disjoint clusters whose union is the scored universe."""

    clusters: tuple[frozenset, ...]

    def __post_init__(self):
        seen: set = set()
        for cluster in self.clusters:
            if not cluster:
                raise ValueError("empty clusters are not allowed")
            overlap = seen & cluster
            if overlap:
                raise ValueError(f"items in more than one cluster: {sorted(overlap)!r}")
            seen |= cluster

    @classmethod
    def from_clusters(cls, clusters: Iterable[Iterable[Hashable]]) -> "Clustering":
        return cls(tuple(frozenset(c) for c in clusters))

    @classmethod
    def from_assignments(cls, assignment: Mapping[Hashable, Hashable]) -> "Clustering":
        by_label: dict = {}
        for item, label in assignment.items():
            by_label.setdefault(label, set()).add(item)
        return cls(tuple(frozenset(v) for _, v in sorted(by_label.items(), key=lambda kv: str(kv[0]))))

    def items(self) -> frozenset:
        out: set = set()
        for cluster in self.clusters:
            out |= cluster
        return frozenset(out)

    def label_of(self) -> dict:
        return {item: i for i, cluster in enumerate(self.clusters) for item in cluster}


@dataclass(frozen=True)
class ClusterScore:
    muc: tuple[float, float, float]  # (P, R, F)
    b3: tuple[float, float, float]
    ceaf: tuple[float, float, float]

    @property
    def muc_f(self) -> float:
        return self.muc[2]

    @property
    def b3_f(self) -> float:
        return self.b3[2]

    @property
    def ceaf_f(self) -> float:
        return self.ceaf[2]

    @property
    def average_f(self) -> float:
        return (self.muc_f + self.b3_f + self.ceaf_f) / 3.0


def _check_universe(gold: Clustering, pred: Clustering) -> None:
    if gold.items() != pred.items():
        raise ValueError("gold and predicted clusterings cover different items")


def _f_score(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _muc_side(clusters: Sequence[frozenset], other_label: Mapping) -> tuple[int, int]:
    num = den = 0
    for cluster in clusters:
        partitions = {other_label[item] for item in cluster}
        num += len(cluster) - len(partitions)
        den += len(cluster) - 1
    return num, den


def muc(gold: Clustering, pred: Clustering) -> tuple[float, float, float]:
    """Link-based metric: recall counts merges needed to rebuild gold clusters.

    When every cluster on a side is a singleton its denominator is zero;
    the score is reported as 0 with a warning.
    """
    _check_universe(gold, pred)
    r_num, r_den = _muc_side(gold.clusters, pred.label_of())
    p_num, p_den = _muc_side(pred.clusters, gold.label_of())
    if r_den == 0 or p_den == 0:
        warnings.warn("MUC undefined for all-singleton clusterings; reporting 0", UndefinedScoreWarning)
    recall = r_num / r_den if r_den else 0.0
    precision = p_num / p_den if p_den else 0.0
    return precision, recall, _f_score(precision, recall)


def b_cubed(gold: Clustering, pred: Clustering) -> tuple[float, float, float]:
    """Per-item overlap metric averaged over all scored items."""
    _check_universe(gold, pred)
    items = gold.items()
    if not items:
        return 0.0, 0.0, 0.0
    gold_cluster = {item: c for c in gold.clusters for item in c}
    pred_cluster = {item: c for c in pred.clusters for item in c}
    recall = sum(len(gold_cluster[i] & pred_cluster[i]) / len(gold_cluster[i]) for i in items) / len(items)
    precision = sum(len(gold_cluster[i] & pred_cluster[i]) / len(pred_cluster[i]) for i in items) / len(items)
    return precision, recall, _f_score(precision, recall)


def phi4(g: frozenset, p: frozenset) -> float:
    return 2 * len(g & p) / (len(g) + len(p))


def ceaf_phi4(gold: Clustering, pred: Clustering) -> tuple[float, float, float]:
    """Entity-based CEAF under the optimal one-to-one cluster alignment.

    The alignment maximizing total phi4 similarity is found exactly with
    the Hungarian method.
    """
    _check_universe(gold, pred)
    if not gold.clusters or not pred.clusters:
        return 0.0, 0.0, 0.0
    sim = np.zeros((len(gold.clusters), len(pred.clusters)))
    for i, g in enumerate(gold.clusters):
        for j, p in enumerate(pred.clusters):
            sim[i, j] = phi4(g, p)
    rows, cols = linear_sum_assignment(-sim)
    total = float(sim[rows, cols].sum())
    recall = total / len(gold.clusters)
    precision = total / len(pred.clusters)
    return precision, recall, _f_score(precision, recall)


def score_clusterings(gold: Clustering, pred: Clustering) -> ClusterScore:
    return ClusterScore(muc=muc(gold, pred), b3=b_cubed(gold, pred), ceaf=ceaf_phi4(gold, pred))
