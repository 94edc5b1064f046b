"""Independent reference implementations used to cross-check the package.

Everything here is deliberately written from first principles (or delegated
to a third-party library) rather than importing the production code paths
it verifies.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.cluster import DBSCAN


def lcs_length_ref(a: list, b: list) -> int:
    """Classic O(n*m) dynamic-programming longest-common-subsequence length."""
    n, m = len(a), len(b)
    prev = [0] * (m + 1)
    for i in range(1, n + 1):
        cur = [0] * (m + 1)
        for j in range(1, m + 1):
            if a[i - 1] == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = max(prev[j], cur[j - 1])
        prev = cur
    return prev[m]


def rouge_l_f_ref(candidate: list[str], reference: list[str]) -> float:
    """LCS-based F1 computed straight from the textbook definition."""
    if not candidate or not reference:
        return 0.0
    lcs = lcs_length_ref(candidate, reference)
    if lcs == 0:
        return 0.0
    precision = lcs / len(candidate)
    recall = lcs / len(reference)
    return 2.0 * precision * recall / (precision + recall)


def dbscan_labels_ref(distances: np.ndarray, eps: float, min_pts: int) -> np.ndarray:
    """scikit-learn DBSCAN on a precomputed distance matrix (noise = -1)."""
    model = DBSCAN(eps=eps, min_samples=min_pts, metric="precomputed")
    return model.fit_predict(distances)


def same_partition(labels_a, labels_b) -> bool:
    """True when two labelings induce the same clusters and the same noise set.

    Cluster ids are arbitrary, so compare partitions rather than raw labels.
    Noise (-1) is special: noise points are singletons, not a shared cluster.
    """
    a = list(labels_a)
    b = list(labels_b)
    if len(a) != len(b):
        return False
    if [x == -1 for x in a] != [x == -1 for x in b]:
        return False

    def groups(labels):
        by_label: dict[int, frozenset[int]] = {}
        for idx, label in enumerate(labels):
            if label == -1:
                continue
            by_label.setdefault(label, set()).add(idx)  # type: ignore[arg-type]
        return {frozenset(members) for members in by_label.values()}

    return groups(a) == groups(b)


def slide_count_ref(summary_words: int, asset_costs: list[float]) -> int:
    """Minimal k with k >= text load + visual load, found by linear search."""
    load = summary_words / 120.0 + math.fsum(asset_costs)
    k = 1
    while k < load - 1e-12:
        k += 1
    return k


def visual_cost_ref(aspect_ratio: float) -> float:
    """Display-area share granted by the placement rules, clamped to bounds."""
    if aspect_ratio >= 1.6:
        area = 0.90 * 0.45
    elif aspect_ratio >= 0.8:
        area = 0.45 * 0.75
    else:
        area = 0.30 * 0.75
    return min(0.6, max(0.25, area))
