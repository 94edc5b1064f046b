"""Pure-Python fallback implementations of the hot kernels.

Semantics must match ``_fast`` exactly: both operate on integer token ids
and precomputed distance matrices, so results are bit-identical across
backends.
"""

from __future__ import annotations

import numpy as np


def lcs_length(a, b) -> int:
    """Length of the longest common subsequence of two int sequences."""
    a = np.asarray(a, dtype=np.int32)
    b = np.asarray(b, dtype=np.int32)
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return 0
    # Two-row DP; iterate the shorter sequence in the inner loop.
    if m > n:
        a, b = b, a
        n, m = m, n
    prev = [0] * (m + 1)
    cur = [0] * (m + 1)
    a_list = a.tolist()
    b_list = b.tolist()
    for i in range(1, n + 1):
        ai = a_list[i - 1]
        for j in range(1, m + 1):
            if ai == b_list[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                pj = prev[j]
                cj = cur[j - 1]
                cur[j] = pj if pj >= cj else cj
        prev, cur = cur, prev
    return prev[m]


def dbscan_labels(dist: np.ndarray, eps: float, min_pts: int) -> np.ndarray:
    """DBSCAN cluster labels from a precomputed distance matrix.

    Noise points get label -1. Cluster ids are assigned in order of the
    first core point encountered scanning index 0..n-1, matching the
    classic algorithm (and scikit-learn's numbering).
    """
    dist = np.ascontiguousarray(dist, dtype=np.float64)
    n = dist.shape[0]
    if dist.shape != (n, n):
        raise ValueError("distance matrix must be square")
    within = dist <= eps
    core = within.sum(axis=1) >= min_pts
    labels = np.full(n, -1, dtype=np.int32)
    cluster = 0
    for i in range(n):
        if labels[i] != -1 or not core[i]:
            continue
        labels[i] = cluster
        stack = [i]
        while stack:
            p = stack.pop()
            if not core[p]:
                continue
            for q in np.nonzero(within[p])[0]:
                if labels[q] == -1:
                    labels[q] = cluster
                    stack.append(int(q))
        cluster += 1
    return labels
