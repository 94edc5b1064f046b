# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels (LCS length, DBSCAN labels).

Kept semantically identical to ``pure.py``: integer DP and integer label
assignment over a caller-supplied distance matrix, so the two backends
agree bit-for-bit.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def lcs_length(a, b):
    """Length of the longest common subsequence of two int sequences."""
    cdef cnp.ndarray[cnp.int32_t, ndim=1] aa = np.ascontiguousarray(a, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] bb = np.ascontiguousarray(b, dtype=np.int32)
    cdef Py_ssize_t n = aa.shape[0]
    cdef Py_ssize_t m = bb.shape[0]
    if n == 0 or m == 0:
        return 0
    if m > n:
        aa, bb = bb, aa
        n, m = m, n
    cdef cnp.ndarray[cnp.uint32_t, ndim=1] prev = np.zeros(m + 1, dtype=np.uint32)
    cdef cnp.ndarray[cnp.uint32_t, ndim=1] cur = np.zeros(m + 1, dtype=np.uint32)
    cdef cnp.uint32_t[:] pv = prev
    cdef cnp.uint32_t[:] cv = cur
    cdef cnp.int32_t[:] av = aa
    cdef cnp.int32_t[:] bv = bb
    cdef Py_ssize_t i, j
    cdef cnp.int32_t ai
    cdef cnp.uint32_t pj, cj
    cdef cnp.uint32_t[:] tmp
    for i in range(1, n + 1):
        ai = av[i - 1]
        for j in range(1, m + 1):
            if ai == bv[j - 1]:
                cv[j] = pv[j - 1] + 1
            else:
                pj = pv[j]
                cj = cv[j - 1]
                cv[j] = pj if pj >= cj else cj
        tmp = pv
        pv = cv
        cv = tmp
    return int(pv[m])


def dbscan_labels(dist, double eps, int min_pts):
    """DBSCAN cluster labels from a precomputed distance matrix."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] d = np.ascontiguousarray(dist, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0]
    if d.shape[1] != n:
        raise ValueError("distance matrix must be square")
    cdef cnp.ndarray[cnp.int32_t, ndim=1] labels = np.full(n, -1, dtype=np.int32)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] core = np.zeros(n, dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] stack = np.empty(n, dtype=np.int64)
    cdef cnp.float64_t[:, :] dv = d
    cdef cnp.int32_t[:] lv = labels
    cdef cnp.uint8_t[:] corev = core
    cdef cnp.int64_t[:] sv = stack
    cdef Py_ssize_t i, j, p, top, cnt
    cdef int cluster = 0
    for i in range(n):
        cnt = 0
        for j in range(n):
            if dv[i, j] <= eps:
                cnt += 1
        if cnt >= min_pts:
            corev[i] = 1
    for i in range(n):
        if lv[i] != -1 or corev[i] == 0:
            continue
        lv[i] = cluster
        top = 0
        sv[top] = i
        top += 1
        while top > 0:
            top -= 1
            p = sv[top]
            if corev[p] == 0:
                continue
            for j in range(n):
                if dv[p, j] <= eps and lv[j] == -1:
                    lv[j] = cluster
                    sv[top] = j
                    top += 1
        cluster += 1
    return labels
