"""Longest-common-subsequence overlap score between two texts."""

from __future__ import annotations

import numpy as np

from ..kernels import lcs_length
from ..textutil import tokenize


def _token_ids(candidate: list[str], reference: list[str]) -> tuple[np.ndarray, np.ndarray]:
    vocab: dict[str, int] = {}
    def ids(tokens: list[str]) -> np.ndarray:
        out = np.empty(len(tokens), dtype=np.int32)
        for i, tok in enumerate(tokens):
            out[i] = vocab.setdefault(tok, len(vocab))
        return out
    return ids(candidate), ids(reference)


def rouge_l(candidate: str, reference: str) -> float:
    """F1 over the token LCS; 0.0 when either side has no tokens."""
    cand = tokenize(candidate)
    ref = tokenize(reference)
    if not cand or not ref:
        return 0.0
    a, b = _token_ids(cand, ref)
    lcs = lcs_length(a, b)
    if lcs == 0:
        return 0.0
    precision = lcs / len(cand)
    recall = lcs / len(ref)
    return 2.0 * precision * recall / (precision + recall)
