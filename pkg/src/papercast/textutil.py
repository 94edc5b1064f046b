"""Shared text helpers: one tokenizer definition used everywhere a word
count or token sequence is compared (summaries, narration budgets, the
overlap metric)."""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_SENTENCE_RE = re.compile(r"(?<=[.!?])\s+")


def tokenize(text: str) -> list[str]:
    """Lowercased maximal alphanumeric runs."""
    return _TOKEN_RE.findall(text.lower())


def word_count(text: str) -> int:
    return len(tokenize(text))


def sentences(text: str) -> list[str]:
    return [part.strip() for part in _SENTENCE_RE.split(text.strip()) if part.strip()]
