"""Request/response envelopes and stable cache keys for model calls."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Mapping

from ..jsonio import canonical_compact

CAPABILITIES = ("chat", "vlm_chat", "embed_text", "embed_image", "tts", "asr", "ocr")


def blob_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class ModelRequest:
    """One logical model call.

    ``payload`` holds JSON-able content only; raw bytes go in ``blobs`` and
    are replaced by their digests during canonicalization, so two requests
    with equal logical content always map to the same cache key.
    """

    capability: str
    payload: Mapping[str, Any]
    model_id: str = "default"
    blobs: Mapping[str, bytes] = field(default_factory=dict)

    def __post_init__(self):
        if self.capability not in CAPABILITIES:
            raise ValueError(f"unknown capability {self.capability!r}")

    def canonical(self) -> str:
        doc = {
            "capability": self.capability,
            "model_id": self.model_id,
            "payload": self.payload,
            "blobs": {name: blob_digest(data) for name, data in sorted(self.blobs.items())},
        }
        return canonical_compact(doc)

    @property
    def key(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()


@dataclass
class ModelResponse:
    """Provider output: JSON-able ``content`` plus an optional binary blob."""

    content: Any = None
    blob: bytes | None = None

    def to_envelope(self) -> dict:
        return {
            "content": self.content,
            "blob": blob_digest(self.blob) if self.blob is not None else None,
        }
