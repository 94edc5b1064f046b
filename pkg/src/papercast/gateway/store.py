"""Content-addressed fixture store for record/replay.

One JSON envelope per request key; binary payloads live beside the
envelopes under ``blobs/``, named by their own digest. Writes are
idempotent (write-once per key), so concurrent identical recordings are
safe.
"""

from __future__ import annotations

from pathlib import Path

from ..jsonio import dump, load
from .request import ModelRequest, ModelResponse, blob_digest


class FixtureStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)

    def _envelope_path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def _blob_path(self, digest: str) -> Path:
        return self.root / "blobs" / f"{digest}.bin"

    def has(self, key: str) -> bool:
        return self._envelope_path(key).exists()

    def get(self, key: str) -> ModelResponse | None:
        path = self._envelope_path(key)
        if not path.exists():
            return None
        envelope = load(path)
        blob = None
        if envelope.get("blob"):
            blob = self._blob_path(envelope["blob"]).read_bytes()
        return ModelResponse(content=envelope.get("content"), blob=blob)

    def put(self, request: ModelRequest, response: ModelResponse) -> None:
        key = request.key
        path = self._envelope_path(key)
        if path.exists():
            return
        if response.blob is not None:
            digest = blob_digest(response.blob)
            blob_path = self._blob_path(digest)
            if not blob_path.exists():
                blob_path.parent.mkdir(parents=True, exist_ok=True)
                tmp = blob_path.with_suffix(".tmp")
                tmp.write_bytes(response.blob)
                tmp.replace(blob_path)
        envelope = {
            "capability": request.capability,
            "model_id": request.model_id,
            **response.to_envelope(),
        }
        self.root.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".json.tmp")
        dump(envelope, tmp)
        tmp.replace(path)

    def __len__(self) -> int:
        if not self.root.exists():
            return 0
        return sum(1 for _ in self.root.glob("*.json"))
