"""The gateway: one entry point for every external model call.

Modes:
  live    -> provider call with bounded retries (provider-level)
  record  -> live call, response persisted to the fixture store
  replay  -> fixture lookup only; a miss raises ReplayMiss and never
             touches the network

Temperature and seed ride inside the request payload, so they are part
of the cache key; the pipeline pins temperature 0 everywhere.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable

import numpy as np

import jsonschema

from ..errors import CapabilityUnconfigured, GatewayFailure, ReplayMiss, SchemaViolation
from .offline import OfflineProvider
from .request import CAPABILITIES, ModelRequest, ModelResponse
from .store import FixtureStore

MODES = ("live", "record", "replay")


class Gateway:
    def __init__(self, provider=None, mode: str = "replay", store: FixtureStore | str | Path | None = None,
                 model_id: str = "default"):
        if mode not in MODES:
            raise ValueError(f"unknown gateway mode {mode!r}")
        if mode in ("live", "record") and provider is None:
            raise CapabilityUnconfigured(f"mode {mode!r} requires a provider")
        if mode in ("record", "replay") and store is None:
            raise CapabilityUnconfigured(f"mode {mode!r} requires a fixture store")
        self.provider = provider
        self.mode = mode
        self.store = FixtureStore(store) if isinstance(store, (str, Path)) else store
        self.model_id = model_id

    # --- configuration checks -------------------------------------------

    def require(self, capabilities: Iterable[str]) -> None:
        """Fail fast if any needed capability is unusable in this mode."""
        for capability in capabilities:
            if capability not in CAPABILITIES:
                raise CapabilityUnconfigured(f"unknown capability {capability!r}")
            if self.mode == "replay":
                continue  # replay needs only the store, checked in __init__
            if not self.provider.supports(capability):
                raise CapabilityUnconfigured(
                    f"provider {getattr(self.provider, 'name', '?')} does not support {capability!r}"
                )

    # --- invocation ------------------------------------------------------

    def invoke(self, request: ModelRequest) -> ModelResponse:
        if self.mode == "replay":
            response = self.store.get(request.key)
            if response is None:
                raise ReplayMiss(
                    f"no fixture for {request.capability} request {request.key[:12]}... "
                    f"(task={request.payload.get('task')!r})"
                )
            return response
        if self.mode == "record":
            cached = self.store.get(request.key)
            if cached is not None:
                return cached
            response = self.provider.call(request)
            self.store.put(request, response)
            return response
        return self.provider.call(request)

    # --- typed helpers ----------------------------------------------------

    def _request(self, capability: str, payload: dict, blobs: dict | None = None) -> ModelRequest:
        return ModelRequest(capability=capability, payload=payload, model_id=self.model_id,
                            blobs=blobs or {})

    def chat_json(self, task: str, inputs: dict, schema: dict | None = None,
                  params: dict | None = None, capability: str = "chat",
                  blobs: dict | None = None) -> dict:
        """Structured chat call; schema violations get one repair re-prompt."""
        base_params = {"temperature": 0, "seed": 0}
        if params:
            base_params.update(params)
        request = self._request(capability, {"task": task, "inputs": inputs, "params": base_params}, blobs)
        response = self.invoke(request)
        content = response.content
        if schema is not None:
            try:
                jsonschema.validate(content, schema)
                return content
            except jsonschema.ValidationError as exc:
                repair_params = dict(base_params)
                repair_params["repair"] = 1
                repair_params["validation_error"] = str(exc).splitlines()[0][:200]
                retry = self._request(
                    capability, {"task": task, "inputs": inputs, "params": repair_params}, blobs
                )
                content = self.invoke(retry).content
                try:
                    jsonschema.validate(content, schema)
                except jsonschema.ValidationError as exc2:
                    raise SchemaViolation(
                        f"task {task!r} output failed schema after repair: {exc2.message}"
                    ) from exc2
        return content

    def embed_text(self, text: str) -> np.ndarray:
        content = self.invoke(self._request("embed_text", {"text": text})).content
        return np.asarray(content["embedding"], dtype=np.float64)

    def embed_image(self, image_bytes: bytes) -> np.ndarray:
        content = self.invoke(self._request("embed_image", {}, {"image": image_bytes})).content
        return np.asarray(content["embedding"], dtype=np.float64)

    def tts(self, text: str, sample_rate: int = 16000) -> tuple[dict, bytes]:
        """Returns (metadata content, WAV bytes); content may carry duration_s."""
        response = self.invoke(self._request("tts", {"text": text, "sample_rate": sample_rate}))
        if response.blob is None:
            raise GatewayFailure("tts provider returned no audio payload")
        return response.content, response.blob

    def asr(self, audio_bytes: bytes) -> list[dict]:
        response = self.invoke(self._request("asr", {}, {"audio": audio_bytes}))
        return list(response.content.get("segments", []))

    def ocr(self, image_bytes: bytes) -> str:
        response = self.invoke(self._request("ocr", {}, {"image": image_bytes}))
        return response.content.get("text", "")

    def provenance(self) -> dict:
        return {
            "mode": self.mode,
            "provider": getattr(self.provider, "name", None) if self.provider else None,
            "model_id": self.model_id,
        }


def gateway_from_env(mode: str | None = None, store: str | Path | None = None) -> Gateway:
    """Build a gateway from GATEWAY_* environment variables.

    Defaults to the offline synthetic provider unless GATEWAY_PROVIDER=http
    (which then requires GATEWAY_BASE_URL).
    """
    mode = mode or os.environ.get("GATEWAY_MODE", "live")
    provider_kind = os.environ.get("GATEWAY_PROVIDER", "offline")
    if provider_kind == "http":
        from .http_provider import HttpProvider

        provider = HttpProvider.from_env()
        model_id = os.environ.get("GATEWAY_CHAT_MODEL", "gpt-4o")
    else:
        provider = OfflineProvider()
        model_id = "offline-v1"
    store = store or os.environ.get("GATEWAY_STORE") or None
    return Gateway(provider=provider, mode=mode, store=store, model_id=model_id)
