"""Live HTTP providers (OpenAI-style endpoints) with bounded retries.

Endpoint configuration comes from ``GATEWAY_*`` environment variables;
HTTP is the only transport assumption. Transient failures (429/5xx and
transport errors) are retried with exponential backoff, then surfaced as
``ProviderError`` / ``RateLimited`` with provider diagnostics attached.
"""

from __future__ import annotations

import base64
import json
import os
import re
import time

import httpx

from ..errors import ProviderError, RateLimited
from .prompts import SYSTEM_PREAMBLE, render_prompt
from .request import ModelRequest, ModelResponse

MAX_ATTEMPTS = 3
BACKOFF_BASE_S = 0.5


def _parse_json_content(text: str):
    """Extract a JSON object from a chat completion (handles code fences)."""
    fenced = re.search(r"```(?:json)?\s*(\{.*?\})\s*```", text, re.S)
    candidate = fenced.group(1) if fenced else text.strip()
    try:
        return json.loads(candidate)
    except json.JSONDecodeError:
        brace = re.search(r"\{.*\}", text, re.S)
        if brace:
            try:
                return json.loads(brace.group(0))
            except json.JSONDecodeError:
                pass
    return {"text": text}


class HttpProvider:
    """OpenAI-compatible provider for chat, embeddings, TTS and ASR."""

    name = "http"

    def __init__(self, base_url: str, api_key: str = "", models: dict | None = None,
                 client: httpx.Client | None = None, sleep=time.sleep):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.models = models or {}
        self.client = client or httpx.Client(timeout=120.0)
        self.sleep = sleep

    @classmethod
    def from_env(cls, **kwargs) -> "HttpProvider":
        base_url = os.environ.get("GATEWAY_BASE_URL", "")
        if not base_url:
            raise ProviderError("GATEWAY_BASE_URL is not set; cannot build a live provider")
        models = {
            "chat": os.environ.get("GATEWAY_CHAT_MODEL", "gpt-4o"),
            "vlm_chat": os.environ.get("GATEWAY_VLM_MODEL", os.environ.get("GATEWAY_CHAT_MODEL", "gpt-4o")),
            "embed_text": os.environ.get("GATEWAY_EMBED_MODEL", "text-embedding-3-small"),
            "embed_image": os.environ.get("GATEWAY_IMAGE_EMBED_MODEL", "clip-vit-b-32"),
            "tts": os.environ.get("GATEWAY_TTS_MODEL", "tts-1"),
            "asr": os.environ.get("GATEWAY_ASR_MODEL", "whisper-1"),
            "ocr": os.environ.get("GATEWAY_OCR_MODEL", "ocr-default"),
        }
        return cls(base_url, api_key=os.environ.get("GATEWAY_API_KEY", ""), models=models, **kwargs)

    def supports(self, capability: str) -> bool:
        return capability in ("chat", "vlm_chat", "embed_text", "embed_image", "tts", "asr", "ocr")

    # --- transport -------------------------------------------------------

    def _headers(self) -> dict:
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    def _post(self, path: str, *, json_body=None, files=None, data=None) -> httpx.Response:
        url = f"{self.base_url}{path}"
        last_error: Exception | None = None
        for attempt in range(MAX_ATTEMPTS):
            try:
                resp = self.client.post(url, json=json_body, files=files, data=data, headers=self._headers())
            except httpx.HTTPError as exc:
                last_error = exc
                self.sleep(BACKOFF_BASE_S * 2**attempt)
                continue
            if resp.status_code == 429:
                retry_after = resp.headers.get("retry-after")
                if attempt == MAX_ATTEMPTS - 1:
                    raise RateLimited(
                        f"rate limited by {url}",
                        retry_after_s=float(retry_after) if retry_after else None,
                    )
                self.sleep(float(retry_after) if retry_after else BACKOFF_BASE_S * 2**attempt)
                continue
            if resp.status_code >= 500:
                last_error = ProviderError(f"{url} returned {resp.status_code}: {resp.text[:500]}")
                self.sleep(BACKOFF_BASE_S * 2**attempt)
                continue
            if resp.status_code >= 400:
                raise ProviderError(f"{url} returned {resp.status_code}: {resp.text[:500]}")
            return resp
        raise ProviderError(f"gave up after {MAX_ATTEMPTS} attempts: {last_error}")

    # --- capabilities ----------------------------------------------------

    def call(self, request: ModelRequest) -> ModelResponse:
        handler = getattr(self, f"_cap_{request.capability}")
        return handler(request)

    def _chat_messages(self, request: ModelRequest) -> list[dict]:
        payload = dict(request.payload)
        prompt = render_prompt(payload.get("task", ""), dict(payload.get("inputs", {})))
        if request.capability == "vlm_chat" and request.blobs:
            content = [{"type": "text", "text": prompt}]
            for _name, blob in sorted(request.blobs.items()):
                b64 = base64.b64encode(blob).decode("ascii")
                content.append({"type": "image_url", "image_url": {"url": f"data:image/png;base64,{b64}"}})
            user_message = {"role": "user", "content": content}
        else:
            user_message = {"role": "user", "content": prompt}
        return [{"role": "system", "content": SYSTEM_PREAMBLE}, user_message]

    def _cap_chat(self, request: ModelRequest) -> ModelResponse:
        params = dict(request.payload.get("params", {}))
        body = {
            "model": self.models.get(request.capability, "gpt-4o"),
            "messages": self._chat_messages(request),
            "temperature": params.get("temperature", 0),
        }
        if params.get("seed") is not None:
            body["seed"] = params.get("seed")
        resp = self._post("/chat/completions", json_body=body)
        text = resp.json()["choices"][0]["message"]["content"]
        return ModelResponse(content=_parse_json_content(text))

    _cap_vlm_chat = _cap_chat

    def _cap_embed_text(self, request: ModelRequest) -> ModelResponse:
        body = {"model": self.models.get("embed_text"), "input": request.payload.get("text", "")}
        resp = self._post("/embeddings", json_body=body)
        return ModelResponse(content={"embedding": resp.json()["data"][0]["embedding"]})

    def _cap_embed_image(self, request: ModelRequest) -> ModelResponse:
        blob = request.blobs.get("image", b"")
        body = {
            "model": self.models.get("embed_image"),
            "input": f"data:image/png;base64,{base64.b64encode(blob).decode('ascii')}",
        }
        resp = self._post("/embeddings", json_body=body)
        return ModelResponse(content={"embedding": resp.json()["data"][0]["embedding"]})

    def _cap_tts(self, request: ModelRequest) -> ModelResponse:
        body = {
            "model": self.models.get("tts"),
            "input": request.payload.get("text", ""),
            "voice": os.environ.get("GATEWAY_TTS_VOICE", "alloy"),
            "response_format": "wav",
        }
        resp = self._post("/audio/speech", json_body=body)
        return ModelResponse(content={}, blob=resp.content)

    def _cap_asr(self, request: ModelRequest) -> ModelResponse:
        blob = request.blobs.get("audio", b"")
        files = {"file": ("audio.wav", blob, "audio/wav")}
        data = {"model": self.models.get("asr"), "response_format": "verbose_json"}
        resp = self._post("/audio/transcriptions", files=files, data=data)
        doc = resp.json()
        segments = [
            {"start_s": seg["start"], "end_s": seg["end"], "text": seg["text"].strip()}
            for seg in doc.get("segments", [])
        ]
        return ModelResponse(content={"segments": segments})

    def _cap_ocr(self, request: ModelRequest) -> ModelResponse:
        blob = request.blobs.get("image", b"")
        files = {"file": ("image.png", blob, "image/png")}
        resp = self._post("/ocr", files=files, data={"model": self.models.get("ocr")})
        return ModelResponse(content={"text": resp.json().get("text", "")})
