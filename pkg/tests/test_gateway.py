"""Gateway modes, fixture store round-trips, and schema enforcement."""

from __future__ import annotations

import numpy as np
import pytest

from papercast.errors import CapabilityUnconfigured, ReplayMiss, SchemaViolation
from papercast.gateway import Gateway, OfflineProvider, gateway_from_env
from papercast.gateway.request import ModelRequest, ModelResponse

SIMPLE_SCHEMA = {
    "type": "object",
    "required": ["value"],
    "properties": {"value": {"type": "integer"}},
    "additionalProperties": False,
}


class ScriptedProvider:
    """Returns canned responses in order; records the requests it saw."""

    name = "scripted"

    def __init__(self, responses):
        self.responses = list(responses)
        self.requests = []

    def supports(self, capability):
        return True

    def call(self, request):
        self.requests.append(request)
        return self.responses.pop(0)


# --- construction ---------------------------------------------------------


def test_live_mode_requires_provider():
    with pytest.raises(CapabilityUnconfigured):
        Gateway(provider=None, mode="live")


@pytest.mark.parametrize("mode", ["record", "replay"])
def test_store_modes_require_store(mode):
    with pytest.raises(CapabilityUnconfigured):
        Gateway(provider=OfflineProvider(), mode=mode, store=None)


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        Gateway(provider=OfflineProvider(), mode="cached")


def test_provenance_reports_mode_and_model(live_gateway):
    info = live_gateway.provenance()
    assert info == {"mode": "live", "provider": "offline", "model_id": "offline-v1"}


# --- record / replay ------------------------------------------------------


def test_record_then_replay_round_trip(tmp_path):
    store = tmp_path / "store"
    recorder = Gateway(provider=OfflineProvider(), mode="record", store=store,
                       model_id="offline-v1")
    recorded = recorder.embed_text("compaction windows")
    assert any(store.iterdir()), "record mode must persist fixtures"

    replayer = Gateway(provider=None, mode="replay", store=store,
                       model_id="offline-v1")
    replayed = replayer.embed_text("compaction windows")
    np.testing.assert_array_equal(recorded, replayed)


def test_replay_miss_raises(tmp_path):
    gateway = Gateway(provider=None, mode="replay", store=tmp_path / "empty",
                      model_id="offline-v1")
    with pytest.raises(ReplayMiss):
        gateway.embed_text("never recorded")


def test_replay_never_touches_provider(tmp_path):
    store = tmp_path / "store"
    recorder = Gateway(provider=OfflineProvider(), mode="record", store=store,
                       model_id="offline-v1")
    recorder.embed_text("one call")

    provider = ScriptedProvider([])  # would raise if ever called
    replayer = Gateway(provider=provider, mode="replay", store=store,
                       model_id="offline-v1")
    replayer.embed_text("one call")
    assert provider.requests == []


def test_record_reuses_existing_fixture(tmp_path):
    store = tmp_path / "store"
    provider = ScriptedProvider([ModelResponse(content={"text": "cached"})])
    gateway = Gateway(provider=provider, mode="record", store=store)
    first = gateway.chat_json(task="demo", inputs={"q": 1})
    second = gateway.chat_json(task="demo", inputs={"q": 1})
    assert first == second
    assert len(provider.requests) == 1, "second identical call must hit the store"


def test_cache_key_separates_blobs_and_payload():
    base = ModelRequest(capability="vlm_chat", payload={"task": "t"},
                        blobs={"image": b"aaa"})
    other = ModelRequest(capability="vlm_chat", payload={"task": "t"},
                         blobs={"image": b"bbb"})
    assert base.key != other.key
    assert base.key == ModelRequest(capability="vlm_chat", payload={"task": "t"},
                                    blobs={"image": b"aaa"}).key


# --- schema validation and repair -----------------------------------------


def test_chat_json_validates_and_returns_content():
    provider = ScriptedProvider([ModelResponse(content={"value": 3})])
    gateway = Gateway(provider=provider, mode="live")
    assert gateway.chat_json(task="t", inputs={}, schema=SIMPLE_SCHEMA) == {"value": 3}


def test_chat_json_repairs_once_after_invalid_content():
    provider = ScriptedProvider([
        ModelResponse(content={"value": "not an int"}),
        ModelResponse(content={"value": 7}),
    ])
    gateway = Gateway(provider=provider, mode="live")
    content = gateway.chat_json(task="t", inputs={}, schema=SIMPLE_SCHEMA)
    assert content == {"value": 7}
    assert len(provider.requests) == 2
    repair_params = provider.requests[1].payload.get("params", {})
    assert repair_params.get("repair") == 1
    assert "validation_error" in repair_params


def test_chat_json_raises_after_second_invalid_content():
    provider = ScriptedProvider([
        ModelResponse(content={"value": "bad"}),
        ModelResponse(content={"wrong": True}),
    ])
    gateway = Gateway(provider=provider, mode="live")
    with pytest.raises(SchemaViolation):
        gateway.chat_json(task="t", inputs={}, schema=SIMPLE_SCHEMA)


def test_chat_json_without_schema_returns_raw_content():
    provider = ScriptedProvider([ModelResponse(content={"anything": [1, 2]})])
    gateway = Gateway(provider=provider, mode="live")
    assert gateway.chat_json(task="t", inputs={}) == {"anything": [1, 2]}


# --- typed helpers over the offline provider ------------------------------


def test_embed_text_is_deterministic_unit_vector(live_gateway):
    a = live_gateway.embed_text("rolling horizon compaction")
    b = live_gateway.embed_text("rolling horizon compaction")
    assert a.shape == (256,)
    np.testing.assert_array_equal(a, b)
    assert np.isclose(np.linalg.norm(a), 1.0)


def test_embed_image_shape_and_determinism(live_gateway, tmp_path):
    from conftest import make_asset_image, png_bytes

    data = png_bytes(make_asset_image(5, 320, 200))
    a = live_gateway.embed_image(data)
    b = live_gateway.embed_image(data)
    assert a.shape == (1296,)
    np.testing.assert_array_equal(a, b)


def test_tts_returns_content_and_audio(live_gateway):
    content, blob = live_gateway.tts("five words of spoken narration")
    assert content["duration_s"] == pytest.approx(0.4 * 5)
    assert isinstance(blob, bytes) and blob[:4] == b"RIFF"


def test_asr_recovers_speech_segments(live_gateway):
    _, blob = live_gateway.tts("a narration span of exactly eight words")
    segments = live_gateway.asr(blob)
    assert segments, "voiced audio must produce at least one segment"
    for seg in segments:
        assert set(seg) >= {"start_s", "end_s", "text"}
        assert seg["start_s"] < seg["end_s"]


def test_ocr_returns_text(live_gateway, tmp_path):
    from conftest import make_asset_image, png_bytes

    out = live_gateway.ocr(png_bytes(make_asset_image(2, 100, 80)))
    assert isinstance(out, str)


# --- environment construction ---------------------------------------------


def test_gateway_from_env_defaults_to_offline_live(monkeypatch):
    monkeypatch.delenv("GATEWAY_MODE", raising=False)
    monkeypatch.delenv("GATEWAY_PROVIDER", raising=False)
    monkeypatch.delenv("GATEWAY_STORE", raising=False)
    gateway = gateway_from_env()
    assert gateway.mode == "live"
    assert gateway.model_id == "offline-v1"


def test_gateway_from_env_reads_mode_and_store(monkeypatch, tmp_path):
    monkeypatch.setenv("GATEWAY_MODE", "record")
    monkeypatch.setenv("GATEWAY_STORE", str(tmp_path / "store"))
    gateway = gateway_from_env()
    assert gateway.mode == "record"
    assert gateway.store is not None
