"""Narration synthesis: per-item audio tracks with subtitle cues."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from ..gateway import Gateway
from ..media import wav_duration
from ..planning import Storyboard
from ..textutil import sentences, word_count

logger = logging.getLogger(__name__)


@dataclass
class NarrationTrack:
    item_key: tuple[int, int]  # (section_index, slide_index)
    audio_path: str
    duration_s: float
    subtitle_cues: list[tuple[float, float, str]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "item": {"section_index": self.item_key[0], "slide_index": self.item_key[1]},
            "audio_path": self.audio_path,
            "duration_s": self.duration_s,
            "subtitle_cues": [
                {"start_s": s, "end_s": e, "text": t} for s, e, t in self.subtitle_cues
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "NarrationTrack":
        return cls(
            item_key=(doc["item"]["section_index"], doc["item"]["slide_index"]),
            audio_path=doc["audio_path"],
            duration_s=float(doc["duration_s"]),
            subtitle_cues=[
                (c["start_s"], c["end_s"], c["text"]) for c in doc["subtitle_cues"]
            ],
        )


def sentence_cues(text: str, duration_s: float) -> list[tuple[float, float, str]]:
    """Split narration at sentence boundaries, timed by word share."""
    units = sentences(text)
    if not units:
        return []
    counts = [max(1, word_count(u)) for u in units]
    total = sum(counts)
    cues: list[tuple[float, float, str]] = []
    t = 0.0
    acc = 0
    for unit, count in zip(units, counts):
        acc += count
        end = duration_s * acc / total
        cues.append((round(t, 3), round(end, 3), unit))
        t = end
    # close the final cue exactly at the track end
    start, _, text_last = cues[-1]
    cues[-1] = (start, round(duration_s, 3), text_last)
    return cues


def synthesize_narration(board: Storyboard, gateway: Gateway,
                         out_dir: str | Path) -> dict[tuple[int, int], NarrationTrack]:
    """One audio track per storyboard item (narration must be enabled)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tracks: dict[tuple[int, int], NarrationTrack] = {}
    for item in board.items:
        key = (item.section_index, item.slide_index)
        content, blob = gateway.tts(item.narration_text)
        path = out_dir / f"narration-{key[0]:02d}-{key[1]:02d}.wav"
        path.write_bytes(blob)
        duration = float(content.get("duration_s") or 0.0)
        if duration <= 0.0:
            duration = wav_duration(path)
        tracks[key] = NarrationTrack(
            item_key=key,
            audio_path=str(path),
            duration_s=duration,
            subtitle_cues=sentence_cues(item.narration_text, duration),
        )
    logger.info("synthesized %d narration tracks (%.1fs speech)",
                len(tracks), sum(t.duration_s for t in tracks.values()))
    return tracks
