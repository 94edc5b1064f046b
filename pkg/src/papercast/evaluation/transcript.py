"""Audio transcription and keyframe-grounded transcript correction."""

from __future__ import annotations

import logging
import tempfile
from dataclasses import dataclass
from pathlib import Path

from ..errors import NoAudioStream
from ..gateway import Gateway
from ..media import extract_audio, mp4_has_audio
from .keyframes import Keyframe, KeyframeSet

logger = logging.getLogger(__name__)

CORRECTION_MODES = ("ocr_llm", "vlm")

CORRECTION_SCHEMA = {
    "type": "object",
    "required": ["segments"],
    "properties": {
        "segments": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["index", "text"],
                "properties": {"index": {"type": "integer"}, "text": {"type": "string"}},
            },
        }
    },
}


@dataclass
class TranscriptSegment:
    index: int
    start_s: float
    end_s: float
    text: str
    corrected: bool = False

    def __post_init__(self):
        if not self.start_s < self.end_s:
            raise ValueError(f"segment {self.index}: start {self.start_s} >= end {self.end_s}")

    @property
    def midpoint_s(self) -> float:
        return (self.start_s + self.end_s) / 2.0

    def to_json(self) -> dict:
        return {"index": self.index, "start_s": self.start_s, "end_s": self.end_s,
                "text": self.text, "corrected": self.corrected}

    @classmethod
    def from_json(cls, doc: dict) -> "TranscriptSegment":
        return cls(index=doc["index"], start_s=float(doc["start_s"]),
                   end_s=float(doc["end_s"]), text=doc["text"],
                   corrected=bool(doc.get("corrected", False)))


def extract_and_transcribe(video_path: str | Path, gateway: Gateway,
                           work_dir: str | Path | None = None) -> list[TranscriptSegment]:
    """Pull the audio track and transcribe it into timestamped segments."""
    video_path = Path(video_path)
    if not mp4_has_audio(video_path):
        raise NoAudioStream(f"{video_path.name} has no audio track")
    with tempfile.TemporaryDirectory(prefix="asr-") as tmp:
        wav_path = Path(work_dir) / "audio.wav" if work_dir else Path(tmp) / "audio.wav"
        wav_path.parent.mkdir(parents=True, exist_ok=True)
        extract_audio(video_path, wav_path)
        raw_segments = gateway.asr(wav_path.read_bytes())
    segments = [
        TranscriptSegment(index=i, start_s=float(seg["start_s"]),
                          end_s=float(seg["end_s"]), text=seg["text"])
        for i, seg in enumerate(raw_segments)
    ]
    if not segments:
        logger.warning("%s: no speech detected; transcript is empty", video_path.name)
    return segments


def align_segments(segments: list[TranscriptSegment],
                   keyframes: KeyframeSet) -> dict[int, Keyframe]:
    """Map each segment to the keyframe whose interval holds its midpoint.

    Intervals are half-open [t_begin, t_end), so a midpoint landing on a
    boundary belongs to the later interval.
    """
    return {seg.index: keyframes.containing(seg.midpoint_s) for seg in segments}


def correct_transcript(segments: list[TranscriptSegment], keyframes: KeyframeSet,
                       gateway: Gateway, mode: str = "vlm") -> list[TranscriptSegment]:
    """Fix recognition errors using what was on screen; timestamps survive."""
    if mode not in CORRECTION_MODES:
        raise ValueError(f"mode must be one of {CORRECTION_MODES}")
    if not segments:
        return []

    assignment = align_segments(segments, keyframes)
    by_keyframe: dict[float, list[TranscriptSegment]] = {}
    for seg in segments:
        by_keyframe.setdefault(assignment[seg.index].timestamp_s, []).append(seg)

    fixed_text: dict[int, str] = {}
    for kf in keyframes.keyframes:
        group = by_keyframe.get(kf.timestamp_s)
        if not group:
            continue
        payload = [{"index": s.index, "text": s.text} for s in group]
        if mode == "vlm":
            content = gateway.chat_json(
                task="correct_transcript",
                inputs={"segments": payload},
                schema=CORRECTION_SCHEMA,
                capability="vlm_chat",
                blobs={"image": Path(kf.image_path).read_bytes()},
            )
        else:
            ocr_text = gateway.ocr(Path(kf.image_path).read_bytes())
            content = gateway.chat_json(
                task="correct_transcript",
                inputs={"segments": payload, "ocr_text": ocr_text},
                schema=CORRECTION_SCHEMA,
            )
        for entry in content["segments"]:
            fixed_text[int(entry["index"])] = entry["text"]

    out: list[TranscriptSegment] = []
    n_changed = 0
    for seg in segments:
        new_text = fixed_text.get(seg.index, seg.text)
        changed = new_text.strip() != seg.text.strip()
        n_changed += changed
        out.append(TranscriptSegment(index=seg.index, start_s=seg.start_s,
                                     end_s=seg.end_s, text=new_text, corrected=changed))
    logger.info("transcript correction (%s): %d/%d segments changed", mode, n_changed, len(out))
    return out
