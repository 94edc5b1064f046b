"""Duration-driven timeline: narration length dictates display time."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .. import jsonio
from ..errors import MissingTrack
from ..planning import Storyboard
from .narration import NarrationTrack

logger = logging.getLogger(__name__)

STATIC_PAD_S = 0.3
NO_NARRATION_SLIDE_S = 6.0
SPEED_BOUNDS = (0.75, 1.5)

VISUAL_SOURCES = ("slide_image", "animation_clip")


@dataclass
class TimelineSegment:
    item_key: tuple[int, int]
    visual_source: str
    start_s: float
    display_duration_s: float
    playback_speed: float = 1.0

    def to_json(self) -> dict:
        return {
            "item": {"section_index": self.item_key[0], "slide_index": self.item_key[1]},
            "visual_source": self.visual_source,
            "start_s": self.start_s,
            "display_duration_s": self.display_duration_s,
            "playback_speed": self.playback_speed,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "TimelineSegment":
        return cls(
            item_key=(doc["item"]["section_index"], doc["item"]["slide_index"]),
            visual_source=doc["visual_source"],
            start_s=float(doc["start_s"]),
            display_duration_s=float(doc["display_duration_s"]),
            playback_speed=float(doc["playback_speed"]),
        )


@dataclass
class CompositionManifest:
    doc_id: str
    segments: list[TimelineSegment]
    total_duration_s: float
    resolution: str
    fps: int
    subtitle_path: str = ""
    output_path: str = ""
    # optional extra context kept out of equality comparisons
    extras: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "segments": [s.to_json() for s in self.segments],
            "total_duration_s": self.total_duration_s,
            "resolution": self.resolution,
            "fps": self.fps,
            "subtitle_path": self.subtitle_path,
            "output_path": self.output_path,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CompositionManifest":
        return cls(
            doc_id=doc["doc_id"],
            segments=[TimelineSegment.from_json(s) for s in doc["segments"]],
            total_duration_s=float(doc["total_duration_s"]),
            resolution=doc["resolution"],
            fps=int(doc["fps"]),
            subtitle_path=doc.get("subtitle_path", ""),
            output_path=doc.get("output_path", ""),
        )


def save_manifest(manifest: CompositionManifest, path: str | Path) -> None:
    jsonio.dump(manifest.to_json(), path)


def load_manifest(path: str | Path) -> CompositionManifest:
    return CompositionManifest.from_json(jsonio.load(path))


def compute_timeline(board: Storyboard, tracks: dict[tuple[int, int], NarrationTrack] | None,
                     native_durations: dict[tuple[int, int], float]) -> CompositionManifest:
    """Assemble contiguous segments from narration tracks and clip lengths.

    `tracks` is None when narration is disabled: static items then display
    for a fixed 6 s and animations play at native speed.
    """
    lo, hi = SPEED_BOUNDS
    segments: list[TimelineSegment] = []
    cursor = 0.0
    for item in board.items:
        key = (item.section_index, item.slide_index)
        if item.kind == "static_slide":
            if tracks is None:
                display = NO_NARRATION_SLIDE_S
            else:
                track = tracks.get(key)
                if track is None:
                    raise MissingTrack(f"no narration track for static item {key}")
                display = track.duration_s + STATIC_PAD_S
            segment = TimelineSegment(key, "slide_image", cursor, display, 1.0)
        else:
            native = native_durations.get(key)
            if native is None or native <= 0:
                raise MissingTrack(f"no rendered clip duration for animation item {key}")
            if tracks is None:
                display, speed = native, 1.0
            else:
                track = tracks.get(key)
                if track is None:
                    raise MissingTrack(f"no narration track for animation item {key}")
                narration = track.duration_s
                speed = min(hi, max(lo, native / narration))
                display = narration
                consumed = display * speed
                if consumed < native:
                    logger.debug("item %s: trimming %.2fs of animation tail", key, native - consumed)
                elif consumed > native:
                    logger.debug("item %s: holding final frame %.2fs", key, (consumed - native) / speed)
            segment = TimelineSegment(key, "animation_clip", cursor, display, speed)
        segments.append(segment)
        cursor += segment.display_duration_s

    config = board.config if isinstance(board.config, dict) else {}
    technical = config.get("technical", {})
    manifest = CompositionManifest(
        doc_id=board.doc_id,
        segments=segments,
        total_duration_s=cursor,
        resolution=technical.get("resolution", "1280x720"),
        fps=int(technical.get("fps", 30)),
    )
    logger.info("timeline: %d segments, %.1fs total", len(segments), cursor)
    return manifest
