"""Synthesis: slide rendering, narration, timeline, and video composition."""

from .composite import build_srt, composite_video
from .narration import NarrationTrack, sentence_cues, synthesize_narration
from .slides import render_slide, render_slides
from .timeline import (
    NO_NARRATION_SLIDE_S,
    SPEED_BOUNDS,
    STATIC_PAD_S,
    CompositionManifest,
    TimelineSegment,
    compute_timeline,
    load_manifest,
    save_manifest,
)

__all__ = [
    "NO_NARRATION_SLIDE_S",
    "SPEED_BOUNDS",
    "STATIC_PAD_S",
    "CompositionManifest",
    "NarrationTrack",
    "TimelineSegment",
    "build_srt",
    "composite_video",
    "compute_timeline",
    "load_manifest",
    "render_slide",
    "render_slides",
    "save_manifest",
    "sentence_cues",
    "synthesize_narration",
]
