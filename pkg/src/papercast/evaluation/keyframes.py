"""Keyframe extraction: sample, embed, cluster, and segment the timeline.

Embedding clusters alone would merge a slide shown twice into one group;
the temporal post-pass splits clusters into contiguous runs so each
*showing* yields its own keyframe — the chronologically last frame of the
run — and the run intervals partition the whole video.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DecodeFailure
from ..gateway import Gateway
from ..kernels import dbscan_labels
from ..media import mp4_duration, sample_frames

logger = logging.getLogger(__name__)

SAMPLE_FPS = 1.0
DBSCAN_EPS = 0.08
DBSCAN_MIN_PTS = 2
MAX_RUN_GAP_SAMPLES = 2
MIN_RUN_SECONDS = 2.0


@dataclass
class FrameSample:
    frame_index: int
    timestamp_s: float
    image_path: str
    embedding: np.ndarray

    def __post_init__(self):
        norm = float(np.linalg.norm(self.embedding))
        if abs(norm - 1.0) > 1e-6:
            if norm <= 0:
                raise ValueError("zero embedding cannot be normalized")
            self.embedding = self.embedding / norm


@dataclass
class Keyframe:
    cluster_id: int
    timestamp_s: float
    image_path: str
    t_begin: float
    t_end: float

    def to_json(self) -> dict:
        return {
            "cluster_id": self.cluster_id,
            "timestamp_s": self.timestamp_s,
            "image_path": self.image_path,
            "interval": [self.t_begin, self.t_end],
        }


@dataclass
class KeyframeSet:
    keyframes: list[Keyframe]
    video_duration_s: float

    def __len__(self) -> int:
        return len(self.keyframes)

    def validate(self) -> list[str]:
        problems = []
        if not self.keyframes:
            problems.append("empty keyframe set")
            return problems
        if abs(self.keyframes[0].t_begin) > 1e-9:
            problems.append("first interval does not start at 0")
        for a, b in zip(self.keyframes, self.keyframes[1:]):
            if abs(a.t_end - b.t_begin) > 1e-9:
                problems.append(f"gap/overlap between intervals at {a.t_end}")
        if abs(self.keyframes[-1].t_end - self.video_duration_s) > 1e-6:
            problems.append("last interval does not end at the video duration")
        for kf in self.keyframes:
            if not kf.t_begin <= kf.timestamp_s <= kf.t_end:
                problems.append(f"keyframe at {kf.timestamp_s} outside its interval")
        return problems

    def to_json(self) -> dict:
        return {
            "video_duration_s": self.video_duration_s,
            "keyframes": [k.to_json() for k in self.keyframes],
        }

    def containing(self, t: float) -> Keyframe:
        """Keyframe whose half-open interval [t_begin, t_end) contains t."""
        for kf in self.keyframes:
            if kf.t_begin <= t < kf.t_end:
                return kf
        return self.keyframes[-1]


def _temporal_runs(labels: np.ndarray) -> list[list[int]]:
    """Contiguous runs: split a label when its samples jump > 2 apart."""
    runs: list[list[int]] = []
    open_runs: dict[int, int] = {}  # label -> index into runs of its open run
    last_seen: dict[int, int] = {}
    for i, label in enumerate(labels.tolist()):
        if label in open_runs and i - last_seen[label] <= MAX_RUN_GAP_SAMPLES:
            runs[open_runs[label]].append(i)
        else:
            open_runs[label] = len(runs)
            runs.append([i])
        last_seen[label] = i
    runs.sort(key=lambda r: r[0])
    return runs


def _merge_short_runs(runs: list[list[int]], sample_fps: float) -> list[list[int]]:
    """Fold runs shorter than the minimum into their predecessor."""
    merged: list[list[int]] = []
    for run in runs:
        duration = len(run) / sample_fps
        if duration < MIN_RUN_SECONDS and merged:
            merged[-1].extend(run)
        else:
            merged.append(run)
    if len(merged) > 1 and len(merged[0]) / sample_fps < MIN_RUN_SECONDS:
        merged[1] = merged[0] + merged[1]
        merged = merged[1:]
    return merged


def cluster_samples(samples: list[FrameSample], video_duration_s: float,
                    sample_fps: float = SAMPLE_FPS) -> KeyframeSet:
    """Pure clustering step over already-embedded samples."""
    if not samples:
        raise DecodeFailure("no frames to cluster")
    embeddings = np.stack([s.embedding for s in samples])
    distance = 1.0 - embeddings @ embeddings.T
    np.clip(distance, 0.0, None, out=distance)
    labels = dbscan_labels(distance, DBSCAN_EPS, DBSCAN_MIN_PTS)
    # noise points become singleton clusters with fresh ids
    labels = labels.copy()
    next_id = int(labels.max()) + 1 if labels.size else 0
    for i, label in enumerate(labels.tolist()):
        if label == -1:
            labels[i] = next_id
            next_id += 1

    runs = _merge_short_runs(_temporal_runs(labels), sample_fps)
    # runs must advance strictly in time; fold any straggler into its predecessor
    normalized: list[list[int]] = []
    for run in runs:
        if normalized and max(run) <= max(normalized[-1]):
            normalized[-1].extend(run)
        else:
            normalized.append(run)

    keyframes: list[Keyframe] = []
    t_begin = 0.0
    for run_id, run in enumerate(normalized):
        last = max(run)
        if run_id == len(normalized) - 1:
            t_end = video_duration_s
        else:
            t_end = (last + 1) / sample_fps
        keyframes.append(Keyframe(
            cluster_id=run_id,
            timestamp_s=samples[last].timestamp_s,
            image_path=samples[last].image_path,
            t_begin=t_begin,
            t_end=t_end,
        ))
        t_begin = t_end
    return KeyframeSet(keyframes=keyframes, video_duration_s=video_duration_s)


def extract_keyframes(video_path: str | Path, gateway: Gateway,
                      work_dir: str | Path | None = None,
                      sample_fps: float = SAMPLE_FPS) -> KeyframeSet:
    """Sample the video at 1 fps, embed frames, and cluster into keyframes."""
    video_path = Path(video_path)
    duration = mp4_duration(video_path)
    if duration <= 0:
        raise DecodeFailure(f"cannot read a duration from {video_path.name}")
    frames_dir = Path(work_dir) if work_dir else video_path.parent / "frames"
    frame_paths = sample_frames(video_path, frames_dir, fps=sample_fps)
    if not frame_paths:
        raise DecodeFailure(f"frame sampling produced nothing for {video_path.name}")

    samples: list[FrameSample] = []
    for i, path in enumerate(frame_paths):
        vector = gateway.embed_image(Path(path).read_bytes())
        samples.append(FrameSample(
            frame_index=i,
            timestamp_s=i / sample_fps,
            image_path=str(path),
            embedding=np.asarray(vector, dtype=np.float64),
        ))
    result = cluster_samples(samples, duration, sample_fps)
    problems = result.validate()
    if problems:
        raise DecodeFailure("keyframe intervals invalid: " + "; ".join(problems))
    logger.info("%s: %d keyframes from %d samples", video_path.name, len(result), len(samples))
    return result
