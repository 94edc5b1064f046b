"""Scalar quality metrics: fluency, asset coverage, sync, and judged scores."""

from __future__ import annotations

import io
import json
import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from ..errors import EmptyText, UnparseableVerdict
from ..gateway import Gateway
from ..ingest import AssetLibrary
from ..planning import Storyboard
from ..synth import CompositionManifest
from ..textutil import tokenize
from .keyframes import KeyframeSet
from .transcript import TranscriptSegment, align_segments

logger = logging.getLogger(__name__)

# region-proposal detector settings
MIN_REGION_AREA_FRACTION = 0.05
MATCH_COSINE_THRESHOLD = 0.85
PROPOSAL_CLOSE_KERNEL = 9
SATURATION_THRESHOLD = 40
LUMINANCE_DELTA = 40

SYNC_TEXT_CHAR_LIMIT = 512

JUDGE_KINDS = ("narration_llm", "visual_vlm", "sync_vlm")
JUDGE_SCORE_RANGE = (1.0, 5.0)
MAX_JUDGE_IMAGES = 6


# --- language-model fluency -------------------------------------------------

def perplexity(text: str, gateway: Gateway) -> float:
    """Token-level perplexity: exp of the mean negative log-probability."""
    if not tokenize(text):
        raise EmptyText("cannot score an empty transcript")
    content = gateway.chat_json(task="score_text", inputs={"text": text})
    logprobs = [float(v) for v in content.get("token_logprobs", [])]
    if not logprobs:
        raise EmptyText("scoring model returned no token scores")
    value = math.exp(-sum(logprobs) / len(logprobs))
    return max(1.0, value)


# --- asset display coverage -------------------------------------------------

def _region_proposals(image: np.ndarray) -> list[tuple[int, int, int, int]]:
    """Boxes of visually salient regions covering >= 5% of the frame.

    Two masks feed the proposals: saturated (colored) pixels, and pixels
    whose luminance departs strongly from the border background. Each
    connected component above the area floor contributes its bounding box.
    """
    import cv2

    h, w = image.shape[:2]
    min_area = MIN_REGION_AREA_FRACTION * h * w
    hsv = cv2.cvtColor(image, cv2.COLOR_RGB2HSV)
    gray = cv2.cvtColor(image, cv2.COLOR_RGB2GRAY)
    border = np.concatenate([gray[0, :], gray[-1, :], gray[:, 0], gray[:, -1]])
    background = float(np.median(border))
    masks = [
        (hsv[:, :, 1] > SATURATION_THRESHOLD).astype(np.uint8),
        (np.abs(gray.astype(np.int16) - background) > LUMINANCE_DELTA).astype(np.uint8),
    ]
    kernel = np.ones((PROPOSAL_CLOSE_KERNEL, PROPOSAL_CLOSE_KERNEL), np.uint8)
    boxes: list[tuple[int, int, int, int]] = []
    for mask in masks:
        closed = cv2.morphologyEx(mask, cv2.MORPH_CLOSE, kernel)
        contours, _ = cv2.findContours(closed, cv2.RETR_EXTERNAL, cv2.CHAIN_APPROX_SIMPLE)
        for contour in contours:
            x, y, bw, bh = cv2.boundingRect(contour)
            if bw * bh >= min_area:
                boxes.append((x, y, bw, bh))
    deduped: list[tuple[int, int, int, int]] = []
    for box in boxes:
        if not any(_iou(box, kept) > 0.9 for kept in deduped):
            deduped.append(box)
    return deduped


def _iou(a: tuple[int, int, int, int], b: tuple[int, int, int, int]) -> float:
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    ix = max(0, min(ax + aw, bx + bw) - max(ax, bx))
    iy = max(0, min(ay + ah, by + bh) - max(ay, by))
    inter = ix * iy
    union = aw * ah + bw * bh - inter
    return inter / union if union else 0.0


def _png_bytes(array: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(array).save(buf, format="PNG")
    return buf.getvalue()


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        # embeddings from different towers: resample onto the shorter axis
        n = min(a.size, b.size)
        xs = np.linspace(0.0, 1.0, n)
        a = np.interp(xs, np.linspace(0.0, 1.0, a.size), a)
        b = np.interp(xs, np.linspace(0.0, 1.0, b.size), b)
    na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def _segment_at(manifest: CompositionManifest, t: float):
    """The timeline segment on screen at time t, on the encoder's frame grid."""
    fps = manifest.fps
    chosen = None
    for seg in manifest.segments:
        start = round(seg.start_s * fps) / fps
        if start <= t:
            chosen = seg
        else:
            break
    return chosen


def asset_match_accuracy(keyframes: KeyframeSet, library: AssetLibrary, gateway: Gateway,
                         manifest: CompositionManifest | None = None,
                         board: Storyboard | None = None) -> float | None:
    """Percentage of expected asset displays the detector finds on screen.

    Ground truth needs the composition manifest and storyboard of the video
    under evaluation; without them (a video we did not produce) the metric
    is not computable and ``None`` is returned. Animated items are excluded
    from ground truth because their imagery is transformed mid-flight.
    """
    if manifest is None or board is None:
        logger.info("asset match: no composition manifest; metric not applicable")
        return None
    items = {(item.section_index, item.slide_index): item for item in board.items}
    asset_vectors = {
        asset_id: gateway.embed_image(Path(asset.image_path).read_bytes())
        for asset_id, asset in sorted(library.assets.items())
    }
    total = 0
    found = 0
    for kf in keyframes.keyframes:
        seg = _segment_at(manifest, kf.timestamp_s)
        if seg is None:
            continue
        item = items.get(seg.item_key)
        if item is None or item.kind != "static_slide":
            continue
        truth = item.asset_ids()
        if not truth:
            continue
        frame = np.asarray(Image.open(kf.image_path).convert("RGB"))
        proposals = _region_proposals(frame)
        crops = [
            gateway.embed_image(_png_bytes(frame[y:y + bh, x:x + bw]))
            for x, y, bw, bh in proposals
        ]
        for asset_id in truth:
            total += 1
            target = asset_vectors[asset_id]
            best = max((_cosine(c, target) for c in crops), default=-1.0)
            if best >= MATCH_COSINE_THRESHOLD:
                found += 1
            else:
                logger.warning(
                    "asset match: %s not found at t=%.1fs (best cosine %.3f over %d proposals)",
                    asset_id, kf.timestamp_s, best, len(proposals),
                )
    if total == 0:
        logger.info("asset match: no asset displays in ground truth; metric not applicable")
        return None
    return 100.0 * found / total


# --- audio/visual synchrony -------------------------------------------------

def joint_embedding_sync_score(segments: list[TranscriptSegment], keyframes: KeyframeSet,
                               gateway: Gateway) -> float | None:
    """Mean cosine between each narration span and the keyframe it played over."""
    if not segments:
        return None
    assignment = align_segments(segments, keyframes)
    image_vectors: dict[str, np.ndarray] = {}
    scores = []
    for seg in segments:
        kf = assignment[seg.index]
        if kf.image_path not in image_vectors:
            image_vectors[kf.image_path] = gateway.embed_image(Path(kf.image_path).read_bytes())
        text_vec = gateway.embed_text(seg.text[:SYNC_TEXT_CHAR_LIMIT])
        scores.append(_cosine(text_vec, image_vectors[kf.image_path]))
    return float(np.mean(scores))


# --- judged rubric scores ---------------------------------------------------

@dataclass
class JudgeVerdict:
    kind: str
    score: float
    rationale: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "score": self.score, "rationale": self.rationale}


def _parse_verdict(content: dict) -> tuple[float, str]:
    """Pull a numeric score out of a free-form judge reply."""
    candidate = content
    if "score" not in candidate and isinstance(candidate.get("text"), str):
        match = re.search(r"\{.*\}", candidate["text"], re.DOTALL)
        if not match:
            raise ValueError("no JSON object in judge reply")
        candidate = json.loads(match.group(0))
    raw = candidate["score"]  # KeyError -> caller treats as parse failure
    score = float(raw)
    low, high = JUDGE_SCORE_RANGE
    if not math.isfinite(score) or not low <= score <= high:
        raise ValueError(f"score {score} outside [{low}, {high}]")
    return score, str(candidate.get("rationale", ""))


def judge_quality(kind: str, digest: str, gateway: Gateway,
                  blobs: dict | None = None) -> JudgeVerdict:
    """Rubric-based 1-5 judgement with one repair attempt on bad output."""
    if kind not in JUDGE_KINDS:
        raise ValueError(f"kind must be one of {JUDGE_KINDS}")
    capability = "chat" if kind == "narration_llm" else "vlm_chat"
    inputs = {"kind": kind, "digest": digest}
    content = gateway.chat_json(task="judge", inputs=inputs, capability=capability, blobs=blobs)
    try:
        score, rationale = _parse_verdict(content)
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as first:
        logger.warning("judge %s: unusable first reply (%s); re-prompting", kind, first)
        content = gateway.chat_json(
            task="judge", inputs=inputs,
            params={"repair": 1, "reason": str(first)[:200]},
            capability=capability, blobs=blobs,
        )
        try:
            score, rationale = _parse_verdict(content)
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as second:
            raise UnparseableVerdict(
                f"judge {kind!r} produced no usable score after repair: {second}"
            ) from second
    return JudgeVerdict(kind=kind, score=score, rationale=rationale)


def keyframe_blobs(keyframes: KeyframeSet, limit: int = MAX_JUDGE_IMAGES) -> dict[str, bytes]:
    """Evenly spaced keyframe images for multimodal judge calls."""
    frames = keyframes.keyframes
    if len(frames) > limit:
        idx = np.linspace(0, len(frames) - 1, limit).round().astype(int)
        frames = [frames[i] for i in idx]
    return {f"image_{i}": Path(kf.image_path).read_bytes() for i, kf in enumerate(frames)}
