"""End-to-end evaluation: one call from video file to metric report."""

from __future__ import annotations

import logging
from pathlib import Path

from ..gateway import Gateway
from ..ingest import AssetLibrary
from ..planning import Storyboard
from ..synth import CompositionManifest
from .keyframes import KeyframeSet, extract_keyframes
from .metrics import (
    asset_match_accuracy,
    joint_embedding_sync_score,
    judge_quality,
    keyframe_blobs,
    perplexity,
)
from .quiz import Quiz, generate_quiz, vlm_quiz_score
from .report import MetricReport, compile_report
from .rouge import rouge_l
from .transcript import TranscriptSegment, align_segments, correct_transcript, \
    extract_and_transcribe

logger = logging.getLogger(__name__)

DIGEST_CHAR_LIMIT = 4000
SYNC_DIGEST_SEGMENTS = 8


class EvaluationResult:
    def __init__(self, report: MetricReport, quiz: Quiz, keyframes: KeyframeSet,
                 transcript: list[TranscriptSegment]):
        self.report = report
        self.quiz = quiz
        self.keyframes = keyframes
        self.transcript = transcript


def _sync_digest(segments: list[TranscriptSegment], keyframes: KeyframeSet) -> str:
    assignment = align_segments(segments, keyframes)
    lines = [
        f"[{seg.start_s:.1f}-{seg.end_s:.1f}s] over kf@{assignment[seg.index].timestamp_s:.1f}s:"
        f" {seg.text[:60]}"
        for seg in segments[:SYNC_DIGEST_SEGMENTS]
    ]
    return "\n".join(lines)


def evaluate_video(video_path: str | Path, library: AssetLibrary, gateway: Gateway,
                   work_dir: str | Path, manifest: CompositionManifest | None = None,
                   board: Storyboard | None = None, quiz_seed: int = 0,
                   correction_mode: str = "vlm") -> EvaluationResult:
    """Score a narrated video against the source library it should cover."""
    video_path = Path(video_path)
    work_dir = Path(work_dir)
    work_dir.mkdir(parents=True, exist_ok=True)

    keyframes = extract_keyframes(video_path, gateway, work_dir=work_dir / "keyframes")
    logger.info("evaluation: %d keyframes over %.1fs",
                len(keyframes.keyframes), keyframes.video_duration_s)

    transcript = extract_and_transcribe(video_path, gateway, work_dir=work_dir)
    transcript = correct_transcript(transcript, keyframes, gateway, mode=correction_mode)
    transcript_text = " ".join(seg.text for seg in transcript)

    reference_summaries = " ".join(
        library.summaries[i].summary_text
        for i in sorted(library.summaries)
        if not library.summaries[i].auxiliary
    )

    frames = keyframe_blobs(keyframes)
    narration_judge = judge_quality(
        "narration_llm", transcript_text[:DIGEST_CHAR_LIMIT], gateway)
    visual_judge = judge_quality(
        "visual_vlm",
        f"{len(keyframes.keyframes)} keyframes sampled from {video_path.name}",
        gateway, blobs=frames)
    sync_judge = judge_quality(
        "sync_vlm", _sync_digest(transcript, keyframes), gateway, blobs=frames)

    quiz = generate_quiz(library, gateway, seed=quiz_seed)
    quiz_accuracy = vlm_quiz_score(quiz, transcript_text, keyframes, gateway)

    report = compile_report(
        library.doc_id, video_path.name,
        perplexity=perplexity(transcript_text, gateway),
        rouge_l=rouge_l(transcript_text, reference_summaries),
        narration_judge=narration_judge,
        asset_match_pct=asset_match_accuracy(keyframes, library, gateway,
                                             manifest=manifest, board=board),
        visual_judge=visual_judge,
        embedding_alignment=joint_embedding_sync_score(transcript, keyframes, gateway),
        sync_judge=sync_judge,
        quiz_accuracy_pct=quiz_accuracy,
        n_quiz_items=len(quiz.items),
        n_keyframes=len(keyframes.keyframes),
        n_transcript_segments=len(transcript),
        gateway_provenance=gateway.provenance(),
    )
    return EvaluationResult(report, quiz, keyframes, transcript)
