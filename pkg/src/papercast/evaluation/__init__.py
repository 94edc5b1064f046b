"""Video quality evaluation: transcript, keyframes, metrics, quiz, report."""

from .keyframes import (
    DBSCAN_EPS,
    DBSCAN_MIN_PTS,
    MIN_RUN_SECONDS,
    SAMPLE_FPS,
    FrameSample,
    Keyframe,
    KeyframeSet,
    cluster_samples,
    extract_keyframes,
)
from .metrics import (
    JUDGE_KINDS,
    JUDGE_SCORE_RANGE,
    MATCH_COSINE_THRESHOLD,
    MIN_REGION_AREA_FRACTION,
    JudgeVerdict,
    asset_match_accuracy,
    joint_embedding_sync_score,
    judge_quality,
    keyframe_blobs,
    perplexity,
)
from .quiz import (
    CATEGORIES,
    QUIZ_SCHEMA,
    Quiz,
    QuizItem,
    generate_quiz,
    load_quiz,
    save_quiz,
    vlm_quiz_score,
)
from .report import (
    REPORT_SCHEMA,
    MetricReport,
    compile_report,
    load_report,
    save_report,
)
from .rouge import rouge_l
from .run import EvaluationResult, evaluate_video
from .transcript import (
    TranscriptSegment,
    align_segments,
    correct_transcript,
    extract_and_transcribe,
)

__all__ = [
    "DBSCAN_EPS",
    "DBSCAN_MIN_PTS",
    "MIN_RUN_SECONDS",
    "SAMPLE_FPS",
    "FrameSample",
    "Keyframe",
    "KeyframeSet",
    "cluster_samples",
    "extract_keyframes",
    "JUDGE_KINDS",
    "JUDGE_SCORE_RANGE",
    "MATCH_COSINE_THRESHOLD",
    "MIN_REGION_AREA_FRACTION",
    "JudgeVerdict",
    "asset_match_accuracy",
    "joint_embedding_sync_score",
    "judge_quality",
    "keyframe_blobs",
    "perplexity",
    "CATEGORIES",
    "QUIZ_SCHEMA",
    "Quiz",
    "QuizItem",
    "generate_quiz",
    "load_quiz",
    "save_quiz",
    "vlm_quiz_score",
    "REPORT_SCHEMA",
    "MetricReport",
    "compile_report",
    "load_report",
    "save_report",
    "rouge_l",
    "EvaluationResult",
    "evaluate_video",
    "TranscriptSegment",
    "align_segments",
    "correct_transcript",
    "extract_and_transcribe",
]
