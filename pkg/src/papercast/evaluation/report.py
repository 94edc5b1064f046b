"""Assembles every sub-metric into one validated report document."""

from __future__ import annotations

from dataclasses import dataclass, field

import jsonschema

from .. import jsonio
from ..errors import IncompleteInputs
from .metrics import JUDGE_SCORE_RANGE, JudgeVerdict

SCHEMA_VERSION = "1.0"

_JUDGE = {
    "type": "object",
    "required": ["score", "rationale"],
    "additionalProperties": False,
    "properties": {
        "score": {"type": "number", "minimum": JUDGE_SCORE_RANGE[0],
                  "maximum": JUDGE_SCORE_RANGE[1]},
        "rationale": {"type": "string"},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["doc_id", "schema_version", "video", "narration", "visual", "sync",
                 "quiz", "provenance"],
    "additionalProperties": False,
    "properties": {
        "doc_id": {"type": "string"},
        "schema_version": {"type": "string"},
        "video": {"type": "string"},
        "narration": {
            "type": "object",
            "required": ["perplexity", "rouge_l", "judge"],
            "additionalProperties": False,
            "properties": {
                "perplexity": {"type": "number", "minimum": 1.0},
                "rouge_l": {"type": "number", "minimum": 0.0, "maximum": 1.0},
                "judge": _JUDGE,
            },
        },
        "visual": {
            "type": "object",
            "required": ["asset_match_pct", "judge"],
            "additionalProperties": False,
            "properties": {
                "asset_match_pct": {
                    "type": ["number", "null"], "minimum": 0.0, "maximum": 100.0,
                },
                "judge": _JUDGE,
            },
        },
        "sync": {
            "type": "object",
            "required": ["embedding_alignment", "judge"],
            "additionalProperties": False,
            "properties": {
                "embedding_alignment": {
                    "type": ["number", "null"], "minimum": -1.0, "maximum": 1.0,
                },
                "judge": _JUDGE,
            },
        },
        "quiz": {
            "type": "object",
            "required": ["accuracy_pct", "n_items"],
            "additionalProperties": False,
            "properties": {
                "accuracy_pct": {"type": "number", "minimum": 0.0, "maximum": 100.0},
                "n_items": {"type": "integer", "minimum": 1},
            },
        },
        "provenance": {
            "type": "object",
            "required": ["gateway", "n_keyframes", "n_transcript_segments"],
            "properties": {
                "gateway": {"type": "object"},
                "n_keyframes": {"type": "integer", "minimum": 0},
                "n_transcript_segments": {"type": "integer", "minimum": 0},
            },
        },
    },
}


@dataclass
class MetricReport:
    doc_id: str
    video: str
    narration: dict
    visual: dict
    sync: dict
    quiz: dict
    provenance: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_json(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "schema_version": self.schema_version,
            "video": self.video,
            "narration": self.narration,
            "visual": self.visual,
            "sync": self.sync,
            "quiz": self.quiz,
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "MetricReport":
        return cls(doc_id=doc["doc_id"], video=doc["video"], narration=doc["narration"],
                   visual=doc["visual"], sync=doc["sync"], quiz=doc["quiz"],
                   provenance=doc.get("provenance", {}), schema_version=doc["schema_version"])


def _require(value, name: str):
    if value is None:
        raise IncompleteInputs(f"report is missing required metric {name!r}")
    return value


def _check_range(value, low, high, name: str):
    if value is None:
        return None
    value = float(value)
    if not low <= value <= high:
        raise ValueError(f"{name} = {value} outside [{low}, {high}]")
    return value


def compile_report(doc_id: str, video_name: str, *,
                   perplexity: float | None,
                   rouge_l: float | None,
                   narration_judge: JudgeVerdict | None,
                   asset_match_pct: float | None,
                   visual_judge: JudgeVerdict | None,
                   embedding_alignment: float | None,
                   sync_judge: JudgeVerdict | None,
                   quiz_accuracy_pct: float | None,
                   n_quiz_items: int = 4,
                   n_keyframes: int = 0,
                   n_transcript_segments: int = 0,
                   gateway_provenance: dict | None = None) -> MetricReport:
    """Validate every sub-metric and assemble the final document.

    ``asset_match_pct`` and ``embedding_alignment`` may be None (not
    applicable); everything else is mandatory and raises IncompleteInputs
    by field name when absent.
    """
    low, high = JUDGE_SCORE_RANGE
    for judge, name in ((narration_judge, "narration.judge"),
                        (visual_judge, "visual.judge"), (sync_judge, "sync.judge")):
        _require(judge, name)
        _check_range(judge.score, low, high, f"{name}.score")

    report = MetricReport(
        doc_id=doc_id,
        video=video_name,
        narration={
            "perplexity": max(1.0, float(_require(perplexity, "narration.perplexity"))),
            "rouge_l": _check_range(_require(rouge_l, "narration.rouge_l"),
                                    0.0, 1.0, "narration.rouge_l"),
            "judge": {"score": narration_judge.score, "rationale": narration_judge.rationale},
        },
        visual={
            "asset_match_pct": _check_range(asset_match_pct, 0.0, 100.0,
                                            "visual.asset_match_pct"),
            "judge": {"score": visual_judge.score, "rationale": visual_judge.rationale},
        },
        sync={
            "embedding_alignment": _check_range(embedding_alignment, -1.0, 1.0,
                                                "sync.embedding_alignment"),
            "judge": {"score": sync_judge.score, "rationale": sync_judge.rationale},
        },
        quiz={
            "accuracy_pct": _check_range(_require(quiz_accuracy_pct, "quiz.accuracy_pct"),
                                         0.0, 100.0, "quiz.accuracy_pct"),
            "n_items": int(n_quiz_items),
        },
        provenance={
            "gateway": gateway_provenance or {},
            "n_keyframes": int(n_keyframes),
            "n_transcript_segments": int(n_transcript_segments),
        },
    )
    jsonschema.validate(report.to_json(), REPORT_SCHEMA)
    return report


def save_report(report: MetricReport, path) -> None:
    doc = report.to_json()
    jsonschema.validate(doc, REPORT_SCHEMA)
    jsonio.dump(doc, path)


def load_report(path) -> MetricReport:
    doc = jsonio.load(path)
    jsonschema.validate(doc, REPORT_SCHEMA)
    return MetricReport.from_json(doc)
