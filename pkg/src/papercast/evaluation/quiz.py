"""Comprehension quiz: generation from the library, answering from the video."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field

from .. import jsonio
from ..errors import SchemaViolation
from ..gateway import Gateway
from ..ingest import AssetLibrary
from .keyframes import KeyframeSet
from .metrics import keyframe_blobs

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"
CATEGORIES = ("motivation", "method", "results", "contribution")
OPTIONS_PER_ITEM = 4
TRANSCRIPT_CHAR_LIMIT = 4000

QUIZ_SCHEMA = {
    "type": "object",
    "required": ["doc_id", "schema_version", "seed", "items"],
    "additionalProperties": False,
    "properties": {
        "doc_id": {"type": "string"},
        "schema_version": {"type": "string"},
        "seed": {"type": "integer"},
        "items": {
            "type": "array",
            "minItems": len(CATEGORIES),
            "maxItems": len(CATEGORIES),
            "items": {
                "type": "object",
                "required": ["category", "question", "options", "correct_index"],
                "additionalProperties": False,
                "properties": {
                    "category": {"type": "string", "enum": list(CATEGORIES)},
                    "question": {"type": "string", "minLength": 1},
                    "options": {
                        "type": "array",
                        "minItems": OPTIONS_PER_ITEM,
                        "maxItems": OPTIONS_PER_ITEM,
                        "items": {"type": "string", "minLength": 1},
                    },
                    "correct_index": {
                        "type": "integer", "minimum": 0, "maximum": OPTIONS_PER_ITEM - 1,
                    },
                },
            },
        },
    },
}

_MODEL_ITEMS_SCHEMA = {
    "type": "object",
    "required": ["items"],
    "properties": {
        "items": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["category", "question", "options", "correct_index"],
                "properties": {
                    "category": {"type": "string"},
                    "question": {"type": "string"},
                    "options": {"type": "array", "items": {"type": "string"}},
                    "correct_index": {"type": "integer"},
                },
            },
        }
    },
}


@dataclass
class QuizItem:
    category: str
    question: str
    options: list[str]
    correct_index: int

    def to_json(self) -> dict:
        return {"category": self.category, "question": self.question,
                "options": list(self.options), "correct_index": self.correct_index}

    @classmethod
    def from_json(cls, doc: dict) -> "QuizItem":
        return cls(category=doc["category"], question=doc["question"],
                   options=list(doc["options"]), correct_index=int(doc["correct_index"]))


@dataclass
class Quiz:
    doc_id: str
    seed: int
    items: list[QuizItem] = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def to_json(self) -> dict:
        return {"doc_id": self.doc_id, "schema_version": self.schema_version,
                "seed": self.seed, "items": [item.to_json() for item in self.items]}

    @classmethod
    def from_json(cls, doc: dict) -> "Quiz":
        return cls(doc_id=doc["doc_id"], seed=int(doc["seed"]),
                   items=[QuizItem.from_json(i) for i in doc["items"]],
                   schema_version=doc["schema_version"])


def _check_items(items: list[QuizItem]) -> None:
    seen = [item.category for item in items]
    if sorted(seen) != sorted(CATEGORIES):
        raise SchemaViolation(f"quiz needs one item per category {CATEGORIES}, got {seen}")
    for item in items:
        if len(item.options) != OPTIONS_PER_ITEM:
            raise SchemaViolation(f"{item.category} item has {len(item.options)} options")
        if not 0 <= item.correct_index < OPTIONS_PER_ITEM:
            raise SchemaViolation(f"{item.category} correct_index {item.correct_index} out of range")


def generate_quiz(library: AssetLibrary, gateway: Gateway, seed: int = 0) -> Quiz:
    """Four multiple-choice questions, one per category, with seeded option order."""
    summaries = [
        library.summaries[i].summary_text
        for i in sorted(library.summaries)
        if not library.summaries[i].auxiliary
    ] or [library.summaries[i].summary_text for i in sorted(library.summaries)]
    content = gateway.chat_json(
        task="quiz",
        inputs={"title": library.title, "summaries": summaries},
        schema=_MODEL_ITEMS_SCHEMA,
    )
    by_category = {}
    for raw in content["items"]:
        if raw["category"] in CATEGORIES:
            by_category.setdefault(raw["category"], raw)
    missing = [c for c in CATEGORIES if c not in by_category]
    if missing:
        raise SchemaViolation(f"quiz model omitted categories: {missing}")

    rng = random.Random(seed)
    items = []
    for category in CATEGORIES:
        raw = by_category[category]
        options = list(raw["options"])
        correct = options[int(raw["correct_index"])]
        order = list(range(len(options)))
        rng.shuffle(order)
        shuffled = [options[i] for i in order]
        items.append(QuizItem(category=category, question=raw["question"],
                              options=shuffled, correct_index=shuffled.index(correct)))
    _check_items(items)
    return Quiz(doc_id=library.doc_id, seed=seed, items=items)


def vlm_quiz_score(quiz: Quiz, transcript_text: str, keyframes: KeyframeSet,
                   gateway: Gateway) -> float:
    """Answer the quiz from the video alone; returns percent correct."""
    _check_items(quiz.items)
    blobs = keyframe_blobs(keyframes)
    correct = 0
    for item in quiz.items:
        content = gateway.chat_json(
            task="answer_quiz",
            inputs={
                "question": item.question,
                "options": item.options,
                "transcript": transcript_text[:TRANSCRIPT_CHAR_LIMIT],
            },
            capability="vlm_chat",
            blobs=blobs,
        )
        choice = int(content.get("choice", -1))
        correct += choice == item.correct_index
    score = 100.0 * correct / len(quiz.items)
    logger.info("quiz: %d/%d answered correctly (%.1f%%)", correct, len(quiz.items), score)
    return score


def save_quiz(quiz: Quiz, path) -> None:
    import jsonschema

    doc = quiz.to_json()
    jsonschema.validate(doc, QUIZ_SCHEMA)
    jsonio.dump(doc, path)


def load_quiz(path) -> Quiz:
    import jsonschema

    doc = jsonio.load(path)
    jsonschema.validate(doc, QUIZ_SCHEMA)
    return Quiz.from_json(doc)
