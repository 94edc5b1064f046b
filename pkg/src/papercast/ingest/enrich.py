"""Model-backed enrichment: section summaries and asset descriptions."""

from __future__ import annotations

import logging
from pathlib import Path

from ..gateway import Gateway
from ..textutil import word_count
from .types import ChapterSummary, PaperDocument

logger = logging.getLogger(__name__)

DEFAULT_SUMMARY_WORDS = 90

SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["summary_text", "key_points"],
    "properties": {
        "summary_text": {"type": "string"},
        "key_points": {"type": "array", "items": {"type": "string"}, "minItems": 1, "maxItems": 6},
    },
}

DESCRIPTION_SCHEMA = {
    "type": "object",
    "required": ["description"],
    "properties": {"description": {"type": "string", "minLength": 1}},
}


def summarize_sections(
    document: PaperDocument,
    gateway: Gateway,
    target_words: int = DEFAULT_SUMMARY_WORDS,
) -> dict[int, ChapterSummary]:
    """Summarize every section (auxiliary ones included, flagged as such)."""
    summaries: dict[int, ChapterSummary] = {}
    for section in document.sections:
        content = gateway.chat_json(
            task="summarize_section",
            inputs={"heading": section.heading, "body_text": section.body_text},
            params={"target_words": target_words},
            schema=SUMMARY_SCHEMA,
        )
        text = content["summary_text"]
        source_words = section.word_count
        if source_words and word_count(text) > source_words:
            # a summary must never be longer than its source
            text = " ".join(text.split()[:source_words])
            logger.warning("trimmed overlong summary for section %d", section.index)
        summaries[section.index] = ChapterSummary(
            section_index=section.index,
            summary_text=text,
            key_points=[p for p in content["key_points"] if p.strip()] or [section.heading],
            heading=section.heading,
            auxiliary=section.auxiliary,
            source_word_count=source_words,
            asset_ids=list(section.asset_ids),
        )
    return summaries


def describe_assets(document: PaperDocument, gateway: Gateway) -> None:
    """Fill ``context_description`` on every asset via the vision channel."""
    for asset_id in sorted(document.assets):
        asset = document.assets[asset_id]
        image_bytes = Path(asset.image_path).read_bytes()
        content = gateway.chat_json(
            task="describe_asset",
            inputs={
                "asset_id": asset.asset_id,
                "kind": asset.kind,
                "caption": asset.caption,
                "context": asset.context_text,
            },
            schema=DESCRIPTION_SCHEMA,
            capability="vlm_chat",
            blobs={"image": image_bytes},
        )
        asset.context_description = content["description"]
