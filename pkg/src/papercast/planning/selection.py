"""Per-section asset selection and slide-count estimation."""

from __future__ import annotations

import logging
import math

from ..dialogue import GenerationConfig
from ..gateway import Gateway
from ..ingest import Asset, AssetLibrary, ChapterSummary

logger = logging.getLogger(__name__)

WORDS_PER_SLIDE = 120
VISUAL_COST_BOUNDS = (0.25, 0.6)

# Aspect thresholds shared with the layout rules: a visual's display area
# depends only on which width class it falls in.
WIDE_MIN_RATIO = 1.6
TALL_MAX_RATIO = 0.8

SELECTION_SCHEMA = {
    "type": "object",
    "required": ["selected"],
    "properties": {
        "selected": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["asset_id", "reason"],
                "properties": {
                    "asset_id": {"type": "string"},
                    "reason": {"type": "string"},
                },
            },
        }
    },
}


def display_area_fraction(asset: Asset) -> float:
    """Canvas area the layout rules grant this asset (before aspect fit)."""
    r = asset.aspect_ratio
    if r >= WIDE_MIN_RATIO:
        return 0.90 * 0.45  # full-width bottom band
    if r >= TALL_MAX_RATIO:
        return 0.45 * 0.75  # mid-width right column
    return 0.30 * 0.75  # narrow right column


def visual_cost(asset: Asset) -> float:
    lo, hi = VISUAL_COST_BOUNDS
    return min(hi, max(lo, display_area_fraction(asset)))


def estimate_slide_count(summary: ChapterSummary, selected: list[Asset],
                         config: GenerationConfig) -> int:
    """Slides needed for a section: text load plus the visual load."""
    load = summary.word_count / WORDS_PER_SLIDE + sum(visual_cost(a) for a in selected)
    return max(1, math.ceil(load))


def select_content(summary: ChapterSummary, library: AssetLibrary,
                   config: GenerationConfig, gateway: Gateway) -> list[str]:
    """Pick the section's assets worth showing; pinned ids always survive.

    Returns asset ids in document order.  Each choice is logged with the
    model's one-line justification.
    """
    section_assets = library.section_assets(summary.section_index)
    if not section_assets:
        return []
    pinned = [
        a.asset_id for a in section_assets
        if a.asset_id in config.functional.detailed_figure_ids
    ]
    content = gateway.chat_json(
        task="select_assets",
        inputs={
            "summary_text": summary.summary_text,
            "assets": [
                {
                    "asset_id": a.asset_id,
                    "caption": a.caption,
                    "description": a.context_description,
                }
                for a in section_assets
            ],
        },
        schema=SELECTION_SCHEMA,
    )
    valid_ids = {a.asset_id for a in section_assets}
    chosen: dict[str, str] = {}
    for entry in content["selected"]:
        if entry["asset_id"] in valid_ids:
            chosen[entry["asset_id"]] = entry["reason"]
    for asset_id in pinned:
        chosen.setdefault(asset_id, "explicitly requested during the dialogue")
    order = {a.asset_id: i for i, a in enumerate(section_assets)}
    result = sorted(chosen, key=order.__getitem__)
    for asset_id in result:
        logger.info("section %d keeps %s: %s", summary.section_index, asset_id, chosen[asset_id])
    return result
