"""Storyboard generation: the ordered plan of slides and animations.

Narration pacing drives everything: the target duration buys a total word
budget at a fixed speaking rate, apportioned to sections by summary
length.  Animated items spend their plan's narration words out of their
section's share; the remainder goes to static slides.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .. import jsonio
from ..dialogue import GenerationConfig
from ..errors import BudgetInfeasible, InconsistentInputs, Overflow, PlanInvalid
from ..gateway import Gateway
from ..ingest import Asset, AssetLibrary
from ..textutil import sentences, word_count
from .animation import ANIMATABLE_KINDS, AnimationPlan, build_animation_plan
from .layout import LayoutBox, layout_slide
from .selection import estimate_slide_count, select_content, visual_cost

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"
ITEM_KINDS = ("static_slide", "animation")

SPEAKING_RATE_WPS = 2.5
MIN_SECTION_WORDS = 40
MIN_ITEM_WORDS = 20
MAX_ASSETS_PER_SLIDE = 2

WRITE_SLIDES_SCHEMA = {
    "type": "object",
    "required": ["slides"],
    "properties": {
        "slides": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["slide_index", "title", "body_text", "narration_text"],
                "properties": {
                    "slide_index": {"type": "integer", "minimum": 0},
                    "title": {"type": "string"},
                    "body_text": {"type": "string"},
                    "narration_text": {"type": "string"},
                },
            },
        }
    },
}


@dataclass
class StoryboardItem:
    kind: str
    section_index: int
    slide_index: int
    title: str
    narration_text: str
    layout: list[LayoutBox] | None = None
    animation_plan_id: str | None = None

    def asset_ids(self) -> list[str]:
        if not self.layout:
            return []
        return [b.content_ref for b in self.layout if b.role == "figure"]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "section_index": self.section_index,
            "slide_index": self.slide_index,
            "title": self.title,
            "narration_text": self.narration_text,
            "layout": [b.to_json() for b in self.layout] if self.layout is not None else None,
            "animation_plan_id": self.animation_plan_id,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "StoryboardItem":
        layout = doc.get("layout")
        return cls(
            kind=doc["kind"],
            section_index=doc["section_index"],
            slide_index=doc["slide_index"],
            title=doc["title"],
            narration_text=doc["narration_text"],
            layout=[LayoutBox.from_json(b) for b in layout] if layout is not None else None,
            animation_plan_id=doc.get("animation_plan_id"),
        )


@dataclass
class Storyboard:
    doc_id: str
    config: dict
    items: list[StoryboardItem]
    schema_version: str = SCHEMA_VERSION
    # compiled plans travel with the object but serialize to separate files
    plans: dict[str, AnimationPlan] = field(default_factory=dict, compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "schema_version": self.schema_version,
            "config": self.config,
            "items": [item.to_json() for item in self.items],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Storyboard":
        return cls(
            doc_id=doc["doc_id"],
            config=doc["config"],
            items=[StoryboardItem.from_json(i) for i in doc["items"]],
            schema_version=doc["schema_version"],
        )


STORYBOARD_SCHEMA = {
    "type": "object",
    "required": ["doc_id", "schema_version", "config", "items"],
    "properties": {
        "doc_id": {"type": "string", "minLength": 1},
        "schema_version": {"const": SCHEMA_VERSION},
        "config": {"type": "object"},
        "items": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["kind", "section_index", "slide_index", "title",
                             "narration_text", "layout", "animation_plan_id"],
                "properties": {
                    "kind": {"enum": list(ITEM_KINDS)},
                    "section_index": {"type": "integer", "minimum": 0},
                    "slide_index": {"type": "integer", "minimum": 0},
                    "title": {"type": "string"},
                    "narration_text": {"type": "string"},
                    "layout": {"type": ["array", "null"]},
                    "animation_plan_id": {"type": ["string", "null"]},
                },
            },
        },
    },
}


def validate_storyboard(board: Storyboard, narration_enabled: bool = True) -> list[str]:
    problems: list[str] = []
    keys = [(item.section_index, item.slide_index) for item in board.items]
    if keys != sorted(keys):
        problems.append("items not ordered by (section_index, slide_index)")
    for item in board.items:
        tag = f"item {item.section_index}/{item.slide_index}"
        if item.kind not in ITEM_KINDS:
            problems.append(f"{tag}: unknown kind {item.kind!r}")
        if item.kind == "static_slide":
            if item.layout is None or item.animation_plan_id is not None:
                problems.append(f"{tag}: static slide must carry a layout and no plan id")
        else:
            if item.animation_plan_id is None or item.layout is not None:
                problems.append(f"{tag}: animation must carry a plan id and no layout")
            elif item.animation_plan_id not in board.plans:
                problems.append(f"{tag}: plan {item.animation_plan_id!r} not compiled")
        if narration_enabled and not item.narration_text.strip():
            problems.append(f"{tag}: empty narration while narration is enabled")
    return problems


def _section_shares(summaries: list, total_words_budget: float) -> dict[int, float]:
    weights = {s.section_index: s.word_count for s in summaries}
    total = sum(weights.values())
    if total == 0:
        return {i: total_words_budget / len(weights) for i in weights}
    return {i: total_words_budget * w / total for i, w in weights.items()}


def _split_for_overflow(title: str, text: str, assets: list[Asset], style: dict) -> list[tuple[str, list[LayoutBox]]]:
    """Bisect slide text by sentences until every part lays out."""
    try:
        return [(title, layout_slide(title, text, assets, style))]
    except Overflow:
        parts = sentences(text)
        if len(parts) < 2:
            words = text.split()
            parts = [" ".join(words[: len(words) // 2]), " ".join(words[len(words) // 2:])]
        mid = len(parts) // 2
        first, second = " ".join(parts[:mid]), " ".join(parts[mid:])
        out = _split_for_overflow(title, first, assets, style)
        out += _split_for_overflow(f"{title} (cont.)", second, [], style)
        return out


def _distribute_narration(text: str, n_parts: int) -> list[str]:
    """Split narration into contiguous, non-empty chunks, one per part."""
    if not text.strip():
        return [text] + [""] * (n_parts - 1)
    if n_parts == 1:
        return [text]
    units = sentences(text)
    if len(units) < n_parts:
        units = text.split()
    chunks: list[str] = []
    per = len(units) / n_parts
    for k in range(n_parts):
        lo, hi = round(k * per), round((k + 1) * per)
        chunk = " ".join(units[lo:hi]).strip()
        chunks.append(chunk if chunk else text)
    return chunks


def generate_storyboard(library: AssetLibrary, config: GenerationConfig,
                        gateway: Gateway) -> Storyboard:
    """Plan every slide and animation for the whole video."""
    config.validate()
    indices = library.non_auxiliary_indices()
    if not indices:
        raise InconsistentInputs("no content sections to present")
    summaries = [library.summaries[i] for i in indices]

    selections = {i: select_content(library.summaries[i], library, config, gateway) for i in indices}
    selected_assets = {i: [library.assets[aid] for aid in selections[i]] for i in indices}
    estimates = {i: estimate_slide_count(library.summaries[i], selected_assets[i], config)
                 for i in indices}

    narration_on = config.functional.enable_narration
    if narration_on:
        budget = config.technical.target_duration_s * SPEAKING_RATE_WPS
        shares = _section_shares(summaries, budget)
        starved = [i for i in indices if shares[i] < MIN_SECTION_WORDS]
        if starved:
            raise BudgetInfeasible(
                f"target duration {config.technical.target_duration_s:g}s leaves sections "
                f"{starved} under {MIN_SECTION_WORDS} narration words; increase the duration "
                f"or drop sections"
            )
    else:
        shares = {s.section_index: float(s.word_count) for s in summaries}

    # ----- decide what animates -------------------------------------------
    anim_by_section: dict[int, list[Asset]] = {i: [] for i in indices}
    pinned_ids = set(config.functional.detailed_figure_ids)
    plans: dict[str, AnimationPlan] = {}
    if config.functional.enable_animations:
        mandatory: list[Asset] = []
        for asset_id in config.functional.detailed_figure_ids:
            asset = library.assets.get(asset_id)
            if asset is None:
                raise InconsistentInputs(f"config pins unknown asset {asset_id!r}")
            if asset.kind in ANIMATABLE_KINDS and asset.section_index in anim_by_section:
                mandatory.append(asset)
        chosen = list(mandatory)
        if not chosen:
            # default: animate the single most prominent figure in the video
            order = {sec: pos for pos, sec in enumerate(indices)}
            candidates = [
                a for i in indices for a in selected_assets[i] if a.kind in ANIMATABLE_KINDS
            ]
            candidates.sort(key=lambda a: (-visual_cost(a), order[a.section_index], a.seq))
            if candidates:
                chosen = [candidates[0]]
        for asset in chosen:
            summary = library.summaries[asset.section_index]
            plan = build_animation_plan(asset, summary.summary_text, gateway)
            anim_by_section[asset.section_index].append(asset)
            plans[plan.plan_id] = plan

        # budget feasibility: a section must afford its animations' narration
        # plus a floor for each remaining static slide
        for i in indices:
            sec_anims = anim_by_section[i]
            if not sec_anims:
                continue
            est = estimates[i]
            anim_words = sum(
                word_count(plans[f"plan-{a.asset_id}"].narration_text) for a in sec_anims
            )
            n_static = est - len(sec_anims)
            feasible = n_static >= 0 and (
                not narration_on or shares[i] - anim_words >= MIN_ITEM_WORDS * n_static
            )
            if feasible:
                continue
            if any(a.asset_id in pinned_ids for a in sec_anims):
                raise BudgetInfeasible(
                    f"section {i} cannot fit its requested animations within "
                    f"{shares[i]:.0f} narration words; increase the target duration"
                )
            logger.warning("section %d: dropping default animation, budget too tight", i)
            for asset in sec_anims:
                plans.pop(f"plan-{asset.asset_id}", None)
            anim_by_section[i] = []

    # ----- per-section items ----------------------------------------------
    style = {"color_scheme": config.technical.color_scheme,
             "font_family": config.technical.font_family}
    items: list[StoryboardItem] = []
    for i in indices:
        summary = library.summaries[i]
        sec_anims = anim_by_section[i]
        anim_words = sum(word_count(plans[f"plan-{a.asset_id}"].narration_text) for a in sec_anims)
        n_static = estimates[i] - len(sec_anims)
        static_items: list[StoryboardItem] = []
        if n_static > 0:
            per_slide_budget = max(1, int(round((shares[i] - (anim_words if narration_on else 0))
                                                / n_static)))
            requested = [{"slide_index": k, "word_budget": per_slide_budget} for k in range(n_static)]
            content = gateway.chat_json(
                task="write_slides",
                inputs={
                    "heading": summary.heading,
                    "summary_text": summary.summary_text,
                    "key_points": summary.key_points,
                    "items": requested,
                },
                schema=WRITE_SLIDES_SCHEMA,
            )
            slides = sorted(content["slides"], key=lambda s: s["slide_index"])[:n_static]
            animated_ids = {a.asset_id for a in sec_anims}
            placeable = [a for a in selected_assets[i] if a.asset_id not in animated_ids]
            if len(placeable) > MAX_ASSETS_PER_SLIDE * n_static:
                dropped = placeable[MAX_ASSETS_PER_SLIDE * n_static:]
                logger.warning(
                    "section %d: %d assets exceed slide capacity; dropping %s",
                    i, len(placeable), [a.asset_id for a in dropped],
                )
                placeable = placeable[: MAX_ASSETS_PER_SLIDE * n_static]
            per_slide_assets: list[list[Asset]] = [[] for _ in range(n_static)]
            for k, asset in enumerate(placeable):
                per_slide_assets[k % n_static].append(asset)
            for slide in slides:
                k = slide["slide_index"]
                parts = _split_for_overflow(slide["title"], slide["body_text"],
                                            per_slide_assets[k], style)
                if len(parts) > 1:
                    logger.warning("section %d slide %d split for overflow (%d parts)",
                                   i, k, len(parts))
                narrations = _distribute_narration(
                    slide["narration_text"] if narration_on else "", len(parts)
                )
                for (title, layout), narration in zip(parts, narrations):
                    static_items.append(StoryboardItem(
                        kind="static_slide",
                        section_index=i,
                        slide_index=len(static_items),
                        title=title,
                        narration_text=narration,
                        layout=layout,
                    ))
        for j, asset in enumerate(sec_anims):
            plan = plans[f"plan-{asset.asset_id}"]
            items_narration = plan.narration_text if narration_on else ""
            static_items.append(StoryboardItem(
                kind="animation",
                section_index=i,
                slide_index=len(static_items),
                title=f"{summary.heading} — animated",
                narration_text=items_narration,
                animation_plan_id=plan.plan_id,
            ))
        items.extend(static_items)

    board = Storyboard(doc_id=library.doc_id, config=config.to_json(), items=items, plans=plans)
    problems = validate_storyboard(board, narration_enabled=narration_on)
    if problems:
        raise PlanInvalid("; ".join(problems))
    logger.info("storyboard: %d items (%d animated) across %d sections",
                len(items), sum(1 for it in items if it.kind == "animation"), len(indices))
    return board


def save_storyboard(board: Storyboard, directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / "storyboard.json"
    jsonio.dump(board.to_json(), path)
    plan_dir = directory / "plans"
    if board.plans:
        plan_dir.mkdir(exist_ok=True)
    for plan_id, plan in sorted(board.plans.items()):
        jsonio.dump(plan.to_json(), plan_dir / f"{plan_id}.json")
    return path


def load_storyboard(directory: str | Path) -> Storyboard:
    directory = Path(directory)
    board = Storyboard.from_json(jsonio.load(directory / "storyboard.json"))
    plan_dir = directory / "plans"
    if plan_dir.is_dir():
        for path in sorted(plan_dir.glob("plan-*.json")):
            plan = AnimationPlan.from_json(jsonio.load(path))
            board.plans[plan.plan_id] = plan
    return board
