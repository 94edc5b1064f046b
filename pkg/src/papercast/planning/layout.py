"""Deterministic slide layout under aspect-ratio placement rules.

All coordinates are canvas fractions in [0, 1] on a 16:9 canvas.  A
figure's placement depends only on its width class: wide figures take a
full-width bottom band, squarish ones a 0.45-wide right column, tall ones
a 0.30-wide right column.  Figure boxes are then shrunk inside their slot
so the *pixel* box matches the asset's aspect ratio exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import Overflow
from ..ingest import Asset
from ..textutil import word_count
from .selection import TALL_MAX_RATIO, WIDE_MIN_RATIO

CANVAS_RATIO = 16.0 / 9.0
BOX_ROLES = ("title", "body_text", "figure", "caption")

TITLE_BOX = (0.05, 0.01, 0.90, 0.10)
CONTENT_TOP = 0.15

FULL_TEXT_BOX = (0.05, CONTENT_TOP, 0.90, 0.78)
WIDE_FIGURE_SLOT = (0.05, 0.50, 0.90, 0.45)
WIDE_TEXT_BOX = (0.05, CONTENT_TOP, 0.90, 0.33)
MID_COLUMN = (0.54, CONTENT_TOP, 0.45, 0.75)
MID_TEXT_BOX = (0.04, CONTENT_TOP, 0.50, 0.75)
TALL_COLUMN = (0.66, CONTENT_TOP, 0.30, 0.75)
TALL_TEXT_BOX = (0.04, CONTENT_TOP, 0.58, 0.75)

CAPTION_HEIGHT = 0.04
CAPTION_GAP = 0.005

# words that fit the full-size text box at minimum font; scales by area
FULL_BOX_CAPACITY_WORDS = 240
MAX_OVERLAP_FRACTION = 0.02

COLOR_SCHEMES = {
    "light": {"background": "#ffffff", "foreground": "#16161d", "accent": "#1f6feb", "panel": "#eef1f5"},
    "dark": {"background": "#14161a", "foreground": "#e8e8ea", "accent": "#58a6ff", "panel": "#22252b"},
    "ocean": {"background": "#eaf4f6", "foreground": "#0c3547", "accent": "#0e7490", "panel": "#d3e9ee"},
    "slate": {"background": "#f1f2f4", "foreground": "#212733", "accent": "#475569", "panel": "#dfe3e8"},
    "warm": {"background": "#fdf6ec", "foreground": "#3a2c1e", "accent": "#c2520f", "panel": "#f4e8d4"},
}


@dataclass
class LayoutBox:
    role: str
    x: float
    y: float
    w: float
    h: float
    content_ref: str = ""

    def __post_init__(self):
        if self.role not in BOX_ROLES:
            raise ValueError(f"unknown layout role {self.role!r}")

    @property
    def area(self) -> float:
        return self.w * self.h

    def to_json(self) -> dict:
        return {"role": self.role, "x": self.x, "y": self.y, "w": self.w, "h": self.h,
                "content_ref": self.content_ref}

    @classmethod
    def from_json(cls, doc: dict) -> "LayoutBox":
        return cls(role=doc["role"], x=doc["x"], y=doc["y"], w=doc["w"], h=doc["h"],
                   content_ref=doc.get("content_ref", ""))


def text_capacity_words(box_w: float, box_h: float) -> int:
    """How many body words fit a text box of the given size at minimum font."""
    full_area = FULL_TEXT_BOX[2] * FULL_TEXT_BOX[3]
    return int(math.floor(box_w * box_h / full_area * FULL_BOX_CAPACITY_WORDS))


def fit_figure_box(slot: tuple[float, float, float, float], aspect_ratio: float,
                   valign: str = "top") -> tuple[float, float, float, float]:
    """Largest box inside `slot` whose *pixel* aspect equals `aspect_ratio`.

    Normalized width/height relate to pixels through the canvas ratio:
    a normalized box (w, h) renders at aspect (w / h) * CANVAS_RATIO.
    """
    sx, sy, sw, sh = slot
    w = min(sw, sh * aspect_ratio / CANVAS_RATIO)
    h = w * CANVAS_RATIO / aspect_ratio
    if h > sh:
        h = sh
        w = h * aspect_ratio / CANVAS_RATIO
    x = sx + (sw - w) / 2.0
    if valign == "center":
        y = sy + (sh - h) / 2.0
    else:
        y = sy
    return (x, y, w, h)


def _width_class(aspect_ratio: float) -> str:
    if aspect_ratio >= WIDE_MIN_RATIO:
        return "wide"
    if aspect_ratio >= TALL_MAX_RATIO:
        return "mid"
    return "tall"


def _caption_box(fig: tuple[float, float, float, float], asset_id: str) -> LayoutBox | None:
    x, y, w, h = fig
    cy = y + h + CAPTION_GAP
    if cy + CAPTION_HEIGHT > 0.995:
        return None
    return LayoutBox(role="caption", x=x, y=cy, w=w, h=CAPTION_HEIGHT, content_ref=asset_id)


def layout_slide(title: str, text: str, assets: list[Asset], style: dict | None = None) -> list[LayoutBox]:
    """Produce the box list for one static slide.

    Raises :class:`Overflow` when `text` cannot fit the body box even at
    minimum font size — the caller must split the slide.
    """
    if len(assets) > 2:
        raise ValueError("a slide holds at most two visuals")

    boxes = [LayoutBox(role="title", x=TITLE_BOX[0], y=TITLE_BOX[1], w=TITLE_BOX[2],
                       h=TITLE_BOX[3], content_ref=title)]

    if not assets:
        text_box = FULL_TEXT_BOX
    elif len(assets) == 1:
        klass = _width_class(assets[0].aspect_ratio)
        if klass == "wide":
            text_box = WIDE_TEXT_BOX
            fig = fit_figure_box(WIDE_FIGURE_SLOT, assets[0].aspect_ratio, valign="center")
        elif klass == "mid":
            text_box = MID_TEXT_BOX
            fig = fit_figure_box(MID_COLUMN, assets[0].aspect_ratio)
        else:
            text_box = TALL_TEXT_BOX
            fig = fit_figure_box(TALL_COLUMN, assets[0].aspect_ratio)
        boxes.append(LayoutBox(role="figure", x=fig[0], y=fig[1], w=fig[2], h=fig[3],
                               content_ref=assets[0].asset_id))
        caption = _caption_box(fig, assets[0].asset_id)
        if caption:
            boxes.append(caption)
    else:
        # two visuals stack in the mid-width right column
        text_box = MID_TEXT_BOX
        cx, cy, cw, ch = MID_COLUMN
        half = (ch - 2 * (CAPTION_HEIGHT + 2 * CAPTION_GAP)) / 2.0
        for i, asset in enumerate(assets):
            slot = (cx, cy + i * (half + CAPTION_HEIGHT + 2 * CAPTION_GAP), cw, half)
            fig = fit_figure_box(slot, asset.aspect_ratio)
            boxes.append(LayoutBox(role="figure", x=fig[0], y=fig[1], w=fig[2], h=fig[3],
                                   content_ref=asset.asset_id))
            caption = _caption_box(fig, asset.asset_id)
            if caption:
                boxes.append(caption)

    capacity = text_capacity_words(text_box[2], text_box[3])
    n_words = word_count(text)
    if n_words > capacity:
        raise Overflow(f"{n_words} words exceed the {capacity}-word capacity of this layout")
    boxes.insert(1, LayoutBox(role="body_text", x=text_box[0], y=text_box[1],
                              w=text_box[2], h=text_box[3], content_ref=text))
    return boxes


def overlap_area(a: LayoutBox, b: LayoutBox) -> float:
    w = min(a.x + a.w, b.x + b.w) - max(a.x, b.x)
    h = min(a.y + a.h, b.y + b.h) - max(a.y, b.y)
    return max(0.0, w) * max(0.0, h)


def validate_layout(boxes: list[LayoutBox], eps: float = 1e-9) -> list[str]:
    """Geometric invariant check; returns a list of violations (empty = ok)."""
    problems = []
    for box in boxes:
        if box.x < -eps or box.y < -eps or box.x + box.w > 1 + eps or box.y + box.h > 1 + eps:
            problems.append(f"{box.role} box out of canvas: ({box.x:.3f},{box.y:.3f},{box.w:.3f},{box.h:.3f})")
        if box.w <= 0 or box.h <= 0:
            problems.append(f"{box.role} box degenerate")
    for i, a in enumerate(boxes):
        for b in boxes[i + 1:]:
            if overlap_area(a, b) > MAX_OVERLAP_FRACTION + eps:
                problems.append(f"{a.role} and {b.role} overlap beyond {MAX_OVERLAP_FRACTION:.0%}")
    return problems
