"""Presentation-file export of a storyboard's static slides.

The deck mirrors the authoritative layout model so the plan can be opened
in office software; rendering and all geometric tests run on the layout
model itself, not on this file.
"""

from __future__ import annotations

import logging
from pathlib import Path

from pptx import Presentation
from pptx.util import Emu, Pt

from ..ingest import Asset
from .storyboard import Storyboard

logger = logging.getLogger(__name__)

SLIDE_WIDTH_EMU = 12_192_000  # 13.333 in, 16:9
SLIDE_HEIGHT_EMU = 6_858_000  # 7.5 in

FONT_PT = {"title": 28, "body_text": 16, "caption": 11}


def emit_deck(board: Storyboard, assets: dict[str, Asset], out_path: str | Path) -> Path:
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    prs = Presentation()
    prs.slide_width = Emu(SLIDE_WIDTH_EMU)
    prs.slide_height = Emu(SLIDE_HEIGHT_EMU)
    blank = prs.slide_layouts[6]

    def emu_box(x: float, y: float, w: float, h: float) -> tuple[Emu, Emu, Emu, Emu]:
        return (
            Emu(int(x * SLIDE_WIDTH_EMU)),
            Emu(int(y * SLIDE_HEIGHT_EMU)),
            Emu(int(w * SLIDE_WIDTH_EMU)),
            Emu(int(h * SLIDE_HEIGHT_EMU)),
        )

    for item in board.items:
        slide = prs.slides.add_slide(blank)
        if item.kind == "animation":
            shape = slide.shapes.add_textbox(*emu_box(0.05, 0.01, 0.90, 0.10))
            shape.text_frame.text = item.title
            shape.text_frame.paragraphs[0].runs[0].font.size = Pt(FONT_PT["title"])
            note = slide.shapes.add_textbox(*emu_box(0.05, 0.40, 0.90, 0.20))
            note.text_frame.text = f"[animated sequence: {item.animation_plan_id}]"
            continue
        for box in item.layout or []:
            left, top, width, height = emu_box(box.x, box.y, box.w, box.h)
            if box.role == "figure":
                asset = assets.get(box.content_ref)
                if asset is not None and Path(asset.image_path).exists():
                    slide.shapes.add_picture(asset.image_path, left, top, width, height)
                continue
            if box.role == "caption":
                asset = assets.get(box.content_ref)
                text = asset.caption if asset is not None else box.content_ref
            else:
                text = box.content_ref
            shape = slide.shapes.add_textbox(left, top, width, height)
            frame = shape.text_frame
            frame.word_wrap = True
            frame.text = text
            size = FONT_PT.get(box.role, 14)
            for paragraph in frame.paragraphs:
                for run in paragraph.runs:
                    run.font.size = Pt(size)
    prs.save(str(out_path))
    logger.info("deck written to %s (%d slides)", out_path, len(board.items))
    return out_path
