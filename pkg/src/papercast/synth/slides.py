"""Static slide rendering from the authoritative layout model."""

from __future__ import annotations

import logging
from pathlib import Path

from PIL import Image, ImageDraw

from ..errors import RenderFailure
from ..fonts import load_font
from ..ingest import Asset
from ..planning import COLOR_SCHEMES, LayoutBox, Storyboard, StoryboardItem

logger = logging.getLogger(__name__)

TITLE_FONT_FRACTION = 0.055
BODY_FONT_FRACTION = 0.034
MIN_BODY_FONT_FRACTION = 0.022
CAPTION_FONT_FRACTION = 0.024
LINE_SPACING = 1.25


def _hex_rgb(value: str) -> tuple[int, int, int]:
    value = value.lstrip("#")
    return tuple(int(value[i:i + 2], 16) for i in (0, 2, 4))


def _wrap(draw: ImageDraw.ImageDraw, text: str, font, max_width: int) -> list[str]:
    lines: list[str] = []
    current = ""
    for word in text.split():
        trial = f"{current} {word}".strip()
        if draw.textlength(trial, font=font) <= max_width or not current:
            current = trial
        else:
            lines.append(current)
            current = word
    if current:
        lines.append(current)
    return lines


def _draw_text_block(draw: ImageDraw.ImageDraw, box_px: tuple[int, int, int, int],
                     text: str, color, height: int, *,
                     start_fraction: float, min_fraction: float,
                     font_family: str, bold: bool = False) -> None:
    """Wrap text into the box, stepping the font down until it fits."""
    x, y, w, h = box_px
    fraction = start_fraction
    while True:
        font = load_font(int(fraction * height), family=font_family, bold=bold)
        lines = _wrap(draw, text, font, w)
        line_h = int(fraction * height * LINE_SPACING)
        if len(lines) * line_h <= h or fraction <= min_fraction:
            break
        fraction *= 0.88
    for i, line in enumerate(lines):
        ty = y + i * line_h
        if ty + line_h > y + h + line_h // 3:
            break
        draw.text((x, ty), line, font=font, fill=color)


def render_slide(item: StoryboardItem, assets: dict[str, Asset], style: dict,
                 resolution: tuple[int, int]) -> Image.Image:
    """Render one static item; pure function of its inputs."""
    if item.kind != "static_slide" or not item.layout:
        raise RenderFailure(f"item {item.section_index}/{item.slide_index} is not a static slide")
    width, height = resolution
    scheme = COLOR_SCHEMES.get(style.get("color_scheme", "light"), COLOR_SCHEMES["light"])
    font_family = style.get("font_family", "DejaVu Sans")
    bg = _hex_rgb(scheme["background"])
    fg = _hex_rgb(scheme["foreground"])
    accent = _hex_rgb(scheme["accent"])

    image = Image.new("RGB", resolution, bg)
    draw = ImageDraw.Draw(image)

    def to_px(box: LayoutBox) -> tuple[int, int, int, int]:
        return (round(box.x * width), round(box.y * height),
                round(box.w * width), round(box.h * height))

    for box in item.layout:
        x, y, w, h = to_px(box)
        if box.role == "title":
            draw.rectangle([x, y + h, x + w, y + h + max(2, height // 240)], fill=accent)
            _draw_text_block(draw, (x, y, w, h), box.content_ref, fg, height,
                             start_fraction=TITLE_FONT_FRACTION,
                             min_fraction=TITLE_FONT_FRACTION * 0.6,
                             font_family=font_family, bold=True)
        elif box.role == "body_text":
            _draw_text_block(draw, (x, y, w, h), box.content_ref, fg, height,
                             start_fraction=BODY_FONT_FRACTION,
                             min_fraction=MIN_BODY_FONT_FRACTION,
                             font_family=font_family)
        elif box.role == "figure":
            asset = assets.get(box.content_ref)
            if asset is None:
                raise RenderFailure(f"layout references unknown asset {box.content_ref!r}")
            try:
                art = Image.open(asset.image_path).convert("RGB")
            except OSError as exc:
                raise RenderFailure(f"cannot read {asset.image_path}: {exc}") from exc
            scale = min(w / art.width, h / art.height)
            fitted = art.resize((max(1, round(art.width * scale)),
                                 max(1, round(art.height * scale))))
            ox = x + (w - fitted.width) // 2
            oy = y + (h - fitted.height) // 2
            image.paste(fitted, (ox, oy))
        elif box.role == "caption":
            asset = assets.get(box.content_ref)
            text = asset.caption if asset is not None else box.content_ref
            _draw_text_block(draw, (x, y, w, h), text, accent, height,
                             start_fraction=CAPTION_FONT_FRACTION,
                             min_fraction=CAPTION_FONT_FRACTION * 0.7,
                             font_family=font_family)
    return image


def render_slides(board: Storyboard, assets: dict[str, Asset], style: dict,
                  resolution: tuple[int, int], out_dir: str | Path) -> dict[tuple[int, int], Path]:
    """Render every static item; returns (section, slide) → PNG path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rendered: dict[tuple[int, int], Path] = {}
    for item in board.items:
        if item.kind != "static_slide":
            continue
        image = render_slide(item, assets, style, resolution)
        path = out_dir / f"slide-{item.section_index:02d}-{item.slide_index:02d}.png"
        image.save(path)
        rendered[(item.section_index, item.slide_index)] = path
    logger.info("rendered %d slides at %dx%d", len(rendered), *resolution)
    return rendered
