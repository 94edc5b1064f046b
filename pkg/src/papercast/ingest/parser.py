"""PDF structure extraction: sections, title, and visual asset crops.

The parser walks page text spans to find numbered headings by font size,
collects figure/table/equation anchors with their captions, and renders a
pixel crop for each asset.  Everything downstream works from the resulting
:class:`PaperDocument`.
"""

from __future__ import annotations

import hashlib
import logging
import re
from dataclasses import dataclass
from pathlib import Path

import pymupdf as fitz

from ..errors import EmptyDocument, UnreadablePdf
from .types import Asset, PaperDocument, Section

logger = logging.getLogger(__name__)

# Headings must exceed the dominant body size by this many points.
HEADING_SIZE_DELTA = 2.0
# Crops are rendered at this zoom so small figures keep legible pixels.
CROP_ZOOM = 2.0
# Words of surrounding prose retained as asset context.
CONTEXT_WORD_CAP = 300

_NUMBERED_HEADING = re.compile(r"^(\d+)[.:]?\s+\S")
_AUX_HEADINGS = (
    "abstract", "references", "acknowledgments", "acknowledgements",
    "appendix", "bibliography",
)
_CAPTION = re.compile(r"^(Figure|Fig\.?|Table)\s+(\d+)\s*[:.]", re.IGNORECASE)
_EQ_TAG = re.compile(r"\((\d+)\)\s*$")
_MATH_CHARS = set("=+−-×·∑∏∫√≤≥≈∈∂^_/\\{}[]()")


@dataclass
class Line:
    """One text line with layout info, the parser's working unit."""

    page: int
    text: str
    size: float
    bbox: tuple[float, float, float, float]
    page_width: float

    @property
    def center_x(self) -> float:
        return (self.bbox[0] + self.bbox[2]) / 2.0

    @property
    def is_centered(self) -> bool:
        return abs(self.center_x - self.page_width / 2.0) < self.page_width * 0.08


def _document_lines(doc: fitz.Document) -> list[Line]:
    lines: list[Line] = []
    for page_no, page in enumerate(doc):
        width = page.rect.width
        data = page.get_text("dict")
        for block in data.get("blocks", []):
            if block.get("type") != 0:
                continue
            for raw in block.get("lines", []):
                spans = raw.get("spans", [])
                text = "".join(s.get("text", "") for s in spans).strip()
                if not text:
                    continue
                size = max(s.get("size", 0.0) for s in spans)
                x0, y0, x1, y1 = raw["bbox"]
                lines.append(Line(page_no, text, size, (x0, y0, x1, y1), width))
    return lines


def _body_size(lines: list[Line]) -> float:
    """Dominant font size weighted by text length — the running-prose size."""
    weights: dict[float, int] = {}
    for line in lines:
        key = round(line.size, 1)
        weights[key] = weights.get(key, 0) + len(line.text)
    if not weights:
        return 0.0
    return max(weights.items(), key=lambda kv: kv[1])[0]


def _find_title(lines: list[Line]) -> str:
    first_page = [ln for ln in lines if ln.page == 0]
    if not first_page:
        return ""
    top_size = max(ln.size for ln in first_page)
    parts = [ln.text for ln in first_page if ln.size >= top_size - 0.1]
    return " ".join(parts).strip()


def _heading_of(line: Line, body: float) -> tuple[bool, bool, str]:
    """Return (is_heading, auxiliary, heading_text)."""
    if line.size < body + HEADING_SIZE_DELTA:
        return False, False, ""
    lowered = line.text.strip().lower().rstrip(":.")
    if lowered in _AUX_HEADINGS:
        return True, True, line.text.strip()
    if _NUMBERED_HEADING.match(line.text.strip()):
        return True, False, line.text.strip()
    return False, False, ""


def _looks_like_equation(line: Line, body: float) -> bool:
    if not _EQ_TAG.search(line.text):
        return False
    if not line.is_centered:
        return False
    if line.size > body + HEADING_SIZE_DELTA:
        return False
    stripped = _EQ_TAG.sub("", line.text)
    return sum(1 for c in stripped if c in _MATH_CHARS) >= 1


def _render_crop(doc: fitz.Document, page_no: int, rect: fitz.Rect, out_path: Path) -> tuple[int, int]:
    page = doc[page_no]
    clip = rect & page.rect
    if clip.is_empty or clip.width < 1 or clip.height < 1:
        clip = page.rect
    pix = page.get_pixmap(matrix=fitz.Matrix(CROP_ZOOM, CROP_ZOOM), clip=clip)
    pix.save(str(out_path))
    return pix.width, pix.height


def _context_window(lines: list[Line], anchor: int, cap: int = CONTEXT_WORD_CAP) -> str:
    """Caption line plus neighbouring prose, capped at `cap` words."""
    words: list[str] = lines[anchor].text.split()
    lo, hi = anchor - 1, anchor + 1
    while len(words) < cap and (lo >= 0 or hi < len(lines)):
        if hi < len(lines):
            words.extend(lines[hi].text.split())
            hi += 1
        if lo >= 0 and len(words) < cap:
            words = lines[lo].text.split() + words
            lo -= 1
    return " ".join(words[:cap])


def parse_document(pdf_path: str | Path, asset_dir: str | Path) -> PaperDocument:
    """Extract structure and asset crops from a PDF.

    ``asset_dir`` receives one PNG per discovered figure/table/equation.
    Raises :class:`UnreadablePdf` for corrupt or encrypted input and
    :class:`EmptyDocument` when no text can be extracted.
    """
    pdf_path = Path(pdf_path)
    asset_dir = Path(asset_dir)
    asset_dir.mkdir(parents=True, exist_ok=True)

    data = pdf_path.read_bytes()
    doc_id = hashlib.sha256(data).hexdigest()[:12]
    try:
        doc = fitz.open(stream=data, filetype="pdf")
    except Exception as exc:
        raise UnreadablePdf(f"cannot open {pdf_path.name}: {exc}") from exc
    if doc.needs_pass:
        raise UnreadablePdf(f"{pdf_path.name} is encrypted")

    lines = _document_lines(doc)
    if not any(ln.text for ln in lines):
        raise EmptyDocument(f"{pdf_path.name} contains no extractable text")

    body = _body_size(lines)
    title = _find_title(lines)

    # --- pass 1: caption + equation anchors -------------------------------
    # Each anchor remembers its line index so sections can be assigned later.
    counters = {"figure": 0, "table": 0, "equation": 0}
    prefix = {"figure": "fig", "table": "tab", "equation": "eq"}
    anchors: list[dict] = []
    consumed: set[int] = set()  # line indexes that are captions/equations

    for idx, line in enumerate(lines):
        is_heading, _, _ = _heading_of(line, body)
        if is_heading:
            continue
        m = _CAPTION.match(line.text)
        if m:
            kind = "table" if m.group(1).lower().startswith("tab") else "figure"
            counters[kind] += 1
            anchors.append({
                "kind": kind,
                "line_index": idx,
                "number": int(m.group(2)),
                "caption": line.text.strip(),
            })
            consumed.add(idx)
            continue
        if _looks_like_equation(line, body):
            counters["equation"] += 1
            anchors.append({
                "kind": "equation",
                "line_index": idx,
                "number": counters["equation"],
                "caption": line.text.strip(),
            })
            consumed.add(idx)

    # --- pass 2: crop rectangles ------------------------------------------
    def _graphics_rect(page_no: int, caption_box: fitz.Rect, above: bool) -> fitz.Rect:
        """Union of image/drawing boxes adjacent to a caption, vertically."""
        page = doc[page_no]
        boxes: list[fitz.Rect] = []
        for info in page.get_image_info():
            boxes.append(fitz.Rect(info["bbox"]))
        for drawing in page.get_drawings():
            boxes.append(fitz.Rect(drawing["rect"]))
        candidates = []
        for box in boxes:
            if box.is_empty or box.width < 4 or box.height < 4:
                continue
            if above and box.y1 <= caption_box.y0 + 2:
                candidates.append((caption_box.y0 - box.y1, box))
            elif not above and box.y0 >= caption_box.y1 - 2:
                candidates.append((box.y0 - caption_box.y1, box))
        if not candidates:
            return fitz.Rect()
        candidates.sort(key=lambda kv: kv[0])
        rect = fitz.Rect(candidates[0][1])
        # absorb boxes that overlap the growing region vertically
        for _, box in candidates[1:]:
            if box.y0 <= rect.y1 + 8 and box.y1 >= rect.y0 - 8:
                rect |= box
        return rect

    assets: dict[str, Asset] = {}
    per_kind_seq = {"figure": 0, "table": 0, "equation": 0}
    for anchor in anchors:
        idx = anchor["line_index"]
        line = lines[idx]
        page_no = line.page
        caption_box = fitz.Rect(line.bbox)
        kind = anchor["kind"]
        if kind == "figure":
            rect = _graphics_rect(page_no, caption_box, above=True)
        elif kind == "table":
            rect = _graphics_rect(page_no, caption_box, above=False)
        else:
            rect = fitz.Rect(caption_box)
            rect.x0 -= 4
            rect.x1 += 4
            rect.y0 -= 4
            rect.y1 += 4
        if rect.is_empty:
            # fall back to a band next to the caption
            band_h = 120.0
            if kind == "table":
                rect = fitz.Rect(caption_box.x0, caption_box.y1, caption_box.x1, caption_box.y1 + band_h)
            else:
                rect = fitz.Rect(caption_box.x0, caption_box.y0 - band_h, caption_box.x1, caption_box.y0)
        per_kind_seq[kind] += 1
        asset_id = f"{prefix[kind]}-{anchor['number']}"
        if asset_id in assets:
            asset_id = f"{prefix[kind]}-{anchor['number']}-{per_kind_seq[kind]}"
        out_path = asset_dir / f"{asset_id}.png"
        width_px, height_px = _render_crop(doc, page_no, rect, out_path)
        assets[asset_id] = Asset(
            asset_id=asset_id,
            kind=kind,
            image_path=str(out_path),
            caption=anchor["caption"],
            width_px=width_px,
            height_px=height_px,
            seq=idx,
            context_text=_context_window(lines, idx),
        )
        anchor["asset_id"] = asset_id

    # --- pass 3: sections --------------------------------------------------
    sections: list[Section] = []
    current: Section | None = None
    line_section: list[int] = [0] * len(lines)
    preamble: list[str] = []

    for idx, line in enumerate(lines):
        is_heading, auxiliary, heading_text = _heading_of(line, body)
        if is_heading:
            current = Section(index=len(sections), heading=heading_text, body_text="", auxiliary=auxiliary)
            sections.append(current)
            line_section[idx] = current.index
            continue
        if current is None:
            line_section[idx] = -1
            if line.size <= body + 0.5 and idx not in consumed:
                preamble.append(line.text)
            continue
        line_section[idx] = current.index
        if idx not in consumed and line.size <= body + 0.5:
            current.body_text += (" " if current.body_text else "") + line.text

    if not sections:
        sections = [Section(index=0, heading=title or "Document", body_text=" ".join(preamble))]
        line_section = [0] * len(lines)

    for anchor in anchors:
        sec_idx = line_section[anchor["line_index"]]
        if sec_idx < 0:
            sec_idx = 0
        asset = assets[anchor["asset_id"]]
        asset.section_index = sec_idx
        sections[sec_idx].asset_ids.append(asset.asset_id)

    for section in sections:
        section.asset_ids.sort(key=lambda aid: assets[aid].seq)

    doc.close()
    logger.info(
        "parsed %s: %d sections, %d assets (%s)",
        pdf_path.name, len(sections), len(assets),
        ", ".join(f"{k}={v}" for k, v in counters.items()),
    )
    return PaperDocument(
        doc_id=doc_id,
        title=title,
        sections=sections,
        source_path=str(pdf_path),
        assets=assets,
    )
