"""TrueType font lookup shared by the slide renderer and animation backend."""

from __future__ import annotations

import functools
import logging
from pathlib import Path

from PIL import ImageFont

logger = logging.getLogger(__name__)

FONT_DIRS = (
    "/usr/share/fonts",
    "/usr/local/share/fonts",
    "~/.fonts",
)

# preference order when the requested family cannot be found
FALLBACK_STEMS = ("DejaVuSans", "LiberationSans-Regular", "Arial", "FreeSans")


@functools.lru_cache(maxsize=1)
def _font_files() -> dict[str, Path]:
    found: dict[str, Path] = {}
    for root in FONT_DIRS:
        base = Path(root).expanduser()
        if not base.is_dir():
            continue
        for path in base.rglob("*.ttf"):
            found.setdefault(path.stem.lower(), path)
        for path in base.rglob("*.otf"):
            found.setdefault(path.stem.lower(), path)
    return found


@functools.lru_cache(maxsize=64)
def load_font(size: int, family: str = "DejaVu Sans", bold: bool = False):
    """Best-effort scalable font; falls back to PIL's built-in default."""
    size = max(6, int(size))
    files = _font_files()
    stems = []
    compact = family.replace(" ", "")
    if bold:
        stems += [f"{compact}-Bold", f"{compact}Bold", f"{family}-Bold"]
    stems += [compact, family]
    if bold:
        stems += [f"{s}-Bold" for s in FALLBACK_STEMS]
    stems += list(FALLBACK_STEMS)
    for stem in stems:
        path = files.get(stem.lower())
        if path is not None:
            try:
                return ImageFont.truetype(str(path), size=size)
            except OSError:
                continue
    logger.warning("no scalable font found for %r; using built-in default", family)
    try:
        return ImageFont.load_default(size=size)
    except TypeError:
        return ImageFont.load_default()
