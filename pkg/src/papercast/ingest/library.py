"""Asset library assembly and persistence."""

from __future__ import annotations

import logging
import os
from pathlib import Path

import jsonschema

from .. import jsonio
from ..errors import InconsistentInputs
from ..gateway import Gateway
from .enrich import describe_assets, summarize_sections
from .types import LIBRARY_SCHEMA, AssetLibrary, PaperDocument

logger = logging.getLogger(__name__)


def build_library(document: PaperDocument, gateway: Gateway) -> AssetLibrary:
    """Summarize sections, describe assets, and bundle the result."""
    describe_assets(document, gateway)
    summaries = summarize_sections(document, gateway)
    library = AssetLibrary(
        doc_id=document.doc_id,
        title=document.title,
        summaries=summaries,
        assets=dict(document.assets),
    )
    library.validate()
    logger.info(
        "library for %s: %d summaries, %d assets", document.doc_id,
        len(library.summaries), len(library.assets),
    )
    return library


def save_library(library: AssetLibrary, path: str | Path) -> None:
    """Write the library with asset paths relative to the file's directory.

    Relative paths keep the artifact byte-stable across workspaces; the
    loader resolves them back against the file location.
    """
    path = Path(path)
    base = path.resolve().parent
    doc = library.to_json()
    for entry in doc["assets"].values():
        image = Path(entry["image_path"])
        if image.is_absolute():
            entry["image_path"] = os.path.relpath(image.resolve(), base).replace(os.sep, "/")
    jsonschema.validate(doc, LIBRARY_SCHEMA)
    jsonio.dump(doc, path)


def load_library(path: str | Path) -> AssetLibrary:
    path = Path(path)
    doc = jsonio.load(path)
    try:
        jsonschema.validate(doc, LIBRARY_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InconsistentInputs(f"library file invalid: {exc.message}") from exc
    library = AssetLibrary.from_json(doc)
    base = path.resolve().parent
    for asset in library.assets.values():
        if not Path(asset.image_path).is_absolute():
            asset.image_path = os.path.normpath(str(base / asset.image_path))
    library.validate()
    return library


def document_to_markdown(document: PaperDocument) -> str:
    """Human-readable dump of the parsed document for inspection."""
    out = [f"# {document.title}".rstrip(), ""]
    for section in document.sections:
        marker = " *(auxiliary)*" if section.auxiliary else ""
        out.append(f"## {section.heading}{marker}")
        out.append("")
        if section.body_text:
            out.append(section.body_text)
            out.append("")
        for asset in document.section_assets(section.index):
            out.append(f"- `{asset.asset_id}` ({asset.kind}, {asset.width_px}x{asset.height_px}): {asset.caption}")
        if section.asset_ids:
            out.append("")
    return "\n".join(out).rstrip() + "\n"
