"""Document ingestion: PDF parsing, enrichment, and the asset library."""

from .enrich import describe_assets, summarize_sections
from .library import build_library, document_to_markdown, load_library, save_library
from .parser import parse_document
from .types import (
    ASSET_KINDS,
    LIBRARY_SCHEMA,
    SCHEMA_VERSION,
    Asset,
    AssetLibrary,
    ChapterSummary,
    PaperDocument,
    Section,
)

__all__ = [
    "ASSET_KINDS",
    "LIBRARY_SCHEMA",
    "SCHEMA_VERSION",
    "Asset",
    "AssetLibrary",
    "ChapterSummary",
    "PaperDocument",
    "Section",
    "build_library",
    "describe_assets",
    "document_to_markdown",
    "load_library",
    "parse_document",
    "save_library",
    "summarize_sections",
]
