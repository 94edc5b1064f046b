"""Domain types for parsed documents and the asset library."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InconsistentInputs
from ..textutil import word_count

SCHEMA_VERSION = "1.0"
ASSET_KINDS = ("figure", "table", "equation")


@dataclass
class Section:
    index: int
    heading: str
    body_text: str
    auxiliary: bool = False
    asset_ids: list[str] = field(default_factory=list)

    @property
    def word_count(self) -> int:
        return word_count(self.body_text)


@dataclass
class Asset:
    asset_id: str
    kind: str
    image_path: str
    caption: str
    width_px: int
    height_px: int
    section_index: int = 0
    seq: int = 0
    context_description: str = ""
    aspect_ratio: float = 0.0
    # parser-side context window; not serialized, excluded from equality
    context_text: str = field(default="", compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in ASSET_KINDS:
            raise ValueError(f"unknown asset kind {self.kind!r}")
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValueError("asset dimensions must be positive")
        if not self.aspect_ratio:
            self.aspect_ratio = self.width_px / self.height_px

    def to_json(self) -> dict:
        return {
            "asset_id": self.asset_id,
            "kind": self.kind,
            "image_path": self.image_path,
            "caption": self.caption,
            "context_description": self.context_description,
            "width_px": self.width_px,
            "height_px": self.height_px,
            "aspect_ratio": self.aspect_ratio,
            "section_index": self.section_index,
            "seq": self.seq,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Asset":
        return cls(
            asset_id=doc["asset_id"],
            kind=doc["kind"],
            image_path=doc["image_path"],
            caption=doc["caption"],
            width_px=doc["width_px"],
            height_px=doc["height_px"],
            section_index=doc.get("section_index", 0),
            seq=doc.get("seq", 0),
            context_description=doc.get("context_description", ""),
            aspect_ratio=doc.get("aspect_ratio", 0.0),
        )


@dataclass
class PaperDocument:
    doc_id: str
    title: str
    sections: list[Section]
    source_path: str
    assets: dict[str, Asset] = field(default_factory=dict)

    def section_assets(self, index: int) -> list[Asset]:
        found = [a for a in self.assets.values() if a.section_index == index]
        return sorted(found, key=lambda a: a.seq)

    @property
    def full_text(self) -> str:
        return "\n\n".join(s.body_text for s in self.sections if s.body_text)


@dataclass
class ChapterSummary:
    """Per-section summary record; also carries the section's metadata so
    the library is self-contained for planning."""

    section_index: int
    summary_text: str
    key_points: list[str]
    heading: str = ""
    auxiliary: bool = False
    source_word_count: int = 0
    asset_ids: list[str] = field(default_factory=list)

    @property
    def word_count(self) -> int:
        return word_count(self.summary_text)

    def to_json(self) -> dict:
        return {
            "section_index": self.section_index,
            "summary_text": self.summary_text,
            "word_count": self.word_count,
            "key_points": list(self.key_points),
            "heading": self.heading,
            "auxiliary": self.auxiliary,
            "source_word_count": self.source_word_count,
            "asset_ids": list(self.asset_ids),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ChapterSummary":
        return cls(
            section_index=doc["section_index"],
            summary_text=doc["summary_text"],
            key_points=list(doc.get("key_points", [])),
            heading=doc.get("heading", ""),
            auxiliary=doc.get("auxiliary", False),
            source_word_count=doc.get("source_word_count", 0),
            asset_ids=list(doc.get("asset_ids", [])),
        )


LIBRARY_SCHEMA = {
    "type": "object",
    "required": ["doc_id", "schema_version", "title", "summaries", "assets"],
    "additionalProperties": False,
    "properties": {
        "doc_id": {"type": "string", "minLength": 1},
        "schema_version": {"const": SCHEMA_VERSION},
        "title": {"type": "string"},
        "summaries": {
            "type": "object",
            "patternProperties": {
                r"^\d+$": {
                    "type": "object",
                    "required": [
                        "section_index", "summary_text", "word_count", "key_points",
                        "heading", "auxiliary", "source_word_count", "asset_ids",
                    ],
                    "properties": {
                        "section_index": {"type": "integer", "minimum": 0},
                        "summary_text": {"type": "string"},
                        "word_count": {"type": "integer", "minimum": 0},
                        "key_points": {
                            "type": "array", "items": {"type": "string"}, "minItems": 1, "maxItems": 6,
                        },
                        "heading": {"type": "string"},
                        "auxiliary": {"type": "boolean"},
                        "source_word_count": {"type": "integer", "minimum": 0},
                        "asset_ids": {"type": "array", "items": {"type": "string"}},
                    },
                }
            },
            "additionalProperties": False,
        },
        "assets": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": [
                    "asset_id", "kind", "image_path", "caption", "context_description",
                    "width_px", "height_px", "aspect_ratio",
                ],
                "properties": {
                    "asset_id": {"type": "string"},
                    "kind": {"enum": list(ASSET_KINDS)},
                    "image_path": {"type": "string"},
                    "caption": {"type": "string"},
                    "context_description": {"type": "string", "minLength": 1},
                    "width_px": {"type": "integer", "exclusiveMinimum": 0},
                    "height_px": {"type": "integer", "exclusiveMinimum": 0},
                    "aspect_ratio": {"type": "number", "exclusiveMinimum": 0},
                    "section_index": {"type": "integer", "minimum": 0},
                    "seq": {"type": "integer", "minimum": 0},
                },
            },
        },
    },
}


@dataclass
class AssetLibrary:
    doc_id: str
    title: str
    summaries: dict[int, ChapterSummary]
    assets: dict[str, Asset]
    schema_version: str = SCHEMA_VERSION

    def section_assets(self, index: int) -> list[Asset]:
        summary = self.summaries.get(index)
        if summary is None:
            return []
        return [self.assets[aid] for aid in summary.asset_ids]

    def non_auxiliary_indices(self) -> list[int]:
        return sorted(i for i, s in self.summaries.items() if not s.auxiliary)

    def validate(self) -> None:
        for index, summary in self.summaries.items():
            if index != summary.section_index:
                raise InconsistentInputs(f"summary keyed {index} claims section {summary.section_index}")
            for asset_id in summary.asset_ids:
                if asset_id not in self.assets:
                    raise InconsistentInputs(
                        f"section {index} references unknown asset {asset_id!r}"
                    )
            if summary.source_word_count > 0 and summary.word_count > summary.source_word_count:
                raise InconsistentInputs(
                    f"summary for section {index} is longer than the section itself"
                )
        for asset in self.assets.values():
            if abs(asset.aspect_ratio - asset.width_px / asset.height_px) >= 1e-6:
                raise InconsistentInputs(f"asset {asset.asset_id} aspect_ratio inconsistent")
            if not asset.context_description:
                raise InconsistentInputs(f"asset {asset.asset_id} has no description")

    def to_json(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "schema_version": self.schema_version,
            "title": self.title,
            "summaries": {str(i): s.to_json() for i, s in self.summaries.items()},
            "assets": {aid: a.to_json() for aid, a in self.assets.items()},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "AssetLibrary":
        return cls(
            doc_id=doc["doc_id"],
            title=doc.get("title", ""),
            summaries={int(k): ChapterSummary.from_json(v) for k, v in doc["summaries"].items()},
            assets={k: Asset.from_json(v) for k, v in doc["assets"].items()},
            schema_version=doc["schema_version"],
        )
