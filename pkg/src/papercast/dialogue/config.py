"""Generation settings collected from the requirement dialogue.

Settings split into *functional* requirements (what the video should say
and show) and a *technical* spec (how it is produced).  Every field has a
default, so an empty dialogue still yields a valid configuration.
"""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass, field

from ..errors import ValidationFailure

AUDIENCES = ("general", "graduate", "expert")
COLOR_SCHEMES = ("light", "dark", "ocean", "slate", "warm")
ALLOWED_RESOLUTIONS = ("1280x720", "1920x1080")
DURATION_BOUNDS_S = (60.0, 1800.0)
FPS_BOUNDS = (10, 60)

# routing table: which half of the config each dialogue directive lands in
FIELD_CATEGORIES = {
    "enable_animations": "functional",
    "enable_narration": "functional",
    "audience": "functional",
    "detailed_figure_ids": "functional",
    "emphasis_sections": "functional",
    "target_duration_s": "technical",
    "resolution": "technical",
    "fps": "technical",
    "font_family": "technical",
    "color_scheme": "technical",
}


@dataclass
class FunctionalRequirements:
    enable_animations: bool = True
    enable_narration: bool = True
    audience: str = "general"
    detailed_figure_ids: list[str] = field(default_factory=list)
    emphasis_sections: list[int] = field(default_factory=list)


@dataclass
class TechnicalSpec:
    target_duration_s: float = 300.0
    resolution: str = "1280x720"
    fps: int = 30
    font_family: str = "DejaVu Sans"
    color_scheme: str = "light"


@dataclass
class GenerationConfig:
    doc_id: str
    functional: FunctionalRequirements = field(default_factory=FunctionalRequirements)
    technical: TechnicalSpec = field(default_factory=TechnicalSpec)
    # one record per applied directive: field, value, turn index, category
    provenance: list[dict] = field(default_factory=list)

    @property
    def width(self) -> int:
        return int(self.technical.resolution.split("x")[0])

    @property
    def height(self) -> int:
        return int(self.technical.resolution.split("x")[1])

    def violations(self) -> list[str]:
        out: list[str] = []
        t, f = self.technical, self.functional
        lo, hi = DURATION_BOUNDS_S
        if not lo <= t.target_duration_s <= hi:
            out.append(f"target_duration_s must be within [{lo:g}, {hi:g}] seconds, got {t.target_duration_s:g}")
        if not re.fullmatch(r"\d+x\d+", t.resolution) or t.resolution not in ALLOWED_RESOLUTIONS:
            out.append(f"resolution must be one of {', '.join(ALLOWED_RESOLUTIONS)}, got {t.resolution!r}")
        if not FPS_BOUNDS[0] <= t.fps <= FPS_BOUNDS[1]:
            out.append(f"fps must be within [{FPS_BOUNDS[0]}, {FPS_BOUNDS[1]}], got {t.fps}")
        if f.audience not in AUDIENCES:
            out.append(f"audience must be one of {', '.join(AUDIENCES)}, got {f.audience!r}")
        if t.color_scheme not in COLOR_SCHEMES:
            out.append(f"color_scheme must be one of {', '.join(COLOR_SCHEMES)}, got {t.color_scheme!r}")
        return out

    def validate(self) -> None:
        problems = self.violations()
        if problems:
            raise ValidationFailure(problems)

    def to_json(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "functional": asdict(self.functional),
            "technical": asdict(self.technical),
            "provenance": list(self.provenance),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "GenerationConfig":
        return cls(
            doc_id=doc["doc_id"],
            functional=FunctionalRequirements(**doc.get("functional", {})),
            technical=TechnicalSpec(**doc.get("technical", {})),
            provenance=list(doc.get("provenance", [])),
        )


CONFIG_SCHEMA = {
    "type": "object",
    "required": ["doc_id", "functional", "technical"],
    "properties": {
        "doc_id": {"type": "string", "minLength": 1},
        "functional": {
            "type": "object",
            "properties": {
                "enable_animations": {"type": "boolean"},
                "enable_narration": {"type": "boolean"},
                "audience": {"enum": list(AUDIENCES)},
                "detailed_figure_ids": {"type": "array", "items": {"type": "string"}},
                "emphasis_sections": {"type": "array", "items": {"type": "integer"}},
            },
        },
        "technical": {
            "type": "object",
            "properties": {
                "target_duration_s": {"type": "number"},
                "resolution": {"type": "string", "pattern": r"^\d+x\d+$"},
                "fps": {"type": "integer"},
                "font_family": {"type": "string"},
                "color_scheme": {"enum": list(COLOR_SCHEMES)},
            },
        },
        "provenance": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["field", "value", "turn", "category"],
            },
        },
    },
}
