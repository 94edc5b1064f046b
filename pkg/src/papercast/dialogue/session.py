"""Requirement-gathering dialogue over a parsed document.

A session starts from defaults and folds user turns into a
:class:`GenerationConfig`.  Turn processing is pure: it returns a new
state and a reply, leaving the input state untouched, so callers can
replay or branch a conversation freely.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field, replace

from ..errors import SessionFinalized
from ..gateway import Gateway
from ..ingest import AssetLibrary
from .config import (
    ALLOWED_RESOLUTIONS,
    DURATION_BOUNDS_S,
    FIELD_CATEGORIES,
    FPS_BOUNDS,
    GenerationConfig,
)

MAX_TURNS = 20

DIRECTIVE_SCHEMA = {
    "type": "object",
    "required": ["directives", "questions", "finalize"],
    "properties": {
        "directives": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["field", "value", "category"],
                "properties": {
                    "field": {"type": "string"},
                    "category": {"enum": ["functional", "technical"]},
                },
            },
        },
        "questions": {"type": "array", "items": {"type": "string"}},
        "finalize": {"type": "boolean"},
    },
}


@dataclass
class DialogueState:
    library: AssetLibrary
    config: GenerationConfig
    turns: list[dict] = field(default_factory=list)
    finalized: bool = False

    @property
    def user_turns(self) -> int:
        return sum(1 for t in self.turns if t["role"] == "user")

    def to_json(self) -> dict:
        return {
            "doc_id": self.config.doc_id,
            "turns": list(self.turns),
            "config": self.config.to_json(),
            "finalized": self.finalized,
        }


def start_session(library: AssetLibrary) -> DialogueState:
    return DialogueState(library=library, config=GenerationConfig(doc_id=library.doc_id))


def _apply_directive(config: GenerationConfig, library: AssetLibrary,
                     directive: dict, turn: int) -> tuple[bool, str]:
    """Apply one classified directive in place; returns (applied, message)."""
    name = directive.get("field", "")
    value = directive.get("value")
    category = FIELD_CATEGORIES.get(name)
    if category is None:
        return False, f"unknown setting {name!r}"

    if name == "target_duration_s":
        value = float(value)
        lo, hi = DURATION_BOUNDS_S
        if not lo <= value <= hi:
            return False, f"duration {value:g}s is outside the supported range {lo:g}-{hi:g}s"
        config.technical.target_duration_s = value
    elif name == "resolution":
        if value not in ALLOWED_RESOLUTIONS:
            return False, f"resolution {value!r} not supported ({', '.join(ALLOWED_RESOLUTIONS)})"
        config.technical.resolution = str(value)
    elif name == "fps":
        value = int(value)
        if not FPS_BOUNDS[0] <= value <= FPS_BOUNDS[1]:
            return False, f"fps {value} is outside the supported range {FPS_BOUNDS[0]}-{FPS_BOUNDS[1]}"
        config.technical.fps = value
    elif name == "font_family":
        config.technical.font_family = str(value)
    elif name == "color_scheme":
        config.technical.color_scheme = str(value)
    elif name == "enable_animations":
        config.functional.enable_animations = bool(value)
    elif name == "enable_narration":
        config.functional.enable_narration = bool(value)
    elif name == "audience":
        config.functional.audience = str(value)
    elif name == "detailed_figure_ids":
        if value not in library.assets:
            return False, f"the document has no asset {value!r}"
        if value not in config.functional.detailed_figure_ids:
            config.functional.detailed_figure_ids.append(str(value))
    elif name == "emphasis_sections":
        index = int(value)
        summary = library.summaries.get(index)
        if summary is None or summary.auxiliary:
            return False, f"section {index} is not available for emphasis"
        if index not in config.functional.emphasis_sections:
            config.functional.emphasis_sections.append(index)
    config.provenance.append({"field": name, "value": value, "turn": turn, "category": category})
    return True, f"{name} = {value}"


def process_turn(state: DialogueState, user_text: str, gateway: Gateway) -> tuple[DialogueState, str]:
    """Fold one user turn into a fresh state; returns (new_state, reply)."""
    if state.finalized:
        raise SessionFinalized("configuration already finalized; start a new session to change it")

    config = copy.deepcopy(state.config)
    turns = list(state.turns) + [{"role": "user", "text": user_text}]
    turn_index = sum(1 for t in turns if t["role"] == "user")

    content = gateway.chat_json(
        task="classify_directives",
        inputs={"user_text": user_text},
        schema=DIRECTIVE_SCHEMA,
    )

    applied: list[str] = []
    rejected: list[str] = []
    for directive in content["directives"]:
        ok, message = _apply_directive(config, state.library, directive, turn_index)
        (applied if ok else rejected).append(message)

    finalized = bool(content["finalize"])
    parts: list[str] = []
    if applied:
        parts.append("Updated: " + "; ".join(applied) + ".")
    if rejected:
        parts.append("Not applied: " + "; ".join(rejected) + ".")
    parts.extend(content["questions"])
    if finalized:
        parts.append("Settings are locked in; generation can start.")
    if not finalized and turn_index >= MAX_TURNS:
        finalized = True
        parts.append(f"Turn limit of {MAX_TURNS} reached; proceeding with the current settings.")
    if not parts:
        parts.append("No changes made.")
    reply = " ".join(parts)

    turns.append({"role": "assistant", "text": reply})
    new_state = replace(state, config=config, turns=turns, finalized=finalized)
    return new_state, reply


def finalize_config(state: DialogueState) -> GenerationConfig:
    """Validate and return the session's configuration."""
    config = copy.deepcopy(state.config)
    config.validate()
    return config
