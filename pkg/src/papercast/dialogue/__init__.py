"""Interactive requirement gathering and the generation configuration."""

from .config import (
    ALLOWED_RESOLUTIONS,
    AUDIENCES,
    COLOR_SCHEMES,
    CONFIG_SCHEMA,
    DURATION_BOUNDS_S,
    FIELD_CATEGORIES,
    FPS_BOUNDS,
    FunctionalRequirements,
    GenerationConfig,
    TechnicalSpec,
)
from .session import MAX_TURNS, DialogueState, finalize_config, process_turn, start_session

__all__ = [
    "ALLOWED_RESOLUTIONS",
    "AUDIENCES",
    "COLOR_SCHEMES",
    "CONFIG_SCHEMA",
    "DURATION_BOUNDS_S",
    "FIELD_CATEGORIES",
    "FPS_BOUNDS",
    "MAX_TURNS",
    "DialogueState",
    "FunctionalRequirements",
    "GenerationConfig",
    "TechnicalSpec",
    "finalize_config",
    "process_turn",
    "start_session",
]
