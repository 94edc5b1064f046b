"""Planning: content selection, layout, storyboard, and animation plans."""

from .animation import (
    ACTION_TYPES,
    ANIMATABLE_KINDS,
    REQUIRED_PARAMS,
    AnimationPlan,
    Scene,
    SceneAction,
    build_animation_plan,
    validate_plan,
)
from .compiler import (
    TEMPLATE_MARKER,
    compile_animation,
    count_template_instantiations,
    parse_program,
)
from .deck import emit_deck
from .layout import (
    CANVAS_RATIO,
    COLOR_SCHEMES,
    LayoutBox,
    fit_figure_box,
    layout_slide,
    overlap_area,
    text_capacity_words,
    validate_layout,
)
from .render import ANIM_BACKEND_ENV, backend_command, render_animation
from .selection import (
    display_area_fraction,
    estimate_slide_count,
    select_content,
    visual_cost,
)
from .storyboard import (
    MIN_SECTION_WORDS,
    SPEAKING_RATE_WPS,
    STORYBOARD_SCHEMA,
    Storyboard,
    StoryboardItem,
    generate_storyboard,
    load_storyboard,
    save_storyboard,
    validate_storyboard,
)

__all__ = [
    "ACTION_TYPES",
    "ANIMATABLE_KINDS",
    "ANIM_BACKEND_ENV",
    "CANVAS_RATIO",
    "COLOR_SCHEMES",
    "MIN_SECTION_WORDS",
    "REQUIRED_PARAMS",
    "SPEAKING_RATE_WPS",
    "STORYBOARD_SCHEMA",
    "TEMPLATE_MARKER",
    "AnimationPlan",
    "LayoutBox",
    "Scene",
    "SceneAction",
    "Storyboard",
    "StoryboardItem",
    "backend_command",
    "build_animation_plan",
    "compile_animation",
    "count_template_instantiations",
    "display_area_fraction",
    "emit_deck",
    "estimate_slide_count",
    "fit_figure_box",
    "generate_storyboard",
    "layout_slide",
    "load_storyboard",
    "overlap_area",
    "parse_program",
    "render_animation",
    "save_storyboard",
    "select_content",
    "text_capacity_words",
    "validate_layout",
    "validate_plan",
    "visual_cost",
]
