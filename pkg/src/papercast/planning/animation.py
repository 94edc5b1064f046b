"""Animation plans: scene/action types, validation, and model-backed planning."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..errors import PlanInvalid
from ..gateway import Gateway
from ..ingest import Asset

logger = logging.getLogger(__name__)

ACTION_TYPES = ("show", "fade_out", "highlight", "move", "transform", "draw_arrow", "camera_zoom")

# parameters each action type must supply
REQUIRED_PARAMS = {
    "show": (),
    "fade_out": (),
    "highlight": ("color",),
    "move": ("to",),
    "transform": ("scale",),
    "draw_arrow": ("from", "to"),
    "camera_zoom": ("scale", "center"),
}

ANIMATABLE_KINDS = ("figure", "equation")
SCENE_COUNT_BOUNDS = (2, 6)

PLAN_RESPONSE_SCHEMA = {
    "type": "object",
    "required": ["scenes"],
    "properties": {
        "scenes": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["scene_id", "duration_s", "narration", "elements", "actions"],
                "properties": {
                    "scene_id": {"type": "string"},
                    "duration_s": {"type": "number"},
                    "narration": {"type": "string"},
                    "elements": {"type": "object"},
                    "actions": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["type", "target", "params", "start_s", "end_s"],
                        },
                    },
                },
            },
        }
    },
}


@dataclass
class SceneAction:
    type: str
    target: str
    params: dict
    start_s: float
    end_s: float

    def to_json(self) -> dict:
        return {"type": self.type, "target": self.target, "params": dict(self.params),
                "start_s": self.start_s, "end_s": self.end_s}

    @classmethod
    def from_json(cls, doc: dict) -> "SceneAction":
        return cls(type=doc["type"], target=doc["target"], params=dict(doc["params"]),
                   start_s=float(doc["start_s"]), end_s=float(doc["end_s"]))


@dataclass
class Scene:
    scene_id: str
    duration_s: float
    narration: str
    elements: dict[str, dict]
    actions: list[SceneAction] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "scene_id": self.scene_id,
            "duration_s": self.duration_s,
            "narration": self.narration,
            "elements": {k: dict(v) for k, v in self.elements.items()},
            "actions": [a.to_json() for a in self.actions],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Scene":
        return cls(
            scene_id=doc["scene_id"],
            duration_s=float(doc["duration_s"]),
            narration=doc["narration"],
            elements={k: dict(v) for k, v in doc["elements"].items()},
            actions=[SceneAction.from_json(a) for a in doc["actions"]],
        )


@dataclass
class AnimationPlan:
    plan_id: str
    source_asset_id: str
    scenes: list[Scene]
    total_duration_s: float = 0.0

    def __post_init__(self):
        if not self.total_duration_s:
            self.total_duration_s = sum(s.duration_s for s in self.scenes)

    @property
    def narration_text(self) -> str:
        return " ".join(s.narration.strip() for s in self.scenes if s.narration.strip())

    def to_json(self) -> dict:
        return {
            "plan_id": self.plan_id,
            "source_asset_id": self.source_asset_id,
            "total_duration_s": self.total_duration_s,
            "scenes": [s.to_json() for s in self.scenes],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "AnimationPlan":
        return cls(
            plan_id=doc["plan_id"],
            source_asset_id=doc["source_asset_id"],
            scenes=[Scene.from_json(s) for s in doc["scenes"]],
            total_duration_s=float(doc.get("total_duration_s", 0.0)),
        )


def validate_plan(plan: AnimationPlan) -> list[str]:
    """All scene/action invariants; returns violation messages (empty = valid)."""
    problems: list[str] = []
    lo, hi = SCENE_COUNT_BOUNDS
    if not lo <= len(plan.scenes) <= hi:
        problems.append(f"plan must have {lo}-{hi} scenes, has {len(plan.scenes)}")
    total = sum(s.duration_s for s in plan.scenes)
    if abs(total - plan.total_duration_s) > 1e-6:
        problems.append(f"total_duration_s {plan.total_duration_s} != scene sum {total}")
    for scene in plan.scenes:
        tag = scene.scene_id
        if scene.duration_s <= 0:
            problems.append(f"{tag}: non-positive duration")
        if not scene.narration.strip():
            problems.append(f"{tag}: missing narration")
        by_target: dict[str, list[tuple[float, float]]] = {}
        for action in scene.actions:
            if action.type not in ACTION_TYPES:
                problems.append(f"{tag}: unknown action type {action.type!r}")
                continue
            if action.target not in scene.elements:
                problems.append(f"{tag}: action targets undeclared element {action.target!r}")
            missing = [p for p in REQUIRED_PARAMS[action.type] if p not in action.params]
            if missing:
                problems.append(f"{tag}: {action.type} missing params {missing}")
            if not action.start_s < action.end_s:
                problems.append(f"{tag}: action on {action.target} has start >= end")
            if action.start_s < -1e-9 or action.end_s > scene.duration_s + 1e-9:
                problems.append(f"{tag}: action on {action.target} outside scene interval")
            by_target.setdefault(action.target, []).append((action.start_s, action.end_s))
        for target, spans in by_target.items():
            spans.sort()
            for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
                if s2 < e1 - 1e-9:
                    problems.append(f"{tag}: overlapping actions on {target!r}")
    return problems


def _plan_from_content(content: dict, plan_id: str, asset_id: str) -> AnimationPlan:
    scenes = [Scene.from_json(s) for s in content["scenes"]]
    return AnimationPlan(plan_id=plan_id, source_asset_id=asset_id, scenes=scenes)


def build_animation_plan(asset: Asset, context: str, gateway: Gateway) -> AnimationPlan:
    """Plan an animated walkthrough of a figure or equation.

    One repair round-trip is attempted when the first plan violates scene
    invariants; a second failure raises :class:`PlanInvalid`.
    """
    if asset.kind not in ANIMATABLE_KINDS:
        raise ValueError(f"{asset.asset_id} is a {asset.kind}; only {ANIMATABLE_KINDS} animate")
    plan_id = f"plan-{asset.asset_id}"
    inputs = {
        "asset_id": asset.asset_id,
        "caption": asset.caption,
        "description": asset.context_description,
        "context": context,
    }
    content = gateway.chat_json(task="animation_plan", inputs=inputs, schema=PLAN_RESPONSE_SCHEMA)
    plan = _plan_from_content(content, plan_id, asset.asset_id)
    problems = validate_plan(plan)
    if problems:
        logger.warning("plan %s invalid (%d problems); asking for a repair", plan_id, len(problems))
        content = gateway.chat_json(
            task="animation_plan",
            inputs=inputs,
            params={"repair": 1, "validation_error": "; ".join(problems)},
            schema=PLAN_RESPONSE_SCHEMA,
        )
        plan = _plan_from_content(content, plan_id, asset.asset_id)
        problems = validate_plan(plan)
        if problems:
            raise PlanInvalid("; ".join(problems))
    return plan
