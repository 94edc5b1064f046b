"""Scene-program compiler: AnimationPlan → backend-neutral program text.

The program is a line-oriented text format any animation backend can
interpret; each plan action expands to exactly one template instantiation,
announced by a ``# [tpl:<type>]`` marker line.  Compilation is a pure
function of the plan.
"""

from __future__ import annotations

from ..errors import TemplateParamMissing, UnknownActionType
from ..jsonio import canonical_compact
from .animation import ACTION_TYPES, REQUIRED_PARAMS, AnimationPlan

PROGRAM_VERSION = "1.0"
TEMPLATE_MARKER = "# [tpl:"


def _one_line(text: str) -> str:
    return " ".join(text.split())


def compile_animation(plan: AnimationPlan) -> str:
    """Emit the scene program for `plan` as deterministic text."""
    out: list[str] = [
        f"# scene program {PROGRAM_VERSION}",
        f"PLAN {plan.plan_id} SOURCE {plan.source_asset_id} DURATION {plan.total_duration_s:.3f}",
    ]
    for scene in plan.scenes:
        out.append(f"SCENE {scene.scene_id} DURATION {scene.duration_s:.3f}")
        out.append(f"NARRATION {_one_line(scene.narration)}")
        for name in sorted(scene.elements):
            out.append(f"ELEMENT {name} {canonical_compact(scene.elements[name])}")
        for action in scene.actions:
            if action.type not in ACTION_TYPES:
                raise UnknownActionType(f"{action.type!r} is not a known animation template")
            missing = [p for p in REQUIRED_PARAMS[action.type] if p not in action.params]
            if missing:
                raise TemplateParamMissing(
                    f"template {action.type!r} requires params {missing} (target {action.target!r})"
                )
            out.append(f"{TEMPLATE_MARKER}{action.type}]")
            out.append(
                f"ACTION {action.type} {action.target} "
                f"{action.start_s:.3f} {action.end_s:.3f} {canonical_compact(action.params)}"
            )
        out.append("ENDSCENE")
    out.append("END")
    return "\n".join(out) + "\n"


def count_template_instantiations(program: str) -> int:
    return sum(1 for line in program.splitlines() if line.startswith(TEMPLATE_MARKER))


def parse_program(program: str) -> dict:
    """Parse program text back into a plain dict (used by backends and tests)."""
    plan: dict = {"scenes": []}
    scene: dict | None = None
    for raw in program.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        keyword, _, rest = line.partition(" ")
        if keyword == "PLAN":
            parts = rest.split()
            plan["plan_id"] = parts[0]
            plan["source_asset_id"] = parts[parts.index("SOURCE") + 1]
            plan["total_duration_s"] = float(parts[parts.index("DURATION") + 1])
        elif keyword == "SCENE":
            parts = rest.split()
            scene = {
                "scene_id": parts[0],
                "duration_s": float(parts[parts.index("DURATION") + 1]),
                "narration": "",
                "elements": {},
                "actions": [],
            }
            plan["scenes"].append(scene)
        elif keyword == "NARRATION" and scene is not None:
            scene["narration"] = rest
        elif keyword == "ELEMENT" and scene is not None:
            import json

            name, _, payload = rest.partition(" ")
            scene["elements"][name] = json.loads(payload)
        elif keyword == "ACTION" and scene is not None:
            import json

            a_type, target, start, end, *payload = rest.split(maxsplit=4)
            scene["actions"].append(
                {
                    "type": a_type,
                    "target": target,
                    "start_s": float(start),
                    "end_s": float(end),
                    "params": json.loads(payload[0]) if payload else {},
                }
            )
        elif keyword in ("ENDSCENE", "END"):
            if keyword == "ENDSCENE":
                scene = None
    return plan
