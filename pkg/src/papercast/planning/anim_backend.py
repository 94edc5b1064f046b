"""Reference animation backend: interprets scene programs into video clips.

Runs as a subprocess (console script ``papercast-animd``) so alternative
backends can be swapped in via the ``ANIM_BACKEND_PATH`` environment
variable.  Rendering is a pure function of (program, size, fps): frames
are drawn with PIL and encoded with the configured media tool.

Output: a JSON object on stdout with ``clip`` and ``native_duration_s``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import tempfile
from pathlib import Path

from PIL import Image, ImageDraw

from ..fonts import load_font
from ..media import run_media_tool
from .compiler import parse_program

BACKGROUND = (15, 17, 21)
TEXT_COLOR = (232, 233, 235)
ACCENT = (255, 204, 0)
ARROW_COLOR = (255, 120, 80)


def _norm_box(element: dict) -> tuple[float, float, float, float]:
    return (
        float(element.get("x", 0.2)),
        float(element.get("y", 0.2)),
        float(element.get("w", 0.6)),
        float(element.get("h", 0.6)),
    )


def _progress(t: float, start: float, end: float) -> float:
    if end <= start:
        return 1.0 if t >= start else 0.0
    return min(1.0, max(0.0, (t - start) / (end - start)))


class _SceneState:
    """Per-scene evaluation of element visibility/geometry at a time t."""

    def __init__(self, scene: dict):
        self.scene = scene
        self.shown_targets = {a["target"] for a in scene["actions"] if a["type"] == "show"}

    def alpha(self, name: str, t: float) -> float:
        value = 0.0 if name in self.shown_targets else 1.0
        for action in self.scene["actions"]:
            if action["target"] != name:
                continue
            if action["type"] == "show":
                value = max(value, _progress(t, action["start_s"], action["end_s"]))
            elif action["type"] == "fade_out":
                if t >= action["start_s"]:
                    value = min(value, 1.0 - _progress(t, action["start_s"], action["end_s"]))
        return value

    def box(self, name: str, t: float) -> tuple[float, float, float, float]:
        x, y, w, h = _norm_box(self.scene["elements"][name])
        for action in self.scene["actions"]:
            if action["target"] != name:
                continue
            if action["type"] == "move":
                p = _progress(t, action["start_s"], action["end_s"])
                tx, ty = action["params"]["to"]
                x, y = x + (tx - x) * p, y + (ty - y) * p
            elif action["type"] == "transform":
                p = _progress(t, action["start_s"], action["end_s"])
                scale = 1.0 + (float(action["params"]["scale"]) - 1.0) * p
                cx, cy = x + w / 2, y + h / 2
                w, h = w * scale, h * scale
                x, y = cx - w / 2, cy - h / 2
        return x, y, w, h

    def camera(self, t: float) -> tuple[float, float, float]:
        zoom, cx, cy = 1.0, 0.5, 0.5
        for action in self.scene["actions"]:
            if action["type"] != "camera_zoom":
                continue
            p = _progress(t, action["start_s"], action["end_s"])
            zoom = 1.0 + (float(action["params"]["scale"]) - 1.0) * p
            cx, cy = action["params"].get("center", [0.5, 0.5])
        return zoom, float(cx), float(cy)


def _draw_arrow(draw: ImageDraw.ImageDraw, p0, p1, width: int) -> None:
    draw.line([p0, p1], fill=ARROW_COLOR, width=width)
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    length = math.hypot(dx, dy) or 1.0
    ux, uy = dx / length, dy / length
    head = width * 4
    left = (p1[0] - head * ux + head * 0.6 * uy, p1[1] - head * uy - head * 0.6 * ux)
    right = (p1[0] - head * ux - head * 0.6 * uy, p1[1] - head * uy + head * 0.6 * ux)
    draw.polygon([p1, left, right], fill=ARROW_COLOR)


def render_frame(scene: dict, state: _SceneState, t: float, size: tuple[int, int],
                 assets_dir: Path, image_cache: dict) -> Image.Image:
    width, height = size
    frame = Image.new("RGBA", size, BACKGROUND + (255,))
    draw = ImageDraw.Draw(frame)

    for name in sorted(scene["elements"]):
        element = scene["elements"][name]
        kind = element.get("kind", "shape")
        a = state.alpha(name, t)
        if a <= 0.0 or kind == "arrow":
            continue
        x, y, w, h = state.box(name, t)
        px, py = int(x * width), int(y * height)
        pw, ph = max(1, int(w * width)), max(1, int(h * height))
        if kind == "image":
            source = element.get("source", "")
            if source not in image_cache:
                path = assets_dir / f"{source}.png"
                image_cache[source] = Image.open(path).convert("RGBA") if path.exists() else None
            img = image_cache[source]
            if img is None:
                draw.rectangle([px, py, px + pw, py + ph], outline=TEXT_COLOR, width=2)
            else:
                scale = min(pw / img.width, ph / img.height)
                fitted = img.resize((max(1, int(img.width * scale)), max(1, int(img.height * scale))))
                if a < 1.0:
                    faded = fitted.copy()
                    alpha_band = faded.getchannel("A").point(lambda v: int(v * a))
                    faded.putalpha(alpha_band)
                    fitted = faded
                ox = px + (pw - fitted.width) // 2
                oy = py + (ph - fitted.height) // 2
                frame.alpha_composite(fitted, (ox, oy))
        elif kind == "text":
            font = load_font(int(element.get("size", 0.05) * height))
            color = TEXT_COLOR + (int(255 * a),)
            layer = Image.new("RGBA", size, (0, 0, 0, 0))
            ImageDraw.Draw(layer).text((px, py), element.get("text", ""), font=font, fill=color)
            frame.alpha_composite(layer)
        elif kind == "shape":
            color = ACCENT + (int(160 * a),)
            layer = Image.new("RGBA", size, (0, 0, 0, 0))
            ImageDraw.Draw(layer).rectangle([px, py, px + pw, py + ph], outline=color, width=3)
            frame.alpha_composite(layer)

    # overlays driven by actions rather than element geometry
    draw = ImageDraw.Draw(frame)
    for action in scene["actions"]:
        if action["type"] == "highlight":
            p = _progress(t, action["start_s"], action["end_s"])
            if 0.0 < p < 1.0:
                pulse = 0.5 + 0.5 * math.sin(p * math.pi * 6)
                target = action["target"]
                if target in scene["elements"]:
                    x, y, w, h = state.box(target, t)
                    color = ACCENT + (int(255 * pulse),)
                    layer = Image.new("RGBA", size, (0, 0, 0, 0))
                    ImageDraw.Draw(layer).rectangle(
                        [int(x * width) - 4, int(y * height) - 4,
                         int((x + w) * width) + 4, int((y + h) * height) + 4],
                        outline=color, width=5,
                    )
                    frame.alpha_composite(layer)
        elif action["type"] == "draw_arrow":
            p = _progress(t, action["start_s"], action["end_s"])
            if p > 0.0:
                x0, y0 = action["params"]["from"]
                x1, y1 = action["params"]["to"]
                xe = x0 + (x1 - x0) * p
                ye = y0 + (y1 - y0) * p
                _draw_arrow(draw, (x0 * width, y0 * height), (xe * width, ye * height),
                            max(2, width // 400))

    zoom, cx, cy = state.camera(t)
    if zoom > 1.001:
        crop_w, crop_h = width / zoom, height / zoom
        left = min(max(cx * width - crop_w / 2, 0), width - crop_w)
        top = min(max(cy * height - crop_h / 2, 0), height - crop_h)
        frame = frame.crop((int(left), int(top), int(left + crop_w), int(top + crop_h)))
        frame = frame.resize(size)
    return frame


def render_program(program_text: str, out_path: Path, size: tuple[int, int], fps: int,
                   assets_dir: Path) -> float:
    plan = parse_program(program_text)
    image_cache: dict = {}
    n_total = 0
    with tempfile.TemporaryDirectory(prefix="animframes-") as tmp:
        tmp_dir = Path(tmp)
        for scene in plan["scenes"]:
            state = _SceneState(scene)
            n_frames = max(1, round(scene["duration_s"] * fps))
            for f in range(n_frames):
                t = f / fps
                frame = render_frame(scene, state, t, size, assets_dir, image_cache)
                frame.convert("RGB").save(tmp_dir / f"{n_total:06d}.png")
                n_total += 1
        out_path.parent.mkdir(parents=True, exist_ok=True)
        run_media_tool([
            "-framerate", str(fps),
            "-i", str(tmp_dir / "%06d.png"),
            "-pix_fmt", "yuv420p",
            "-fflags", "+bitexact",
            str(out_path),
        ])
    return n_total / fps


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="scene-program animation renderer")
    parser.add_argument("program", type=Path)
    parser.add_argument("--out", type=Path, required=True)
    parser.add_argument("--width", type=int, default=1280)
    parser.add_argument("--height", type=int, default=720)
    parser.add_argument("--fps", type=int, default=15)
    parser.add_argument("--assets-dir", type=Path, required=True)
    args = parser.parse_args(argv)

    duration = render_program(
        args.program.read_text(encoding="utf-8"),
        args.out,
        (args.width, args.height),
        args.fps,
        args.assets_dir,
    )
    json.dump({"clip": str(args.out), "native_duration_s": duration}, sys.stdout)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
