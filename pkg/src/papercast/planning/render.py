"""Subprocess adapter for rendering compiled scene programs."""

from __future__ import annotations

import json
import logging
import os
import subprocess
import sys
from pathlib import Path

from ..errors import BackendUnavailable, RenderFailure
from ..media import mp4_duration
from .compiler import parse_program

logger = logging.getLogger(__name__)

ANIM_BACKEND_ENV = "ANIM_BACKEND_PATH"
DURATION_TOLERANCE_S = 0.5


def backend_command() -> list[str]:
    """Command prefix for the animation backend subprocess."""
    custom = os.environ.get(ANIM_BACKEND_ENV)
    if custom:
        if not Path(custom).exists():
            raise BackendUnavailable(f"{ANIM_BACKEND_ENV}={custom!r} does not exist")
        return [custom]
    return [sys.executable, "-m", "papercast.planning.anim_backend"]


def render_animation(program_path: str | Path, out_path: str | Path, *,
                     width: int, height: int, fps: int,
                     assets_dir: str | Path, timeout_s: float = 900.0) -> tuple[Path, float]:
    """Render one scene program to a clip; returns (path, native duration).

    Raises :class:`BackendUnavailable` before any work if the backend is
    missing, and :class:`RenderFailure` for any rendering problem —
    including a clip whose duration strays more than 0.5 s from the plan.
    """
    program_path = Path(program_path)
    out_path = Path(out_path)
    cmd = backend_command() + [
        str(program_path),
        "--out", str(out_path),
        "--width", str(width),
        "--height", str(height),
        "--fps", str(fps),
        "--assets-dir", str(assets_dir),
    ]
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=timeout_s)
    except subprocess.TimeoutExpired as exc:
        raise RenderFailure(f"animation backend timed out after {timeout_s:g}s") from exc
    if proc.returncode != 0:
        tail = "\n".join(proc.stderr.strip().splitlines()[-8:])
        raise RenderFailure(f"animation backend exited {proc.returncode}: {tail}")
    if not out_path.exists():
        raise RenderFailure("animation backend reported success but produced no clip")

    try:
        reported = json.loads(proc.stdout.strip().splitlines()[-1])
        native = float(reported["native_duration_s"])
    except (ValueError, KeyError, IndexError):
        native = 0.0
    probed = mp4_duration(out_path)
    if probed > 0:
        native = probed

    expected = parse_program(program_path.read_text(encoding="utf-8")).get("total_duration_s", 0.0)
    if expected and abs(native - expected) > DURATION_TOLERANCE_S:
        raise RenderFailure(
            f"clip runs {native:.2f}s but the plan specifies {expected:.2f}s "
            f"(tolerance {DURATION_TOLERANCE_S}s)"
        )
    logger.info("rendered %s -> %s (%.2fs)", program_path.name, out_path.name, native)
    return out_path, native
