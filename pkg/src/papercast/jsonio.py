"""Canonical JSON serialization for on-disk artifacts.

Every artifact the pipeline writes (library, config, storyboard,
manifest, report) goes through these helpers so that identical logical
content is byte-identical on disk: sorted keys, fixed separators, UTF-8,
trailing newline.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, separators=(",", ": ")) + "\n"


def dump(obj: Any, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj), encoding="utf-8")
    return path


def load(path: str | Path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def canonical_compact(obj: Any) -> str:
    """Minimal stable encoding used for digests and cache keys."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical_compact(obj).encode("utf-8")).hexdigest()
