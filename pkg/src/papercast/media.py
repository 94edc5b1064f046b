"""Adapter around the external media toolchain plus container probes.

All encode/decode work is delegated to an ffmpeg-compatible executable
resolved from ``MEDIA_TOOL_PATH`` (falling back to the binary shipped by
imageio-ffmpeg). Duration and stream probing is done by parsing MP4
boxes and WAV headers directly, so probes never depend on the tool's
stderr format.
"""

from __future__ import annotations

import os
import struct
import subprocess
import wave
from pathlib import Path

import numpy as np

from .errors import MediaToolFailure

MEDIA_TOOL_ENV = "MEDIA_TOOL_PATH"


def media_tool_path() -> str:
    """Resolve the media executable; env var wins over the bundled binary."""
    override = os.environ.get(MEDIA_TOOL_ENV)
    if override:
        return override
    import imageio_ffmpeg

    return imageio_ffmpeg.get_ffmpeg_exe()


def run_media_tool(args: list[str], timeout: float = 600.0) -> subprocess.CompletedProcess:
    """Run the media tool with the given arguments, raising on failure."""
    cmd = [media_tool_path(), "-hide_banner", "-nostdin", "-y", *args]
    try:
        proc = subprocess.run(
            cmd, stdout=subprocess.PIPE, stderr=subprocess.PIPE, timeout=timeout
        )
    except FileNotFoundError as exc:
        raise MediaToolFailure(f"media tool not found: {cmd[0]}") from exc
    except subprocess.TimeoutExpired as exc:
        raise MediaToolFailure(f"media tool timed out after {timeout}s") from exc
    if proc.returncode != 0:
        tail = proc.stderr.decode("utf-8", "replace")[-2000:]
        raise MediaToolFailure(
            f"media tool exited {proc.returncode}: {' '.join(args[:6])}...", diagnostics=tail
        )
    return proc


# --- MP4 container probing -------------------------------------------------

_CONTAINERS = {b"moov", b"trak", b"mdia", b"minf", b"stbl"}


def _iter_boxes(buf: bytes, start: int, end: int):
    pos = start
    while pos + 8 <= end:
        size, btype = struct.unpack_from(">I4s", buf, pos)
        header = 8
        if size == 1:
            if pos + 16 > end:
                return
            size = struct.unpack_from(">Q", buf, pos + 8)[0]
            header = 16
        elif size == 0:
            size = end - pos
        if size < header or pos + size > end:
            return
        yield btype, pos + header, pos + size
        pos += size


def _walk(buf: bytes, start: int, end: int, found: dict) -> None:
    for btype, body_start, body_end in _iter_boxes(buf, start, end):
        if btype == b"mvhd":
            body = buf[body_start:body_end]
            version = body[0]
            if version == 1:
                timescale = struct.unpack_from(">I", body, 20)[0]
                duration = struct.unpack_from(">Q", body, 24)[0]
            else:
                timescale = struct.unpack_from(">I", body, 12)[0]
                duration = struct.unpack_from(">I", body, 16)[0]
            if timescale:
                found["duration_s"] = duration / timescale
        elif btype == b"hdlr":
            handler = buf[body_start + 8 : body_start + 12]
            found.setdefault("handlers", []).append(handler.decode("latin-1"))
        elif btype in _CONTAINERS:
            _walk(buf, body_start, body_end, found)


def probe_mp4(path: str | Path) -> dict:
    """Return ``{'duration_s': float, 'handlers': [...]}`` for an MP4 file."""
    buf = Path(path).read_bytes()
    found: dict = {}
    _walk(buf, 0, len(buf), found)
    if "duration_s" not in found:
        raise MediaToolFailure(f"no mvhd box found in {path}; not an MP4?")
    found.setdefault("handlers", [])
    return found


def mp4_duration(path: str | Path) -> float:
    return probe_mp4(path)["duration_s"]


def mp4_has_audio(path: str | Path) -> bool:
    return "soun" in probe_mp4(path)["handlers"]


# --- WAV helpers -----------------------------------------------------------

def write_wav(path: str | Path, samples: np.ndarray, rate: int) -> Path:
    """Write mono 16-bit PCM samples (int16 or float in [-1, 1])."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if samples.dtype != np.int16:
        samples = np.clip(samples, -1.0, 1.0)
        samples = (samples * 32767.0).astype(np.int16)
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(rate)
        wf.writeframes(samples.tobytes())
    return path


def read_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Read a PCM WAV file as mono int16 samples plus the sample rate."""
    with wave.open(str(path), "rb") as wf:
        rate = wf.getframerate()
        channels = wf.getnchannels()
        width = wf.getsampwidth()
        raw = wf.readframes(wf.getnframes())
    if width != 2:
        raise MediaToolFailure(f"unsupported WAV sample width {width} in {path}")
    data = np.frombuffer(raw, dtype=np.int16)
    if channels > 1:
        data = data.reshape(-1, channels).mean(axis=1).astype(np.int16)
    return data, rate


def wav_duration(path: str | Path) -> float:
    with wave.open(str(path), "rb") as wf:
        return wf.getnframes() / wf.getframerate()


# --- decode helpers used by the evaluator ---------------------------------

def extract_audio(video: str | Path, out_wav: str | Path, rate: int = 16000) -> Path:
    """Decode the audio track to mono 16-bit PCM WAV."""
    out_wav = Path(out_wav)
    out_wav.parent.mkdir(parents=True, exist_ok=True)
    run_media_tool(
        [
            "-i", str(video),
            "-vn", "-ac", "1", "-ar", str(rate),
            "-c:a", "pcm_s16le",
            "-fflags", "+bitexact", "-flags:a", "+bitexact",
            str(out_wav),
        ]
    )
    return out_wav


def sample_frames(video: str | Path, out_dir: str | Path, fps: float = 1.0) -> list[Path]:
    """Sample frames at a regular interval; frame k corresponds to t = k/fps."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    pattern = out_dir / "frame%06d.png"
    run_media_tool(
        [
            "-i", str(video),
            "-vf", f"fps={fps}",
            "-start_number", "0",
            "-fflags", "+bitexact",
            str(pattern),
        ]
    )
    return sorted(out_dir.glob("frame*.png"))
