"""Final video assembly: per-segment encodes, concat, audio, subtitles.

Segment boundaries are quantized to the frame grid before encoding, so
the container duration always lands within half a frame of the manifest
total regardless of how many segments there are.
"""

from __future__ import annotations

import logging
import shutil
import tempfile
from pathlib import Path

import numpy as np

from ..errors import MediaToolFailure
from ..media import read_wav, run_media_tool, write_wav
from .narration import NarrationTrack
from .timeline import CompositionManifest

logger = logging.getLogger(__name__)

ENCODE_ARGS = ["-c:v", "libx264", "-preset", "veryfast", "-crf", "20",
               "-fflags", "+bitexact", "-flags:v", "+bitexact"]


def _srt_timestamp(seconds: float) -> str:
    ms = int(round(seconds * 1000))
    h, rem = divmod(ms, 3_600_000)
    m, rem = divmod(rem, 60_000)
    s, ms = divmod(rem, 1000)
    return f"{h:02d}:{m:02d}:{s:02d},{ms:03d}"


def build_srt(manifest: CompositionManifest,
              tracks: dict[tuple[int, int], NarrationTrack]) -> str:
    """Global subtitle track: per-item cues offset by segment starts."""
    entries: list[str] = []
    n = 0
    for segment in manifest.segments:
        track = tracks.get(segment.item_key)
        if track is None:
            continue
        for start, end, text in track.subtitle_cues:
            n += 1
            entries.append(
                f"{n}\n{_srt_timestamp(segment.start_s + start)} --> "
                f"{_srt_timestamp(segment.start_s + end)}\n{text}\n"
            )
    return "\n".join(entries) + ("\n" if entries else "")


def _frame_boundaries(manifest: CompositionManifest) -> list[int]:
    fps = manifest.fps
    bounds = [round(s.start_s * fps) for s in manifest.segments]
    bounds.append(round(manifest.total_duration_s * fps))
    return bounds


def _build_master_audio(manifest: CompositionManifest,
                        tracks: dict[tuple[int, int], NarrationTrack],
                        container_duration_s: float, out_path: Path) -> None:
    rate = 16000
    first = next(iter(tracks.values()), None)
    if first is not None:
        _, rate = read_wav(first.audio_path)
    total = int(round(container_duration_s * rate)) + 1
    master = np.zeros(total, dtype=np.int16)
    fps = manifest.fps
    for segment in manifest.segments:
        track = tracks.get(segment.item_key)
        if track is None:
            continue
        samples, track_rate = read_wav(track.audio_path)
        if track_rate != rate:
            raise MediaToolFailure(
                f"narration sample rates differ: {track_rate} vs {rate}",
                diagnostics={"track": track.audio_path},
            )
        offset = int(round(round(segment.start_s * fps) / fps * rate))
        end = min(total, offset + len(samples))
        master[offset:end] = samples[: end - offset]
    write_wav(out_path, master, rate)


def composite_video(manifest: CompositionManifest,
                    images: dict[tuple[int, int], str | Path],
                    clips: dict[tuple[int, int], str | Path],
                    tracks: dict[tuple[int, int], NarrationTrack] | None,
                    out_path: str | Path,
                    subtitle_mode: str = "sidecar") -> Path:
    """Composite all segments into the final MP4.

    ``subtitle_mode``: "sidecar" writes an SRT next to the video; "mux"
    additionally embeds it as a subtitle stream; "none" skips subtitles.
    """
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    width, height = (int(v) for v in manifest.resolution.split("x"))
    fps = manifest.fps

    # ---- existence pre-check: fail before any tool invocation ------------
    missing: list[str] = []
    for segment in manifest.segments:
        source = images if segment.visual_source == "slide_image" else clips
        path = source.get(segment.item_key)
        if path is None or not Path(path).exists():
            missing.append(f"{segment.visual_source} for item {segment.item_key}")
    if tracks is not None:
        for segment in manifest.segments:
            track = tracks.get(segment.item_key)
            if track is None or not Path(track.audio_path).exists():
                missing.append(f"narration for item {segment.item_key}")
    if missing:
        raise MediaToolFailure(
            "composition inputs missing", diagnostics={"missing": missing}
        )

    bounds = _frame_boundaries(manifest)
    container_duration_s = bounds[-1] / fps

    with tempfile.TemporaryDirectory(prefix="composite-") as tmp:
        tmp_dir = Path(tmp)
        part_paths: list[Path] = []
        for i, segment in enumerate(manifest.segments):
            n_frames = max(1, bounds[i + 1] - bounds[i])
            part = tmp_dir / f"part-{i:03d}.mp4"
            if segment.visual_source == "slide_image":
                run_media_tool([
                    "-loop", "1", "-framerate", str(fps),
                    "-i", str(images[segment.item_key]),
                    "-vf", f"scale={width}:{height},format=yuv420p",
                    "-frames:v", str(n_frames),
                    *ENCODE_ARGS,
                    str(part),
                ])
            else:
                pad = segment.display_duration_s + 2.0
                run_media_tool([
                    "-i", str(clips[segment.item_key]),
                    "-vf", (
                        f"setpts=PTS/{segment.playback_speed:.6f},fps={fps},"
                        f"tpad=stop_mode=clone:stop_duration={pad:.3f},"
                        f"scale={width}:{height},format=yuv420p"
                    ),
                    "-frames:v", str(n_frames),
                    "-an",
                    *ENCODE_ARGS,
                    str(part),
                ])
            part_paths.append(part)

        concat_list = tmp_dir / "parts.txt"
        concat_list.write_text(
            "".join(f"file '{p.as_posix()}'\n" for p in part_paths), encoding="utf-8"
        )
        silent = tmp_dir / "silent.mp4"
        run_media_tool([
            "-f", "concat", "-safe", "0", "-i", str(concat_list),
            "-c", "copy", "-fflags", "+bitexact", str(silent),
        ])

        srt_path = out_path.with_suffix(".srt")
        wrote_srt = False
        if tracks is not None and subtitle_mode in ("sidecar", "mux"):
            srt_text = build_srt(manifest, tracks)
            if srt_text:
                srt_path.write_text(srt_text, encoding="utf-8")
                wrote_srt = True

        if tracks is None:
            shutil.move(str(silent), str(out_path))
        else:
            master_wav = tmp_dir / "master.wav"
            _build_master_audio(manifest, tracks, container_duration_s, master_wav)
            args = ["-i", str(silent), "-i", str(master_wav)]
            maps = ["-map", "0:v", "-map", "1:a"]
            codecs = ["-c:v", "copy", "-c:a", "aac", "-b:a", "128k"]
            if subtitle_mode == "mux" and wrote_srt:
                args += ["-i", str(srt_path)]
                maps += ["-map", "2:s"]
                codecs += ["-c:s", "mov_text"]
            run_media_tool([*args, *maps, *codecs, "-fflags", "+bitexact", str(out_path)])

    manifest.output_path = str(out_path)
    manifest.subtitle_path = str(srt_path) if wrote_srt else ""
    logger.info("composited %s (%.1fs container)", out_path.name, container_duration_s)
    return out_path
