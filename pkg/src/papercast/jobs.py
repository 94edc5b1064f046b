"""Directory-per-job orchestration of the full pipeline.

Each job owns one directory under the store root holding every artifact
a stage produces, plus a small ``job.json`` status file. Stages run in a
fixed order; a failure parks the job in ``failed`` while keeping all
artifacts of completed stages so a retry can pick up where it stopped.
"""

from __future__ import annotations

import datetime
import logging
import os
import shutil
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from . import jsonio
from .dialogue import DialogueState, GenerationConfig, finalize_config, process_turn, start_session
from .errors import BackendUnavailable, JobNotFound, RenderFailure, StageOrderViolation
from .evaluation import evaluate_video, save_quiz, save_report
from .gateway import Gateway
from .ingest import build_library, document_to_markdown, load_library, parse_document, save_library
from .planning import (
    StoryboardItem,
    compile_animation,
    emit_deck,
    generate_storyboard,
    layout_slide,
    load_storyboard,
    render_animation,
    save_storyboard,
    validate_storyboard,
)
from .synth import composite_video, compute_timeline, render_slides, save_manifest, \
    load_manifest, synthesize_narration
from .textutil import sentences

logger = logging.getLogger(__name__)

STAGES = ("created", "parsed", "dialogue", "planned", "rendered", "synthesized", "evaluated")
FAILED = "failed"

INPUT_PDF = "input.pdf"
LIBRARY_JSON = "library.json"
CONFIG_JSON = "config.json"
DIALOGUE_JSON = "dialogue.json"
MANIFEST_JSON = "manifest.json"
VIDEO_MP4 = "video.mp4"


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


@dataclass
class JobRecord:
    job_id: str
    directory: Path
    stage: str = "created"
    last_completed: str = "created"
    error: dict | None = None
    detail: dict = field(default_factory=dict)
    created_at: str = field(default_factory=_now)
    updated_at: str = field(default_factory=_now)

    def to_json(self) -> dict:
        return {
            "job_id": self.job_id,
            "stage": self.stage,
            "last_completed": self.last_completed,
            "error": self.error,
            "detail": self.detail,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }

    @classmethod
    def from_json(cls, doc: dict, directory: Path) -> "JobRecord":
        return cls(
            job_id=doc["job_id"],
            directory=directory,
            stage=doc["stage"],
            last_completed=doc.get("last_completed", doc["stage"]),
            error=doc.get("error"),
            detail=doc.get("detail", {}),
            created_at=doc.get("created_at", _now()),
            updated_at=doc.get("updated_at", _now()),
        )


class JobManager:
    """Owns the job store directory and runs pipeline stages."""

    def __init__(self, root: str | Path, gateway: Gateway):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.gateway = gateway

    # ----- store plumbing -------------------------------------------------

    def _dir(self, job_id: str) -> Path:
        return self.root / job_id

    def _load(self, job_id: str) -> JobRecord:
        status = self._dir(job_id) / "job.json"
        if not status.exists():
            raise JobNotFound(f"no job {job_id!r} in {self.root}")
        return JobRecord.from_json(jsonio.load(status), self._dir(job_id))

    def _save(self, job: JobRecord) -> None:
        job.updated_at = _now()
        target = job.directory / "job.json"
        tmp = target.with_suffix(".json.tmp")
        tmp.write_text(jsonio.dumps(job.to_json()), encoding="utf-8")
        os.replace(tmp, target)

    def list_jobs(self) -> list[JobRecord]:
        jobs = []
        for status in sorted(self.root.glob("*/job.json")):
            jobs.append(JobRecord.from_json(jsonio.load(status), status.parent))
        return jobs

    def get(self, job_id: str) -> JobRecord:
        return self._load(job_id)

    # ----- lifecycle ------------------------------------------------------

    def create_job(self, pdf_path: str | Path, job_id: str | None = None) -> JobRecord:
        job_id = job_id or uuid.uuid4().hex[:12]
        directory = self._dir(job_id)
        if directory.exists():
            raise StageOrderViolation(f"job {job_id!r} already exists")
        directory.mkdir(parents=True)
        shutil.copyfile(pdf_path, directory / INPUT_PDF)
        job = JobRecord(job_id=job_id, directory=directory)
        job.detail["source_pdf"] = Path(pdf_path).name
        self._save(job)
        logger.info("job %s created from %s", job_id, pdf_path)
        return job

    def _require(self, job: JobRecord, minimum: str) -> None:
        reached = job.last_completed if job.stage == FAILED else job.stage
        if STAGES.index(reached) < STAGES.index(minimum):
            raise StageOrderViolation(
                f"job {job.job_id} is at stage {reached!r}; "
                f"stage {minimum!r} must complete first"
            )

    def _run(self, job_id: str, target: str, minimum: str, fn) -> JobRecord:
        job = self._load(job_id)
        self._require(job, minimum)
        try:
            detail = fn(job) or {}
        except Exception as exc:
            job.stage = FAILED
            job.error = {"type": type(exc).__name__, "message": str(exc)}
            self._save(job)
            logger.error("job %s: stage %s failed: %s", job_id, target, exc)
            raise
        if STAGES.index(target) > STAGES.index(job.last_completed):
            job.last_completed = target
        job.stage = job.last_completed
        job.error = None
        job.detail.update(detail)
        self._save(job)
        logger.info("job %s: stage %s complete", job_id, target)
        return job

    # ----- stages ---------------------------------------------------------

    def run_parse(self, job_id: str) -> JobRecord:
        def work(job: JobRecord) -> dict:
            document = parse_document(job.directory / INPUT_PDF, job.directory / "assets")
            snapshot = {
                "doc_id": document.doc_id,
                "title": document.title,
                "sections": [
                    {
                        "index": s.index,
                        "heading": s.heading,
                        "auxiliary": s.auxiliary,
                        "body_text": s.body_text,
                        "asset_ids": list(s.asset_ids),
                    }
                    for s in document.sections
                ],
                "assets": {
                    aid: {**a.to_json(),
                          "image_path": os.path.relpath(a.image_path, job.directory)}
                    for aid, a in document.assets.items()
                },
            }
            jsonio.dump(snapshot, job.directory / "document.json")
            (job.directory / "document.md").write_text(
                document_to_markdown(document), encoding="utf-8"
            )
            library = build_library(document, self.gateway)
            save_library(library, job.directory / LIBRARY_JSON)
            return {
                "title": library.title,
                "n_sections": len(library.summaries),
                "n_assets": len(library.assets),
            }

        return self._run(job_id, "parsed", "created", work)

    # -- dialogue ----------------------------------------------------------

    def _dialogue_state(self, job: JobRecord) -> DialogueState:
        library = load_library(job.directory / LIBRARY_JSON)
        path = job.directory / DIALOGUE_JSON
        if not path.exists():
            return start_session(library)
        doc = jsonio.load(path)
        return DialogueState(
            library=library,
            config=GenerationConfig.from_json(doc["config"]),
            turns=list(doc["turns"]),
            finalized=bool(doc["finalized"]),
        )

    def dialogue_turn(self, job_id: str, text: str) -> tuple[JobRecord, str]:
        reply_box: dict = {}

        def work(job: JobRecord) -> dict:
            state = self._dialogue_state(job)
            state, reply = process_turn(state, text, self.gateway)
            jsonio.dump(state.to_json(), job.directory / DIALOGUE_JSON)
            reply_box["reply"] = reply
            return {"dialogue_turns": state.user_turns, "finalized": state.finalized}

        job = self._run(job_id, "dialogue", "parsed", work)
        return job, reply_box["reply"]

    def finalize(self, job_id: str) -> GenerationConfig:
        config_box: dict = {}

        def work(job: JobRecord) -> dict:
            state = self._dialogue_state(job)
            config = finalize_config(state)
            state.finalized = True
            jsonio.dump(state.to_json(), job.directory / DIALOGUE_JSON)
            jsonio.dump(config.to_json(), job.directory / CONFIG_JSON)
            config_box["config"] = config
            return {"finalized": True}

        self._run(job_id, "dialogue", "parsed", work)
        return config_box["config"]

    def current_config(self, job_id: str) -> dict:
        job = self._load(job_id)
        config_path = job.directory / CONFIG_JSON
        if config_path.exists():
            return {"finalized": True, "config": jsonio.load(config_path)}
        dialogue_path = job.directory / DIALOGUE_JSON
        if dialogue_path.exists():
            doc = jsonio.load(dialogue_path)
            return {"finalized": bool(doc["finalized"]), "config": doc["config"]}
        library = load_library(job.directory / LIBRARY_JSON)
        return {"finalized": False, "config": start_session(library).config.to_json()}

    # -- planning ----------------------------------------------------------

    def run_plan(self, job_id: str) -> JobRecord:
        def work(job: JobRecord) -> dict:
            if not (job.directory / CONFIG_JSON).exists():
                state = self._dialogue_state(job)
                config = finalize_config(state)
                state.finalized = True
                jsonio.dump(state.to_json(), job.directory / DIALOGUE_JSON)
                jsonio.dump(config.to_json(), job.directory / CONFIG_JSON)
            else:
                config = GenerationConfig.from_json(jsonio.load(job.directory / CONFIG_JSON))
            library = load_library(job.directory / LIBRARY_JSON)
            board = generate_storyboard(library, config, self.gateway)
            save_storyboard(board, job.directory / "storyboard")
            return {
                "n_items": len(board.items),
                "n_animations": sum(1 for i in board.items if i.kind == "animation"),
            }

        return self._run(job_id, "planned", "parsed", work)

    # -- rendering ---------------------------------------------------------

    def _degrade_to_static(self, item: StoryboardItem, board, library, style: dict,
                           reason: str) -> StoryboardItem:
        """Animation fallback: a static slide showing the plan's source asset."""
        plan = board.plans[item.animation_plan_id]
        asset = library.assets[plan.source_asset_id]
        body = asset.caption or " ".join(sentences(asset.context_description)[:1])
        layout = layout_slide(item.title, body, [asset], style)
        logger.warning("item %s/%s: animation degraded to a static slide (%s)",
                       item.section_index, item.slide_index, reason)
        return StoryboardItem(
            kind="static_slide",
            section_index=item.section_index,
            slide_index=item.slide_index,
            title=item.title,
            narration_text=item.narration_text,
            layout=layout,
        )

    def run_render(self, job_id: str) -> JobRecord:
        def work(job: JobRecord) -> dict:
            library = load_library(job.directory / LIBRARY_JSON)
            config = GenerationConfig.from_json(jsonio.load(job.directory / CONFIG_JSON))
            board = load_storyboard(job.directory / "storyboard")
            style = {"color_scheme": config.technical.color_scheme,
                     "font_family": config.technical.font_family}

            programs_dir = job.directory / "programs"
            anim_dir = job.directory / "anim"
            native: dict[str, float] = {}
            degraded: list[str] = []
            replaced: dict[int, StoryboardItem] = {}
            for pos, item in enumerate(board.items):
                if item.kind != "animation":
                    continue
                plan = board.plans[item.animation_plan_id]
                programs_dir.mkdir(exist_ok=True)
                program_path = programs_dir / f"{plan.plan_id}.txt"
                program_path.write_text(compile_animation(plan), encoding="utf-8")
                clip_path = anim_dir / f"{plan.plan_id}.mp4"
                try:
                    _, native_s = render_animation(
                        program_path, clip_path,
                        width=config.width, height=config.height,
                        fps=config.technical.fps,
                        assets_dir=job.directory / "assets",
                    )
                    native[f"{item.section_index}-{item.slide_index}"] = native_s
                except (RenderFailure, BackendUnavailable) as exc:
                    replaced[pos] = self._degrade_to_static(item, board, library, style, str(exc))
                    degraded.append(plan.plan_id)
            if replaced:
                for pos, static in replaced.items():
                    dropped = board.items[pos].animation_plan_id
                    board.items[pos] = static
                    board.plans.pop(dropped, None)
                problems = validate_storyboard(
                    board, narration_enabled=config.functional.enable_narration)
                if problems:
                    raise RenderFailure(f"degraded storyboard invalid: {'; '.join(problems)}")
                save_storyboard(board, job.directory / "storyboard")
            jsonio.dump(native, job.directory / "anim" / "native.json")

            slides = render_slides(board, library.assets, style,
                                   (config.width, config.height), job.directory / "slides")
            deck_path = emit_deck(board, library.assets, job.directory / "deck" / "slides.pptx")
            return {
                "n_slides": len(slides),
                "n_clips": len(native),
                "degraded_plans": degraded,
                "deck": deck_path.name,
            }

        return self._run(job_id, "rendered", "planned", work)

    # -- synthesis ---------------------------------------------------------

    def run_synthesize(self, job_id: str) -> JobRecord:
        def work(job: JobRecord) -> dict:
            config = GenerationConfig.from_json(jsonio.load(job.directory / CONFIG_JSON))
            board = load_storyboard(job.directory / "storyboard")

            tracks = None
            if config.functional.enable_narration:
                tracks = synthesize_narration(board, self.gateway, job.directory / "narration")
            native_doc = jsonio.load(job.directory / "anim" / "native.json")
            native = {
                tuple(int(v) for v in key.split("-")): float(value)
                for key, value in native_doc.items()
            }
            manifest = compute_timeline(board, tracks, native)
            manifest.output_path = VIDEO_MP4
            manifest.subtitle_path = "video.srt" if tracks else ""
            save_manifest(manifest, job.directory / MANIFEST_JSON)

            images = {
                (item.section_index, item.slide_index):
                    job.directory / "slides" /
                    f"slide-{item.section_index:02d}-{item.slide_index:02d}.png"
                for item in board.items if item.kind == "static_slide"
            }
            clips = {
                (item.section_index, item.slide_index):
                    job.directory / "anim" / f"{item.animation_plan_id}.mp4"
                for item in board.items if item.kind == "animation"
            }
            out = composite_video(manifest, images, clips, tracks,
                                  job.directory / VIDEO_MP4, subtitle_mode="sidecar")
            return {"video": out.name, "video_duration_s": manifest.total_duration_s}

        return self._run(job_id, "synthesized", "rendered", work)

    # -- evaluation --------------------------------------------------------

    def run_evaluate(self, job_id: str, quiz_seed: int = 0) -> JobRecord:
        def work(job: JobRecord) -> dict:
            library = load_library(job.directory / LIBRARY_JSON)
            board = load_storyboard(job.directory / "storyboard")
            manifest = load_manifest(job.directory / MANIFEST_JSON)
            result = evaluate_video(
                job.directory / VIDEO_MP4, library, self.gateway,
                work_dir=job.directory / "eval",
                manifest=manifest, board=board, quiz_seed=quiz_seed,
            )
            eval_dir = job.directory / "eval"
            save_report(result.report, eval_dir / "report.json")
            save_quiz(result.quiz, eval_dir / "quiz.json")
            jsonio.dump([seg.to_json() for seg in result.transcript],
                        eval_dir / "transcript.json")
            jsonio.dump(
                {
                    "video_duration_s": result.keyframes.video_duration_s,
                    "keyframes": [
                        {**kf.to_json(),
                         "image_path": os.path.relpath(kf.image_path, job.directory)}
                        for kf in result.keyframes.keyframes
                    ],
                },
                eval_dir / "keyframes.json",
            )
            return {
                "n_keyframes": len(result.keyframes.keyframes),
                "quiz_accuracy_pct": result.report.quiz["accuracy_pct"],
            }

        return self._run(job_id, "evaluated", "synthesized", work)
