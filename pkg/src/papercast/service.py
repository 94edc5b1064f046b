"""Local HTTP job service exposing the pipeline to scripts and the web UI.

Endpoints (bodies are JSON except the PDF upload and video download):

  POST /jobs                     raw PDF body -> 201 {job_id, ...status}
  GET  /jobs                     -> list of job statuses
  GET  /jobs/{id}/status         -> job status
  POST /jobs/{id}/dialogue       {"text": ...} -> {reply, finalized, config}
  GET  /jobs/{id}/config         -> {finalized, config}
  POST /jobs/{id}/plan|render|synthesize|evaluate -> job status
  GET  /jobs/{id}/storyboard     -> storyboard document
  GET  /jobs/{id}/report         -> metric report document
  GET  /jobs/{id}/video          -> MP4 file

Stages run synchronously inside the request (each job is single-writer;
a busy job answers 409) and progress is read back by polling the status
endpoint.
"""

from __future__ import annotations

import logging
import socket
import tempfile
import threading
from collections import defaultdict
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import FileResponse, JSONResponse

from . import jsonio
from .errors import (
    JobNotFound,
    PapercastError,
    PortInUse,
    StageOrderViolation,
    ValidationFailure,
)
from .gateway import Gateway
from .jobs import JobManager, JobRecord

logger = logging.getLogger(__name__)


def _status_payload(job: JobRecord) -> dict:
    return job.to_json()


def create_app(store_root: str | Path, gateway: Gateway) -> FastAPI:
    app = FastAPI(title="document-to-video pipeline", docs_url=None, redoc_url=None)
    manager = JobManager(store_root, gateway)
    app.state.manager = manager
    locks: dict[str, threading.Lock] = defaultdict(threading.Lock)

    def _locked(job_id: str, fn, *args):
        lock = locks[job_id]
        if not lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail=f"job {job_id} is busy")
        try:
            return fn(*args)
        finally:
            lock.release()

    @app.exception_handler(JobNotFound)
    async def _not_found(_, exc):
        return JSONResponse(status_code=404, content={"error": "JobNotFound", "message": str(exc)})

    @app.exception_handler(StageOrderViolation)
    async def _conflict(_, exc):
        return JSONResponse(status_code=409,
                            content={"error": "StageOrderViolation", "message": str(exc)})

    @app.exception_handler(ValidationFailure)
    async def _invalid(_, exc):
        return JSONResponse(status_code=422,
                            content={"error": "ValidationFailure", "message": str(exc),
                                     "violations": exc.violations})

    @app.exception_handler(PapercastError)
    async def _pipeline_error(_, exc):
        return JSONResponse(status_code=500,
                            content={"error": type(exc).__name__, "message": str(exc)})

    # ----- creation and status -------------------------------------------

    @app.post("/jobs", status_code=201)
    async def create_job(request: Request):
        body = await request.body()
        if not body:
            raise HTTPException(status_code=400, detail="request body must be the PDF bytes")

        def work() -> dict:
            with tempfile.NamedTemporaryFile(suffix=".pdf") as handle:
                handle.write(body)
                handle.flush()
                job = manager.create_job(handle.name)
            manager.run_parse(job.job_id)
            return _status_payload(manager.get(job.job_id))

        return await run_in_threadpool(work)

    @app.get("/jobs")
    def list_jobs():
        return {"jobs": [_status_payload(job) for job in manager.list_jobs()]}

    @app.get("/jobs/{job_id}/status")
    def job_status(job_id: str):
        return _status_payload(manager.get(job_id))

    # ----- dialogue -------------------------------------------------------

    @app.post("/jobs/{job_id}/dialogue")
    def dialogue(job_id: str, body: dict):
        text = str(body.get("text", "")).strip()
        if not text:
            raise HTTPException(status_code=400, detail="body must carry a non-empty 'text'")
        _, reply = _locked(job_id, manager.dialogue_turn, job_id, text)
        config = manager.current_config(job_id)
        return {"reply": reply, "finalized": config["finalized"], "config": config["config"]}

    @app.get("/jobs/{job_id}/config")
    def get_config(job_id: str):
        return manager.current_config(job_id)

    # ----- pipeline stages ------------------------------------------------

    @app.post("/jobs/{job_id}/plan")
    def plan(job_id: str):
        return _status_payload(_locked(job_id, manager.run_plan, job_id))

    @app.post("/jobs/{job_id}/render")
    def render(job_id: str):
        return _status_payload(_locked(job_id, manager.run_render, job_id))

    @app.post("/jobs/{job_id}/synthesize")
    def synthesize(job_id: str):
        return _status_payload(_locked(job_id, manager.run_synthesize, job_id))

    @app.post("/jobs/{job_id}/evaluate")
    def evaluate(job_id: str):
        return _status_payload(_locked(job_id, manager.run_evaluate, job_id))

    # ----- artifacts ------------------------------------------------------

    def _artifact(job_id: str, relative: str, description: str) -> Path:
        job = manager.get(job_id)  # 404 for unknown jobs
        path = job.directory / relative
        if not path.exists():
            raise HTTPException(status_code=404,
                                detail=f"{description} not available yet for job {job_id}")
        return path

    @app.get("/jobs/{job_id}/storyboard")
    def storyboard(job_id: str):
        return jsonio.load(_artifact(job_id, "storyboard/storyboard.json", "storyboard"))

    @app.get("/jobs/{job_id}/report")
    def report(job_id: str):
        return jsonio.load(_artifact(job_id, "eval/report.json", "report"))

    @app.get("/jobs/{job_id}/video")
    def video(job_id: str):
        path = _artifact(job_id, "video.mp4", "video")
        return FileResponse(path, media_type="video/mp4", filename=f"{job_id}.mp4")

    return app


def check_port_free(port: int, host: str = "127.0.0.1") -> None:
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        raise PortInUse(f"port {port} on {host} is already bound") from exc
    finally:
        probe.close()


def serve(store_root: str | Path, gateway: Gateway, port: int = 8000,
          host: str = "127.0.0.1") -> None:
    """Run the service until interrupted; raises PortInUse up front."""
    import uvicorn

    check_port_free(port, host)
    app = create_app(store_root, gateway)
    logger.info("serving job store %s on %s:%d", store_root, host, port)
    uvicorn.run(app, host=host, port=port, log_level="warning")
