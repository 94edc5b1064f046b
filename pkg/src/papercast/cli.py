"""Command-line entry points for the pipeline and the evaluation suite."""

from __future__ import annotations

import logging
import tempfile
from pathlib import Path

import click

from . import jsonio
from .evaluation import evaluate_video, generate_quiz, save_quiz, save_report
from .gateway import gateway_from_env
from .ingest import load_library
from .jobs import JobManager

logger = logging.getLogger(__name__)


def _build_gateway(mode: str | None, fixtures: str | None):
    return gateway_from_env(mode=mode, store=fixtures)


@click.group()
@click.option("--store", "store_root", default="jobs", show_default=True,
              type=click.Path(file_okay=False), help="Job store directory.")
@click.option("--gateway-mode", default=None,
              type=click.Choice(["live", "record", "replay"]),
              help="Model gateway mode (default: GATEWAY_MODE or live).")
@click.option("--fixtures", default=None, type=click.Path(),
              help="Fixture store for record/replay modes (default: GATEWAY_STORE).")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
@click.pass_context
def main(ctx, store_root, gateway_mode, fixtures, verbose):
    """Turn a PDF into a narrated video; score such videos against their source."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.ensure_object(dict)
    ctx.obj["store_root"] = store_root
    ctx.obj["gateway"] = _build_gateway(gateway_mode, fixtures)


def _manager(ctx) -> JobManager:
    return JobManager(ctx.obj["store_root"], ctx.obj["gateway"])


def _echo_status(job) -> None:
    click.echo(jsonio.dumps(job.to_json()).rstrip())


@main.command()
@click.argument("pdf", type=click.Path(exists=True, dir_okay=False))
@click.option("--job-id", default=None, help="Explicit job id (default: random).")
@click.pass_context
def parse(ctx, pdf, job_id):
    """Create a job from PDF and build its asset library."""
    manager = _manager(ctx)
    job = manager.create_job(pdf, job_id=job_id)
    job = manager.run_parse(job.job_id)
    _echo_status(job)


@main.command()
@click.argument("job_id")
@click.option("--say", "messages", multiple=True,
              help="Scripted user turn; repeatable. Omit for an interactive session.")
@click.option("--finalize", "do_finalize", is_flag=True,
              help="Validate and lock the configuration after the turns.")
@click.pass_context
def dialogue(ctx, job_id, messages, do_finalize):
    """Adjust generation settings through conversation."""
    manager = _manager(ctx)
    if messages:
        for text in messages:
            _, reply = manager.dialogue_turn(job_id, text)
            click.echo(f"> {text}")
            click.echo(reply)
    else:
        click.echo("Describe the video you want (empty line to stop).")
        while True:
            try:
                text = click.prompt("you", default="", show_default=False)
            except (click.Abort, EOFError):
                break
            if not text.strip():
                break
            _, reply = manager.dialogue_turn(job_id, text.strip())
            click.echo(reply)
            if manager.get(job_id).detail.get("finalized"):
                break
    if do_finalize:
        config = manager.finalize(job_id)
        click.echo(jsonio.dumps(config.to_json()).rstrip())


@main.command()
@click.argument("job_id")
@click.pass_context
def plan(ctx, job_id):
    """Generate the storyboard (finalizes the config if needed)."""
    _echo_status(_manager(ctx).run_plan(job_id))


@main.command()
@click.argument("job_id")
@click.pass_context
def render(ctx, job_id):
    """Render slides, animation clips, and the slide deck export."""
    _echo_status(_manager(ctx).run_render(job_id))


@main.command()
@click.argument("job_id")
@click.pass_context
def synth(ctx, job_id):
    """Synthesize narration and composite the final video."""
    _echo_status(_manager(ctx).run_synthesize(job_id))


@main.command("eval")
@click.argument("target")
@click.option("--paper", "library_path", type=click.Path(exists=True, dir_okay=False),
              default=None,
              help="Asset library JSON; required when TARGET is a video file.")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Report destination for video targets (default: alongside the video).")
@click.option("--quiz-seed", default=0, show_default=True)
@click.pass_context
def eval_cmd(ctx, target, library_path, out_path, quiz_seed):
    """Score a job's video, or any video (TARGET) against --paper."""
    manager = _manager(ctx)
    target_path = Path(target)
    if target_path.suffix.lower() == ".mp4" or target_path.is_file():
        if library_path is None:
            raise click.UsageError("scoring a standalone video needs --paper <library.json>")
        library = load_library(library_path)
        with tempfile.TemporaryDirectory(prefix="eval-") as tmp:
            result = evaluate_video(target_path, library, ctx.obj["gateway"],
                                    work_dir=tmp, quiz_seed=quiz_seed)
        report_path = Path(out_path) if out_path else target_path.with_suffix(".report.json")
        save_report(result.report, report_path)
        quiz_path = report_path.with_name(report_path.stem + "-quiz.json")
        save_quiz(result.quiz, quiz_path)
        click.echo(jsonio.dumps(result.report.to_json()).rstrip())
        click.echo(f"report written to {report_path}", err=True)
    else:
        job = manager.run_evaluate(target, quiz_seed=quiz_seed)
        report = jsonio.load(job.directory / "eval" / "report.json")
        click.echo(jsonio.dumps(report).rstrip())


@main.command()
@click.argument("library_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.pass_context
def quiz(ctx, library_path, seed, out_path):
    """Generate a four-question comprehension quiz from LIBRARY_PATH."""
    library = load_library(library_path)
    quiz_obj = generate_quiz(library, ctx.obj["gateway"], seed=seed)
    if out_path:
        save_quiz(quiz_obj, out_path)
        click.echo(f"quiz written to {out_path}")
    else:
        click.echo(jsonio.dumps(quiz_obj.to_json()).rstrip())


@main.command()
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.pass_context
def serve(ctx, port, host):
    """Run the local HTTP job service."""
    from .service import serve as run_service

    run_service(ctx.obj["store_root"], ctx.obj["gateway"], port=port, host=host)


if __name__ == "__main__":
    main()
