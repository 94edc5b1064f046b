"""Shared fixtures: synthetic source documents and pipeline environments.

The builders here produce PDFs whose structure (font sizes, numbered
headings, caption anchors, centered tagged equations, embedded graphics)
is tuned so that parsing, selection, and budgeting land in known states
the tests can assert against.
"""

from __future__ import annotations

import dataclasses
import io
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from PIL import Image, ImageDraw
from reportlab.lib.pagesizes import LETTER
from reportlab.lib.utils import ImageReader
from reportlab.pdfbase.pdfmetrics import stringWidth
from reportlab.pdfgen import canvas as rl_canvas

settings.register_profile(
    "suite", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")

PAGE_W, PAGE_H = LETTER
MARGIN = 72.0
TEXT_W = PAGE_W - 2 * MARGIN

BODY_SIZE = 11.0
CAPTION_SIZE = 9.0
HEADING_SIZE = 16.0
TITLE_SIZE = 22.0

# Word counts per body sentence, per section.  The summariser takes whole
# sentences until it reaches 90 words, so these counts pin each section's
# summary length exactly — which in turn pins the slide-count estimates.
SECTION_SENTENCES = {
    "1 Ingest Overview": (20, 20, 20, 20, 20, 15, 15),          # summary 100
    "2 Window Scheduling": (20, 20, 20, 20, 20, 15, 15),        # summary 100
    "3 Compaction Results": (38, 38, 38, 20, 20),               # summary 114
    "4 Locality Effects": (23, 23, 23, 23, 23, 10),             # summary 92
    "5 Failure Handling": (23, 23, 23, 23, 23, 10),
    "6 Operator Costs": (23, 23, 23, 23, 23, 10),
    "7 Related Methods": (23, 23, 23, 23, 23, 10),
    "8 Concluding Notes": (23, 23, 23, 23, 23, 10),
}
# Summary word count each section's sentence plan produces (first sentences
# until the cumulative count reaches 90).
EXPECTED_SUMMARY_WORDS = {
    "1 Ingest Overview": 100,
    "2 Window Scheduling": 100,
    "3 Compaction Results": 114,
    "4 Locality Effects": 92,
    "5 Failure Handling": 92,
    "6 Operator Costs": 92,
    "7 Related Methods": 92,
    "8 Concluding Notes": 92,
}
# Per-section slide-count expectations for the default length (300 s).
EXPECTED_SECTION_SLIDES = {
    "1 Ingest Overview": 2,
    "2 Window Scheduling": 2,
    "3 Compaction Results": 3,
    "4 Locality Effects": 1,
    "5 Failure Handling": 1,
    "6 Operator Costs": 1,
    "7 Related Methods": 1,
    "8 Concluding Notes": 1,
}
EXPECTED_TOTAL_ITEMS = sum(EXPECTED_SECTION_SLIDES.values())  # 12

FIXTURE_DIALOGUE = "Make it 300 seconds at 15 fps in 720p."
MINI_DIALOGUE = "Make it 90 seconds at 12 fps in 720p."

_WORD_BANK = (
    "stream", "window", "buffer", "compaction", "telemetry", "encoder",
    "pipeline", "latency", "throughput", "schedule", "batch", "cache",
    "segment", "signal", "filter", "kernel", "metric", "replay", "cluster",
    "budget", "planner", "sampler", "index", "vector", "adaptive", "rolling",
    "operator", "payload", "records", "arrival", "pressure", "horizon",
)


def make_sentence(idx: int, n_words: int) -> str:
    """Deterministic sentence with exactly ``n_words`` words."""
    step = 1 + idx % 5
    words = [_WORD_BANK[(idx * 7 + k * step) % len(_WORD_BANK)] for k in range(n_words)]
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def section_body(heading: str) -> list[str]:
    """The body sentences written into the fixture PDF for one section."""
    plan = SECTION_SENTENCES[heading]
    base = sum(ord(c) for c in heading)
    return [make_sentence(base + i, n) for i, n in enumerate(plan)]


def make_asset_image(seed: int, px_w: int, px_h: int) -> Image.Image:
    """Saturated striped test card; each seed gets a distinct coarse pattern.

    Saturation stays high everywhere so the frame-analysis colour mask finds
    the full block, and the stripes are wide enough to survive the coarse
    grayscale embedding the evaluator uses for frame comparison.
    """
    import colorsys

    def rgb(h: float, s: float, v: float) -> tuple[int, int, int]:
        r, g, b = colorsys.hsv_to_rgb(h % 1.0, s, v)
        return int(r * 255), int(g * 255), int(b * 255)

    hue = (seed * 0.137) % 1.0
    base = rgb(hue, 0.78, 0.85)
    alt = rgb(hue, 0.72, 0.45 + 0.10 * (seed % 3))
    dark = rgb(hue, 0.85, 0.25)

    img = Image.new("RGB", (px_w, px_h), base)
    draw = ImageDraw.Draw(img)
    n_bands = 4 + seed % 3
    orientation = seed % 3
    if orientation == 0:  # horizontal bands
        band = px_h / n_bands
        for i in range(n_bands):
            if i % 2:
                draw.rectangle([0, i * band, px_w, (i + 1) * band], fill=alt)
    elif orientation == 1:  # vertical bands
        band = px_w / n_bands
        for i in range(n_bands):
            if i % 2:
                draw.rectangle([i * band, 0, (i + 1) * band, px_h], fill=alt)
    else:  # coarse checker
        bw, bh = px_w / 3, px_h / 2
        for i in range(3):
            for j in range(2):
                if (i + j + seed) % 2:
                    draw.rectangle([i * bw, j * bh, (i + 1) * bw, (j + 1) * bh], fill=alt)
    r = int(min(px_w, px_h) * 0.18)
    corner = seed % 4
    cx = r + 8 if corner in (0, 2) else px_w - r - 8
    cy = r + 8 if corner in (0, 1) else px_h - r - 8
    draw.ellipse([cx - r, cy - r, cx + r, cy + r], fill=dark)
    draw.rectangle([0, 0, px_w - 1, px_h - 1], outline=dark, width=6)
    return img


def _wrap(text: str, font: str, size: float, max_w: float) -> list[str]:
    lines: list[str] = []
    current: list[str] = []
    for word in text.split():
        trial = " ".join(current + [word])
        if current and stringWidth(trial, font, size) > max_w:
            lines.append(" ".join(current))
            current = [word]
        else:
            current.append(word)
    if current:
        lines.append(" ".join(current))
    return lines


class _PaperWriter:
    """Cursor-based page writer that keeps figure/caption blocks atomic."""

    def __init__(self, path: Path):
        self.canvas = rl_canvas.Canvas(str(path), pagesize=LETTER, invariant=1)
        self.y = PAGE_H - MARGIN

    def ensure(self, height: float) -> None:
        if self.y - height < MARGIN:
            self.canvas.showPage()
            self.y = PAGE_H - MARGIN

    def gap(self, height: float) -> None:
        self.y -= height

    def line(self, text: str, *, size: float = BODY_SIZE, font: str = "Helvetica",
             centered: bool = False, color=(0, 0, 0)) -> None:
        leading = size * 1.35
        self.ensure(leading)
        self.canvas.setFont(font, size)
        self.canvas.setFillColorRGB(*color)
        baseline = self.y - size
        if centered:
            self.canvas.drawCentredString(PAGE_W / 2, baseline, text)
        else:
            self.canvas.drawString(MARGIN, baseline, text)
        self.y -= leading

    def paragraph(self, text: str, *, size: float = BODY_SIZE) -> None:
        for chunk in _wrap(text, "Helvetica", size, TEXT_W):
            self.line(chunk, size=size)

    def heading(self, text: str) -> None:
        self.ensure(HEADING_SIZE * 1.35 + 2 * BODY_SIZE * 1.35)
        self.gap(6)
        self.line(text, size=HEADING_SIZE, font="Helvetica-Bold")
        self.gap(2)

    def figure(self, image: Image.Image, w_pt: float, h_pt: float, caption: str) -> None:
        self.ensure(h_pt + 4 + CAPTION_SIZE * 1.35 + 14)
        self.gap(8)
        x = (PAGE_W - w_pt) / 2
        self.canvas.drawImage(ImageReader(image), x, self.y - h_pt,
                              width=w_pt, height=h_pt)
        self.y -= h_pt + 4
        self.line(caption, size=CAPTION_SIZE, centered=True)
        self.gap(10)

    def table(self, caption: str, w_pt: float, h_pt: float, seed: int) -> None:
        import colorsys

        self.ensure(CAPTION_SIZE * 1.35 + 4 + h_pt + 14)
        self.gap(8)
        self.line(caption, size=CAPTION_SIZE, centered=True)
        self.gap(2)
        hue = (0.55 + seed * 0.11) % 1.0
        light = colorsys.hsv_to_rgb(hue, 0.42, 0.94)
        mid = colorsys.hsv_to_rgb(hue, 0.50, 0.80)
        dark = colorsys.hsv_to_rgb(hue, 0.75, 0.35)
        x = (PAGE_W - w_pt) / 2
        top = self.y
        c = self.canvas
        c.setFillColorRGB(*light)
        c.rect(x, top - h_pt, w_pt, h_pt, stroke=0, fill=1)
        header_h = h_pt * 0.18
        c.setFillColorRGB(*dark)
        c.rect(x, top - header_h, w_pt, header_h, stroke=0, fill=1)
        n_rows = 4 + seed % 3
        row_h = (h_pt - header_h) / n_rows
        c.setFillColorRGB(*mid)
        for i in range(n_rows):
            if i % 2:
                c.rect(x, top - header_h - (i + 1) * row_h, w_pt, row_h,
                       stroke=0, fill=1)
        c.setStrokeColorRGB(*dark)
        c.setLineWidth(1.2)
        n_cols = 3 + seed % 2
        for j in range(1, n_cols):
            cx = x + w_pt * j / n_cols
            c.line(cx, top - h_pt, cx, top)
        c.rect(x, top - h_pt, w_pt, h_pt, stroke=1, fill=0)
        self.y -= h_pt + 12

    def equation(self, text: str, seed: int) -> None:
        import colorsys

        tw = stringWidth(text, "Helvetica", BODY_SIZE)
        band_w = tw + 28
        band_h = 30.0
        self.ensure(band_h + 12)
        self.gap(6)
        tint = colorsys.hsv_to_rgb((0.12 + seed * 0.23) % 1.0, 0.48, 0.92)
        x = (PAGE_W - band_w) / 2
        self.canvas.setFillColorRGB(*tint)
        self.canvas.rect(x, self.y - band_h, band_w, band_h, stroke=0, fill=1)
        self.canvas.setFont("Helvetica", BODY_SIZE)
        self.canvas.setFillColorRGB(0.05, 0.05, 0.1)
        baseline = self.y - band_h / 2 - BODY_SIZE * 0.35
        self.canvas.drawCentredString(PAGE_W / 2, baseline, text)
        self.y -= band_h + 12

    def save(self) -> None:
        self.canvas.showPage()
        self.canvas.save()


def build_fixture_pdf(path: Path) -> Path:
    """Ten-section source document with 6 figures, 4 tables, 3 equations."""
    w = _PaperWriter(path)
    w.line("Adaptive Stream Compaction for", size=TITLE_SIZE,
           font="Helvetica-Bold", centered=True)
    w.line("Real-Time Telemetry Narration", size=TITLE_SIZE,
           font="Helvetica-Bold", centered=True)
    w.line("Rosa Delgado and Mikel Aro", centered=True)
    w.gap(6)

    w.heading("Abstract")
    abstract = [make_sentence(900 + i, n) for i, n in enumerate((25, 25, 25, 20))]
    w.paragraph(" ".join(abstract))

    # --- section 1: two mid/tall figures, one table, one equation ---------
    h1 = "1 Ingest Overview"
    s1 = section_body(h1)
    w.heading(h1)
    w.paragraph(" ".join(s1[:2]))
    w.figure(make_asset_image(11, 480, 400), 240, 200,
             "Figure 1: Stage graph of the adaptive compaction pipeline.")
    w.paragraph(" ".join(s1[2:4]))
    w.figure(make_asset_image(12, 240, 400), 120, 200,
             "Figure 2: Vertical layering of the buffer hierarchy.")
    w.paragraph(s1[4])
    w.equation("R(w) = a f(w) + (1 - a) g(w) (1)", seed=1)
    w.paragraph(s1[5])
    w.table("Table 1: Throughput across window sizes.", 240, 200, seed=21)
    w.paragraph(s1[6])

    # --- section 2: one figure, two tables, one equation ------------------
    h2 = "2 Window Scheduling"
    s2 = section_body(h2)
    w.heading(h2)
    w.paragraph(" ".join(s2[:2]))
    w.figure(make_asset_image(13, 480, 400), 240, 200,
             "Figure 3: Scheduling lattice for rolling windows.")
    w.paragraph(" ".join(s2[2:4]))
    w.table("Table 2: Latency percentiles per schedule.", 240, 200, seed=22)
    w.paragraph(s2[4])
    w.equation("S(t) = b h(t) + c (2)", seed=2)
    w.paragraph(s2[5])
    w.table("Table 3: Cache pressure under replay load.", 260, 200, seed=23)
    w.paragraph(s2[6])

    # --- section 3: two wide figures, one mid figure, table, equation -----
    h3 = "3 Compaction Results"
    s3 = section_body(h3)
    w.heading(h3)
    w.paragraph(s3[0])
    w.figure(make_asset_image(14, 600, 300), 300, 150,
             "Figure 4: End-to-end throughput across compaction levels.")
    w.paragraph(s3[1])
    w.figure(make_asset_image(15, 576, 320), 288, 160,
             "Figure 5: Latency horizon for each encoder budget.")
    w.paragraph(s3[2])
    w.figure(make_asset_image(16, 480, 360), 240, 180,
             "Figure 6: Cluster stability of the arrival sampler.")
    w.paragraph(s3[3])
    w.table("Table 4: Segment counts by operator class.", 260, 200, seed=24)
    w.equation("C(n) = d n + e log(n) (3)", seed=3)
    w.paragraph(s3[4])

    # --- asset-free short sections ----------------------------------------
    for heading in ("4 Locality Effects", "5 Failure Handling", "6 Operator Costs",
                    "7 Related Methods", "8 Concluding Notes"):
        w.heading(heading)
        w.paragraph(" ".join(section_body(heading)))

    w.heading("References")
    w.line("[1] Delgado, R. Windowed compaction for dense telemetry feeds.",
           size=CAPTION_SIZE)
    w.line("[2] Aro, M. Budgeted narration planning for streamed decks.",
           size=CAPTION_SIZE)
    w.save()
    return path


def build_mini_pdf(path: Path) -> Path:
    """Two-section document with a single animatable figure; fast to process."""
    w = _PaperWriter(path)
    w.line("Compact Pipeline Sketches", size=TITLE_SIZE,
           font="Helvetica-Bold", centered=True)
    w.gap(6)

    w.heading("1 Pipeline Sketch")
    body1 = [make_sentence(700 + i, n) for i, n in enumerate((20, 20, 20, 15, 15))]
    w.paragraph(" ".join(body1[:3]))
    w.figure(make_asset_image(31, 480, 400), 240, 200,
             "Figure 1: Minimal stage layout of the sketch pipeline.")
    w.paragraph(" ".join(body1[3:]))

    w.heading("2 Observations")
    body2 = [make_sentence(800 + i, n) for i, n in enumerate((23, 23, 23, 23))]
    w.paragraph(" ".join(body2))
    w.save()
    return path


# --------------------------------------------------------------------------
# fixtures
# --------------------------------------------------------------------------


@pytest.fixture(scope="session")
def fixture_pdf(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("source") / "telemetry-narration.pdf"
    return build_fixture_pdf(path)


@pytest.fixture(scope="session")
def mini_pdf(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("source-mini") / "pipeline-sketches.pdf"
    return build_mini_pdf(path)


@pytest.fixture(scope="session")
def live_gateway():
    from papercast.gateway import Gateway, OfflineProvider

    return Gateway(provider=OfflineProvider(), mode="live", model_id="offline-v1")


@pytest.fixture(scope="session")
def parsed_document(fixture_pdf, tmp_path_factory):
    from papercast.ingest import parse_document

    asset_dir = tmp_path_factory.mktemp("parsed-assets")
    return parse_document(fixture_pdf, asset_dir)


@pytest.fixture(scope="session")
def fixture_library(parsed_document, live_gateway):
    from papercast.ingest import build_library

    return build_library(parsed_document, live_gateway)


@dataclasses.dataclass
class PipelineRun:
    """A completed end-to-end run with a recorded gateway fixture store."""

    pdf: Path
    store: Path
    jobs_root: Path
    job_id: str

    @property
    def job_dir(self) -> Path:
        return self.jobs_root / self.job_id


@pytest.fixture(scope="session")
def pipeline_run(fixture_pdf, tmp_path_factory) -> PipelineRun:
    """Full pipeline over the fixture PDF in record mode (session-cached)."""
    from papercast.gateway import Gateway, OfflineProvider
    from papercast.jobs import JobManager

    base = tmp_path_factory.mktemp("e2e")
    store = base / "gw-store"
    jobs_root = base / "jobs"
    gateway = Gateway(provider=OfflineProvider(), mode="record", store=store,
                      model_id="offline-v1")
    manager = JobManager(jobs_root, gateway)
    job = manager.create_job(fixture_pdf, job_id="session-e2e")
    manager.run_parse(job.job_id)
    manager.dialogue_turn(job.job_id, FIXTURE_DIALOGUE)
    manager.finalize(job.job_id)
    manager.run_plan(job.job_id)
    manager.run_render(job.job_id)
    manager.run_synthesize(job.job_id)
    manager.run_evaluate(job.job_id)
    return PipelineRun(pdf=fixture_pdf, store=store, jobs_root=jobs_root,
                       job_id=job.job_id)


def run_replay_pipeline(run: PipelineRun, root: Path, job_id: str) -> Path:
    """Repeat the recorded pipeline purely from the fixture store."""
    from papercast.gateway import gateway_from_env
    from papercast.jobs import JobManager

    gateway = gateway_from_env(mode="replay", store=str(run.store))
    manager = JobManager(root, gateway)
    job = manager.create_job(run.pdf, job_id=job_id)
    manager.run_parse(job.job_id)
    manager.dialogue_turn(job.job_id, FIXTURE_DIALOGUE)
    manager.finalize(job.job_id)
    manager.run_plan(job.job_id)
    manager.run_render(job.job_id)
    manager.run_synthesize(job.job_id)
    manager.run_evaluate(job.job_id)
    return root / job_id


def png_bytes(image: Image.Image) -> bytes:
    buf = io.BytesIO()
    image.save(buf, format="PNG")
    return buf.getvalue()
