"""Source-document parsing and the summarised asset library."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from PIL import Image

from papercast.errors import EmptyDocument, InconsistentInputs, UnreadablePdf
from papercast.ingest import (
    build_library,
    document_to_markdown,
    load_library,
    parse_document,
    save_library,
)

from conftest import EXPECTED_SUMMARY_WORDS, SECTION_SENTENCES


# --- structure ------------------------------------------------------------


def test_title_joins_headline_lines(parsed_document):
    assert parsed_document.title == (
        "Adaptive Stream Compaction for Real-Time Telemetry Narration"
    )


def test_sections_in_reading_order(parsed_document):
    headings = [s.heading for s in parsed_document.sections]
    assert headings == [
        "Abstract",
        *SECTION_SENTENCES.keys(),
        "References",
    ]
    assert [s.index for s in parsed_document.sections] == list(range(10))


def test_auxiliary_sections_flagged(parsed_document):
    by_heading = {s.heading: s for s in parsed_document.sections}
    assert by_heading["Abstract"].auxiliary
    assert by_heading["References"].auxiliary
    assert not by_heading["1 Ingest Overview"].auxiliary


def test_body_text_excludes_captions_and_equations(parsed_document):
    for section in parsed_document.sections:
        assert "Figure" not in section.body_text
        assert "Table" not in section.body_text
        assert "(1)" not in section.body_text


def test_section_word_counts_match_source(parsed_document):
    by_heading = {s.heading: s for s in parsed_document.sections}
    for heading, plan in SECTION_SENTENCES.items():
        assert len(by_heading[heading].body_text.split()) == sum(plan)


# --- assets ---------------------------------------------------------------


def test_all_asset_anchors_discovered(parsed_document):
    kinds = {}
    for asset in parsed_document.assets.values():
        kinds[asset.kind] = kinds.get(asset.kind, 0) + 1
    assert kinds == {"figure": 6, "table": 4, "equation": 3}
    assert set(parsed_document.assets) == {
        "fig-1", "fig-2", "fig-3", "fig-4", "fig-5", "fig-6",
        "tab-1", "tab-2", "tab-3", "tab-4", "eq-1", "eq-2", "eq-3",
    }


def test_assets_attach_to_their_sections(parsed_document):
    by_heading = {s.heading: s for s in parsed_document.sections}
    assert by_heading["1 Ingest Overview"].asset_ids == ["fig-1", "fig-2", "eq-1", "tab-1"]
    assert by_heading["2 Window Scheduling"].asset_ids == ["fig-3", "tab-2", "eq-2", "tab-3"]
    assert by_heading["3 Compaction Results"].asset_ids == [
        "fig-4", "fig-5", "fig-6", "tab-4", "eq-3"
    ]


def test_crops_exist_and_match_reported_size(parsed_document):
    for asset in parsed_document.assets.values():
        path = Path(asset.image_path)
        assert path.exists(), asset.asset_id
        with Image.open(path) as img:
            assert img.size == (asset.width_px, asset.height_px)


def test_figure_crops_preserve_drawn_aspect(parsed_document):
    # the figures were embedded with known width/height ratios
    expected = {
        "fig-1": 1.2, "fig-2": 0.6, "fig-3": 1.2,
        "fig-4": 2.0, "fig-5": 1.8, "fig-6": 4.0 / 3.0,
    }
    for asset_id, ratio in expected.items():
        asset = parsed_document.assets[asset_id]
        assert asset.aspect_ratio == pytest.approx(ratio, rel=0.02)


def test_captions_carry_anchor_text(parsed_document):
    assert parsed_document.assets["fig-1"].caption.startswith("Figure 1:")
    assert parsed_document.assets["tab-4"].caption.startswith("Table 4:")
    assert parsed_document.assets["eq-2"].caption.endswith("(2)")


def test_equations_are_wide_band_crops(parsed_document):
    for asset_id in ("eq-1", "eq-2", "eq-3"):
        assert parsed_document.assets[asset_id].aspect_ratio > 1.6


def test_asset_context_mentions_surrounding_prose(parsed_document):
    context = parsed_document.assets["fig-1"].context_text
    assert context
    assert len(context.split()) <= 300


# --- failure modes --------------------------------------------------------


def test_unreadable_pdf_raises(tmp_path):
    bogus = tmp_path / "broken.pdf"
    bogus.write_bytes(b"%PDF-1.4 truncated garbage")
    with pytest.raises(UnreadablePdf):
        parse_document(bogus, tmp_path / "assets")


def test_textless_pdf_raises(tmp_path):
    from reportlab.lib.pagesizes import LETTER
    from reportlab.pdfgen import canvas as rl_canvas

    blank = tmp_path / "blank.pdf"
    c = rl_canvas.Canvas(str(blank), pagesize=LETTER)
    c.rect(100, 100, 200, 200, stroke=1, fill=1)
    c.showPage()
    c.save()
    with pytest.raises(EmptyDocument):
        parse_document(blank, tmp_path / "assets")


# --- library --------------------------------------------------------------


def test_library_summarises_every_section(fixture_library):
    assert set(fixture_library.summaries) == set(range(10))
    for heading, words in EXPECTED_SUMMARY_WORDS.items():
        summary = next(s for s in fixture_library.summaries.values()
                       if s.heading == heading)
        assert summary.word_count == words
        assert summary.key_points


def test_library_descriptions_cover_all_assets(fixture_library):
    assert len(fixture_library.assets) == 13
    for asset in fixture_library.assets.values():
        assert asset.context_description.strip()


def test_markdown_snapshot_contains_structure(parsed_document):
    text = document_to_markdown(parsed_document)
    assert "1 Ingest Overview" in text
    assert "Figure 1:" in text


def test_library_round_trip_with_relative_asset_paths(fixture_library, tmp_path):
    target = tmp_path / "library.json"
    save_library(fixture_library, target)

    raw = json.loads(target.read_text())
    for doc in raw["assets"].values():
        assert not Path(doc["image_path"]).is_absolute()
        assert "\\" not in doc["image_path"]

    loaded = load_library(target)
    assert loaded.doc_id == fixture_library.doc_id
    assert set(loaded.assets) == set(fixture_library.assets)
    for asset_id, asset in loaded.assets.items():
        assert Path(asset.image_path).exists(), asset_id
        assert asset == fixture_library.assets[asset_id]
    assert loaded.summaries == fixture_library.summaries


def test_load_rejects_tampered_library(fixture_library, tmp_path):
    target = tmp_path / "library.json"
    save_library(fixture_library, target)
    raw = json.loads(target.read_text())
    del raw["summaries"]
    target.write_text(json.dumps(raw))
    with pytest.raises(InconsistentInputs):
        load_library(target)
