"""Requirement-dialogue behaviour: directives, bounds, and finalisation."""

from __future__ import annotations

import pytest

from papercast.dialogue import (
    GenerationConfig,
    finalize_config,
    process_turn,
    start_session,
)
from papercast.dialogue.session import MAX_TURNS
from papercast.errors import SessionFinalized, ValidationFailure


@pytest.fixture
def session(fixture_library):
    return start_session(fixture_library)


def test_defaults_are_complete_and_valid(session):
    config = finalize_config(session)
    assert config.technical.target_duration_s == 300.0
    assert config.technical.resolution == "1280x720"
    assert config.technical.fps == 30
    assert config.functional.enable_animations is True
    assert config.functional.enable_narration is True
    assert config.functional.audience == "general"


def test_technical_directives_apply(session, live_gateway):
    state, reply = process_turn(session, "Make it 4 minutes at 24 fps in 1080p.",
                                live_gateway)
    assert state.config.technical.target_duration_s == 240.0
    assert state.config.technical.fps == 24
    assert state.config.technical.resolution == "1920x1080"
    assert "Updated:" in reply


def test_style_directives_apply(session, live_gateway):
    state, _ = process_turn(session, "Use a dark color scheme and set the font to Georgia.",
                            live_gateway)
    assert state.config.technical.color_scheme == "dark"
    assert state.config.technical.font_family == "Georgia"


def test_negated_toggles_disable_features(session, live_gateway):
    state, _ = process_turn(session, "Skip the animations and use no narration.",
                            live_gateway)
    assert state.config.functional.enable_animations is False
    assert state.config.functional.enable_narration is False


def test_audience_detected(session, live_gateway):
    state, _ = process_turn(session, "Aim this at expert researchers.", live_gateway)
    assert state.config.functional.audience == "expert"


def test_figure_pin_resolves_to_asset_id(session, live_gateway):
    state, _ = process_turn(session, "Please explain figure 4 in detail.", live_gateway)
    assert state.config.functional.detailed_figure_ids == ["fig-4"]


def test_unknown_figure_pin_rejected(session, live_gateway):
    state, reply = process_turn(session, "Please explain figure 9 in detail.",
                                live_gateway)
    assert state.config.functional.detailed_figure_ids == []
    assert "Not applied:" in reply


def test_emphasis_section_applies(session, live_gateway):
    state, _ = process_turn(session, "Focus on section 3.", live_gateway)
    assert state.config.functional.emphasis_sections == [3]


def test_emphasis_rejects_auxiliary_section(session, live_gateway):
    state, reply = process_turn(session, "Focus on section 0.", live_gateway)
    assert state.config.functional.emphasis_sections == []
    assert "Not applied:" in reply


def test_out_of_range_duration_rejected(session, live_gateway):
    state, reply = process_turn(session, "Make it 10 seconds.", live_gateway)
    assert state.config.technical.target_duration_s == 300.0
    assert "Not applied:" in reply and "range" in reply


def test_out_of_range_fps_rejected(session, live_gateway):
    state, reply = process_turn(session, "Render at 500 fps.", live_gateway)
    assert state.config.technical.fps == 30
    assert "Not applied:" in reply


def test_unmapped_text_asks_a_question(session, live_gateway):
    state, reply = process_turn(session, "Tell me a joke.", live_gateway)
    assert state.config == session.config
    assert "?" in reply
    assert state.user_turns == 1


def test_provenance_records_turn_numbers(session, live_gateway):
    state, _ = process_turn(session, "Make it 2 minutes.", live_gateway)
    state, _ = process_turn(state, "Use a warm palette.", live_gateway)
    fields = [(p["field"], p["turn"]) for p in state.config.provenance]
    assert ("target_duration_s", 1) in fields
    assert ("color_scheme", 2) in fields


def test_finalize_keyword_locks_session(session, live_gateway):
    state, reply = process_turn(session, "That looks good, go ahead.", live_gateway)
    assert state.finalized
    assert "locked in" in reply
    with pytest.raises(SessionFinalized):
        process_turn(state, "Actually, make it 2 minutes.", live_gateway)


def test_turn_cap_auto_finalizes(session, live_gateway):
    state = session
    for i in range(MAX_TURNS):
        assert not state.finalized
        state, reply = process_turn(state, f"Unmappable ramble number {i}.",
                                    live_gateway)
    assert state.finalized
    assert f"Turn limit of {MAX_TURNS}" in reply


def test_finalize_config_validates(session):
    config = finalize_config(session)
    config.technical.fps = 500
    with pytest.raises(ValidationFailure) as err:
        config.validate()
    assert any("fps" in v for v in err.value.violations)


def test_config_round_trip(session, live_gateway):
    state, _ = process_turn(session, "Make it 3 minutes at 15 fps, dark theme.",
                            live_gateway)
    config = finalize_config(state)
    clone = GenerationConfig.from_json(config.to_json())
    assert clone == config
