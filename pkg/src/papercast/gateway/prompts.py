"""Prompt templates used by live chat/VLM providers.

Offline/synthetic providers dispatch on the structured task field instead;
these templates only shape what a hosted model sees.
"""

SYSTEM_PREAMBLE = (
    "You are a precise assistant inside a document-to-video pipeline. "
    "Always answer with a single JSON object matching the requested shape, no prose."
)

TASK_TEMPLATES = {
    "summarize_section": (
        "Summarize the chapter below in at most {target_words} words, then list 1-6 short key points.\n"
        "Return JSON: {{\"summary_text\": str, \"key_points\": [str]}}.\n"
        "Heading: {heading}\nChapter text:\n{body_text}"
    ),
    "describe_asset": (
        "Write one concise description of this {kind} using its caption and surrounding context.\n"
        "Return JSON: {{\"description\": str}}.\nCaption: {caption}\nContext:\n{context}"
    ),
    "classify_directives": (
        "Classify each instruction in the user message as a functional requirement or a technical "
        "specification and emit directives.\n"
        "Return JSON: {{\"directives\": [{{\"field\": str, \"value\": any, \"category\": "
        "\"functional\"|\"technical\"}}], \"questions\": [str], \"finalize\": bool}}.\n"
        "User message: {user_text}"
    ),
    "select_assets": (
        "Given this chapter summary and its candidate visual assets, select the ones worth showing.\n"
        "Return JSON: {{\"selected\": [{{\"asset_id\": str, \"reason\": str}}]}}.\n"
        "Summary: {summary_text}\nAssets: {assets}"
    ),
    "write_slides": (
        "Write slide titles, body text and narration for the chapter below, one entry per planned slide, "
        "respecting each slide's word budget.\n"
        "Return JSON: {{\"slides\": [{{\"slide_index\": int, \"title\": str, \"body_text\": str, "
        "\"narration_text\": str}}]}}.\nHeading: {heading}\nSummary: {summary_text}\nSlides: {items}"
    ),
    "animation_plan": (
        "Design a scene-by-scene animation plan (2-6 scenes) explaining this visual. Each scene needs a "
        "duration, narration, named elements, and timed actions drawn from: show, fade_out, highlight, "
        "move, transform, draw_arrow, camera_zoom.\n"
        "Return JSON: {{\"scenes\": [...]}}.\nCaption: {caption}\nDescription: {description}\nContext: {context}"
    ),
    "judge": (
        "Score the material below on a 0-10 scale for: {rubric}\n"
        "Return JSON: {{\"score\": number}}. Materials:\n{materials}"
    ),
    "score_text": (
        "Return per-token log-likelihoods for the text under your language model.\n"
        "Return JSON: {{\"tokens\": [str], \"token_logprobs\": [number]}}.\nText: {text}"
    ),
    "correct_transcript": (
        "Fix recognition errors in these transcript segments using the provided visual/OCR evidence. "
        "Keep segment count and order unchanged.\n"
        "Return JSON: {{\"segments\": [{{\"index\": int, \"text\": str}}]}}.\nSegments: {segments}\nEvidence: {evidence}"
    ),
    "quiz": (
        "Write exactly four multiple-choice questions about this document: one each on motivation, method, "
        "results, and contribution. Four options each, exactly one correct.\n"
        "Return JSON: {{\"items\": [{{\"category\": str, \"question\": str, \"options\": [str, str, str, str], "
        "\"correct_index\": int}}]}}.\nTitle: {title}\nSummaries: {summaries}"
    ),
    "answer_quiz": (
        "Answer this question using only the supplied video keyframes and transcript.\n"
        "Return JSON: {{\"choice\": int}}.\nQuestion: {question}\nOptions: {options}\nTranscript: {transcript}"
    ),
}

JUDGE_RUBRICS = {
    "narration_llm": (
        "semantic consistency of the narration script with the source document: coverage of its main "
        "claims, absence of contradictions, faithful terminology"
    ),
    "visual_vlm": (
        "semantic fidelity of the slide visuals to the source document: correct use of its figures and "
        "tables, readable text, appropriate emphasis"
    ),
    "sync_vlm": (
        "audio-visual consistency: whether each narration passage talks about what the concurrent "
        "slide or animation is showing"
    ),
}


def render_prompt(task: str, inputs: dict) -> str:
    template = TASK_TEMPLATES.get(task)
    if template is None:
        return f"Task: {task}\nInputs: {inputs}"
    import json

    safe = {
        key: (value if isinstance(value, str) else json.dumps(value, ensure_ascii=False))
        for key, value in inputs.items()
    }

    class _Default(dict):
        def __missing__(self, key):
            return ""

    return template.format_map(_Default(safe))
