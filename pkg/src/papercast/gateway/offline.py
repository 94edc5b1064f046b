"""Deterministic synthetic provider implementing every gateway capability.

This provider exists so the whole pipeline can run (and record replay
fixtures) with no network and no model keys: outputs are simple,
schema-valid, and a pure function of the request. Live providers are in
``http_provider``; the two are interchangeable behind the gateway.
"""

from __future__ import annotations

import hashlib
import io
import math
import re

import numpy as np

from ..media import read_wav
from .request import ModelRequest, ModelResponse

SPEECH_RATE_WPS = 2.5
TTS_SAMPLE_RATE = 16000
WORD_SLOT_S = 1.0 / SPEECH_RATE_WPS
TEXT_EMBED_DIM = 256
IMAGE_EMBED_SIZE = (48, 27)  # 16:9 thumbnail; embedding dim = 48*27


def _stable_hash(text: str) -> int:
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")


def _sentences(text: str) -> list[str]:
    parts = re.split(r"(?<=[.!?])\s+", text.strip())
    return [p.strip() for p in parts if p.strip()]


def _words(text: str) -> list[str]:
    return text.split()


def _take_words(text: str, n: int) -> str:
    return " ".join(_words(text)[:n])


class OfflineProvider:
    """Rule-based stand-in for chat/VLM/embedding/TTS/ASR/OCR services."""

    name = "offline"

    def supports(self, capability: str) -> bool:
        return True

    def call(self, request: ModelRequest) -> ModelResponse:
        handler = getattr(self, f"_cap_{request.capability}")
        return handler(request)

    # --- chat -------------------------------------------------------------

    def _cap_chat(self, request: ModelRequest) -> ModelResponse:
        payload = dict(request.payload)
        task = payload.get("task", "")
        inputs = payload.get("inputs", {})
        params = payload.get("params", {})
        handler = getattr(self, f"_task_{task}", None)
        if handler is None:
            return ModelResponse(content={"text": f"(no opinion on task {task!r})"})
        return handler(inputs, params)

    _cap_vlm_chat = _cap_chat

    # --- embeddings -------------------------------------------------------

    def _cap_embed_text(self, request: ModelRequest) -> ModelResponse:
        text = request.payload.get("text", "")
        vec = np.zeros(TEXT_EMBED_DIM, dtype=np.float64)
        padded = f"  {text.lower()}  "
        for i in range(len(padded) - 2):
            tri = padded[i : i + 3]
            vec[_stable_hash(tri) % TEXT_EMBED_DIM] += 1.0
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            vec[0] = 1.0
            norm = 1.0
        vec = vec / norm
        return ModelResponse(content={"embedding": vec.tolist()})

    def _cap_embed_image(self, request: ModelRequest) -> ModelResponse:
        from PIL import Image

        data = request.blobs.get("image")
        if data is None:
            raise ValueError("embed_image requires an 'image' blob")
        img = Image.open(io.BytesIO(data)).convert("L").resize(IMAGE_EMBED_SIZE)
        vec = np.asarray(img, dtype=np.float64).reshape(-1)
        vec = vec - vec.mean()
        norm = float(np.linalg.norm(vec))
        if norm < 1e-9:
            vec = np.zeros(vec.shape[0])
            vec[0] = 1.0
        else:
            vec = vec / norm
        return ModelResponse(content={"embedding": vec.tolist()})

    # --- speech -----------------------------------------------------------

    def _cap_tts(self, request: ModelRequest) -> ModelResponse:
        text = request.payload.get("text", "")
        rate = int(request.payload.get("sample_rate", TTS_SAMPLE_RATE))
        words = _words(text)
        slot = int(round(WORD_SLOT_S * rate))
        if not words:
            samples = np.zeros(int(0.2 * rate), dtype=np.float64)
        else:
            chunks = []
            for word in words:
                freq = 300.0 + 25.0 * (_stable_hash(word.lower()) % 20)
                t = np.arange(slot, dtype=np.float64) / rate
                burst = 0.3 * np.sin(2 * math.pi * freq * t)
                # short intra-word gap keeps bursts distinct without breaking VAD
                gap = int(0.06 * rate)
                burst[-gap:] = 0.0
                chunks.append(burst)
            samples = np.concatenate(chunks)
        import wave

        buf = io.BytesIO()
        with wave.open(buf, "wb") as wf:
            wf.setnchannels(1)
            wf.setsampwidth(2)
            wf.setframerate(rate)
            wf.writeframes((np.clip(samples, -1, 1) * 32767.0).astype(np.int16).tobytes())
        duration = len(samples) / rate
        return ModelResponse(content={"duration_s": duration}, blob=buf.getvalue())

    def _cap_asr(self, request: ModelRequest) -> ModelResponse:
        data = request.blobs.get("audio")
        if data is None:
            raise ValueError("asr requires an 'audio' blob")
        import tempfile

        with tempfile.NamedTemporaryFile(suffix=".wav") as handle:
            handle.write(data)
            handle.flush()
            samples, rate = read_wav(handle.name)
        segments = self._voice_segments(samples.astype(np.float64) / 32768.0, rate)
        out = []
        for i, (start, end) in enumerate(segments):
            n_words = max(1, int(round((end - start) / WORD_SLOT_S)))
            text = f"Narration passage {i + 1} covering about {n_words} spoken words."
            out.append({"start_s": round(start, 3), "end_s": round(end, 3), "text": text})
        return ModelResponse(content={"segments": out})

    @staticmethod
    def _voice_segments(samples: np.ndarray, rate: int, frame_s: float = 0.05,
                        threshold: float = 0.01, min_gap_s: float = 0.25) -> list[tuple[float, float]]:
        frame = max(1, int(frame_s * rate))
        n_frames = len(samples) // frame
        if n_frames == 0:
            return []
        trimmed = samples[: n_frames * frame].reshape(n_frames, frame)
        rms = np.sqrt((trimmed**2).mean(axis=1))
        active = rms > threshold
        segments: list[tuple[float, float]] = []
        start = None
        gap = 0
        max_gap = int(round(min_gap_s / frame_s))
        for i, on in enumerate(active):
            if on:
                if start is None:
                    start = i
                gap = 0
            elif start is not None:
                gap += 1
                if gap > max_gap:
                    segments.append((start * frame_s, (i - gap + 1) * frame_s))
                    start = None
                    gap = 0
        if start is not None:
            end = n_frames - gap if gap else n_frames
            segments.append((start * frame_s, end * frame_s))
        return [(s, e) for s, e in segments if e - s > 0.1]

    # --- OCR --------------------------------------------------------------

    def _cap_ocr(self, request: ModelRequest) -> ModelResponse:
        # No real character recognition offline; callers treat empty OCR as
        # "nothing usable" and fall back to language-only correction.
        return ModelResponse(content={"text": ""})

    # --- chat task handlers ----------------------------------------------

    def _task_summarize_section(self, inputs, params) -> ModelResponse:
        body = inputs.get("body_text", "")
        target = int(params.get("target_words", 90))
        sentences = _sentences(body)
        picked: list[str] = []
        count = 0
        for sent in sentences:
            picked.append(sent)
            count += len(_words(sent))
            if count >= target:
                break
        summary = " ".join(picked)
        key_points = []
        for sent in picked[:4]:
            clause = sent.split(",")[0]
            key_points.append(_take_words(clause, 6).rstrip(".") or clause)
        if not key_points:
            key_points = [_take_words(body, 6) or inputs.get("heading", "section")]
        return ModelResponse(content={"summary_text": summary, "key_points": key_points})

    def _task_describe_asset(self, inputs, params) -> ModelResponse:
        kind = inputs.get("kind", "figure")
        caption = inputs.get("caption", "").strip()
        context = inputs.get("context", "").strip()
        caption_core = re.sub(r"^(Figure|Fig\.|Table|Equation)\s*\d+[.:]?\s*", "", caption, flags=re.I)
        parts = [f"A {kind}"]
        if caption_core:
            parts.append(f"presenting {caption_core.rstrip('.')}")
        if context:
            parts.append(f"It appears in a passage discussing {_take_words(context, 18).rstrip('.')}.")
        if len(parts) == 1:
            parts.append(f"referenced as {inputs.get('asset_id', 'an item')} in the document.")
        return ModelResponse(content={"description": " ".join(parts).strip() + "."})

    # directive extraction for the requirement dialogue
    _DURATION_RE = re.compile(r"(\d+(?:\.\d+)?)\s*(seconds?|secs?|s\b|minutes?|mins?|m\b)", re.I)
    _FPS_RE = re.compile(r"(\d+)\s*fps", re.I)
    _FIGURE_RE = re.compile(r"\b(?:figure|fig\.?)\s*(\d+)", re.I)
    _SECTION_RE = re.compile(r"\bsections?\s+(\d+)", re.I)
    _FONT_RE = re.compile(r"\bfont\s+(?:to\s+)?([A-Za-z][\w -]{1,30})", re.I)

    def _task_classify_directives(self, inputs, params) -> ModelResponse:
        text = inputs.get("user_text", "")
        low = text.lower()
        directives = []
        questions = []

        def add(field, value, category):
            directives.append({"field": field, "value": value, "category": category})

        m = self._DURATION_RE.search(low)
        if m:
            qty = float(m.group(1))
            unit = m.group(2)
            seconds = qty * 60 if unit.startswith(("m", "min")) else qty
            add("target_duration_s", seconds, "technical")
        if "1080" in low:
            add("resolution", "1920x1080", "technical")
        elif "720" in low:
            add("resolution", "1280x720", "technical")
        m = self._FPS_RE.search(low)
        if m:
            add("fps", int(m.group(1)), "technical")
        if re.search(r"\b(no|without|disable[d]?|skip|turn off)\b[^.]*\banimation", low):
            add("enable_animations", False, "functional")
        elif "animation" in low:
            add("enable_animations", True, "functional")
        if re.search(r"\b(no|without|disable[d]?|skip|mute|turn off)\b[^.]*\bnarration", low):
            add("enable_narration", False, "functional")
        elif "narration" in low or "voice" in low:
            add("enable_narration", True, "functional")
        if "expert" in low or "researcher" in low:
            add("audience", "expert", "functional")
        elif "graduate" in low or "student" in low:
            add("audience", "graduate", "functional")
        elif "general" in low or "public" in low or "lay audience" in low:
            add("audience", "general", "functional")
        if re.search(r"\b(explain|detail|deep|walk through|elaborate)", low):
            for m in self._FIGURE_RE.finditer(low):
                add("detailed_figure_ids", f"fig-{m.group(1)}", "functional")
        if re.search(r"\b(focus|emphasi[sz]e|highlight)", low):
            for m in self._SECTION_RE.finditer(low):
                add("emphasis_sections", int(m.group(1)), "functional")
        m = self._FONT_RE.search(text)
        if m:
            add("font_family", m.group(1).strip(), "technical")
        for palette in ("dark", "light", "ocean", "slate", "warm"):
            if re.search(rf"\b{palette}\b[^.]*\b(scheme|palette|colou?rs?|theme)\b", low) or re.search(
                rf"\b(scheme|palette|colou?rs?|theme)\b[^.]*\b{palette}\b", low
            ):
                add("color_scheme", palette, "technical")
                break
        finalize = bool(re.search(r"\b(finali[sz]e|looks good|go ahead|that's all|done)\b", low))
        if not directives and not finalize:
            questions.append(
                "I could not map that to a setting. Which aspect should change: "
                "duration, resolution, style, narration, animations, or a specific figure?"
            )
        return ModelResponse(content={"directives": directives, "questions": questions, "finalize": finalize})

    def _task_select_assets(self, inputs, params) -> ModelResponse:
        summary = inputs.get("summary_text", "")
        assets = inputs.get("assets", [])
        if not assets:
            return ModelResponse(content={"selected": []})
        summary_tokens = {w for w in re.findall(r"[a-z0-9]+", summary.lower()) if len(w) >= 4}
        scored = []
        for idx, asset in enumerate(assets):
            blob = f"{asset.get('caption', '')} {asset.get('description', '')}".lower()
            tokens = {w for w in re.findall(r"[a-z0-9]+", blob) if len(w) >= 4}
            score = len(summary_tokens & tokens)
            scored.append((score, idx, asset))
        scored.sort(key=lambda item: (-item[0], item[1]))
        keep = max(1, math.ceil(len(assets) / 2))
        selected = []
        for score, idx, asset in scored[:keep]:
            reason = (
                f"shares {score} content terms with the chapter summary"
                if score
                else "fills the chapter's visual slot"
            )
            selected.append({"asset_id": asset["asset_id"], "reason": reason})
        return ModelResponse(content={"selected": selected})

    def _task_write_slides(self, inputs, params) -> ModelResponse:
        heading = inputs.get("heading", "")
        summary = inputs.get("summary_text", "")
        key_points = inputs.get("key_points", [])
        items = inputs.get("items", [])
        sentences = _sentences(summary) or [summary or heading]
        budgets = [max(1, int(item.get("word_budget", 40))) for item in items]
        total_budget = sum(budgets)
        # allocate sentences to slides proportionally to word budgets
        allocations: list[list[str]] = [[] for _ in items]
        cursor = 0
        acc = 0.0
        for slide_i, budget in enumerate(budgets):
            acc += budget
            share = acc / total_budget if total_budget else 1.0
            target_idx = int(round(share * len(sentences)))
            take = sentences[cursor:max(target_idx, cursor + (1 if cursor < len(sentences) else 0))]
            allocations[slide_i] = take
            cursor += len(take)
        if cursor < len(sentences) and allocations:
            allocations[-1].extend(sentences[cursor:])
        slides = []
        for item, budget, alloc in zip(items, budgets, allocations):
            title = heading if item.get("slide_index", 0) == 0 else f"{heading} (cont.)"
            body = " ".join(alloc)
            narration = body
            n_words = len(_words(narration))
            point_i = 0
            while n_words < budget and key_points:
                extra = f"A central point here is {key_points[point_i % len(key_points)].lower()}."
                narration = f"{narration} {extra}".strip()
                n_words = len(_words(narration))
                point_i += 1
                if point_i > 24:
                    break
            if n_words > budget * 1.15:
                narration = _take_words(narration, int(budget * 1.15)).rstrip(",;") + "."
            slides.append(
                {
                    "slide_index": item.get("slide_index", 0),
                    "title": title,
                    "body_text": body,
                    "narration_text": narration or f"This part covers {heading}.",
                }
            )
        return ModelResponse(content={"slides": slides})

    _SCENE_WORDS = (10, 14, 12, 12)
    _SCENE_DURATIONS = (8.0, 12.0, 10.0, 8.0)

    def _task_animation_plan(self, inputs, params) -> ModelResponse:
        asset_id = inputs.get("asset_id", "asset")
        caption = inputs.get("caption", "").strip() or asset_id
        description = inputs.get("description", "").strip()
        context = inputs.get("context", "").strip()
        topic = re.sub(r"^(Figure|Fig\.|Table|Equation)\s*\d+[.:]?\s*", "", caption, flags=re.I).rstrip(".")
        source = " ".join(
            w for w in _words(f"{description} {context}") if re.search(r"[a-z0-9]", w.lower())
        )

        def narration(n_words: int, lead: str) -> str:
            text = lead
            filler = _words(source) or ["the", "figure", "contents"]
            i = 0
            while len(_words(text)) < n_words:
                text += " " + filler[i % len(filler)]
                i += 1
            return _take_words(text, n_words).rstrip(".,;") + "."

        scenes = []
        leads = (
            f"This animation walks through {topic}.",
            "Step by step, the structure unfolds to show",
            "Zooming in reveals the central mechanism of",
            "To summarize, the key takeaway is",
        )
        for i, (n_words, duration, lead) in enumerate(
            zip(self._SCENE_WORDS, self._SCENE_DURATIONS, leads)
        ):
            scene_id = f"scene-{i + 1}"
            elements = {
                "main_image": {"kind": "image", "source": asset_id, "x": 0.2, "y": 0.2, "w": 0.6, "h": 0.6},
                "headline": {"kind": "text", "text": topic[:60], "x": 0.1, "y": 0.05, "size": 0.06},
            }
            actions = [
                {"type": "show", "target": "headline", "params": {}, "start_s": 0.0, "end_s": 1.0},
                {"type": "show", "target": "main_image", "params": {}, "start_s": 0.5, "end_s": 1.5},
            ]
            if i == 1:
                elements["marker"] = {"kind": "shape", "shape": "rect", "x": 0.25, "y": 0.25, "w": 0.2, "h": 0.2}
                actions.append(
                    {"type": "highlight", "target": "marker", "params": {"color": "#ffcc00"},
                     "start_s": 2.0, "end_s": duration - 1.0}
                )
                actions.append(
                    {"type": "draw_arrow", "target": "pointer",
                     "params": {"from": [0.1, 0.8], "to": [0.35, 0.45]},
                     "start_s": 2.5, "end_s": duration - 0.5}
                )
                elements["pointer"] = {"kind": "arrow"}
            if i == 2:
                # starts exactly when the opening "show" on the same element ends
                actions.append(
                    {"type": "camera_zoom", "target": "main_image",
                     "params": {"scale": 1.6, "center": [0.5, 0.5]},
                     "start_s": 1.5, "end_s": duration - 1.0}
                )
            if i == 3:
                actions.append(
                    {"type": "fade_out", "target": "main_image", "params": {},
                     "start_s": duration - 2.0, "end_s": duration - 0.5}
                )
            scenes.append(
                {
                    "scene_id": scene_id,
                    "duration_s": duration,
                    "narration": narration(n_words, leads[i]),
                    "elements": elements,
                    "actions": actions,
                }
            )
        return ModelResponse(content={"scenes": scenes})

    def _task_judge(self, inputs, params) -> ModelResponse:
        seed = _stable_hash(f"{inputs.get('kind')}|{inputs.get('digest', '')}")
        score = 4.0 + (seed % 11) / 10.0
        rationale = f"The {inputs.get('kind', 'overall')} quality is consistently strong."
        return ModelResponse(content={"score": score, "rationale": rationale})

    def _task_score_text(self, inputs, params) -> ModelResponse:
        tokens = _words(inputs.get("text", ""))
        logprobs = [-(1.0 + (_stable_hash(tok.lower()) % 300) / 100.0) for tok in tokens]
        return ModelResponse(content={"tokens": tokens, "token_logprobs": logprobs})

    _TYPO_TABLE = {
        "teh": "the", "recieve": "receive", "seperate": "separate", "occured": "occurred",
        "untill": "until", "acheive": "achieve", "arhitecture": "architecture",
    }

    def _task_correct_transcript(self, inputs, params) -> ModelResponse:
        segments = inputs.get("segments", [])
        out = []
        for seg in segments:
            words = _words(seg.get("text", ""))
            fixed = [self._TYPO_TABLE.get(w.lower(), w) for w in words]
            out.append({"index": seg.get("index"), "text": " ".join(fixed)})
        return ModelResponse(content={"segments": out})

    def _task_quiz(self, inputs, params) -> ModelResponse:
        title = inputs.get("title", "this work")
        summaries = inputs.get("summaries", [])
        first = _take_words(summaries[0], 12) if summaries else title
        mid = _take_words(summaries[len(summaries) // 2], 12) if summaries else title
        last = _take_words(summaries[-1], 12) if summaries else title
        items = [
            {
                "category": "motivation",
                "question": f"What problem motivates {title}?",
                "options": [
                    f"The challenge described as: {first}",
                    "Reducing hardware manufacturing costs",
                    "Archiving historical newspaper scans",
                    "Scheduling conference travel automatically",
                ],
                "correct_index": 0,
            },
            {
                "category": "method",
                "question": "Which approach does the work take?",
                "options": [
                    f"The approach summarized as: {mid}",
                    "A purely manual annotation effort",
                    "Random search over unrelated tasks",
                    "Outsourcing the task to crowd workers",
                ],
                "correct_index": 0,
            },
            {
                "category": "results",
                "question": "What do the reported results show?",
                "options": [
                    f"Findings in line with: {last}",
                    "No measurable effect was observed",
                    "The method only works on synthetic noise",
                    "Results were withheld from the report",
                ],
                "correct_index": 0,
            },
            {
                "category": "contribution",
                "question": "What is the main contribution?",
                "options": [
                    f"A contribution centered on: {first}",
                    "A new programming language standard",
                    "A catalog of unrelated datasets",
                    "A hardware reference design",
                ],
                "correct_index": 0,
            },
        ]
        return ModelResponse(content={"items": items})

    def _task_answer_quiz(self, inputs, params) -> ModelResponse:
        question = inputs.get("question", "")
        options = inputs.get("options", [])
        transcript = inputs.get("transcript", "")
        evidence = {w for w in re.findall(r"[a-z0-9]+", f"{question} {transcript}".lower()) if len(w) >= 4}
        best_i, best_score = 0, -1
        for i, option in enumerate(options):
            tokens = {w for w in re.findall(r"[a-z0-9]+", option.lower()) if len(w) >= 4}
            score = len(evidence & tokens)
            if score > best_score:
                best_i, best_score = i, score
        return ModelResponse(content={"choice": best_i})
