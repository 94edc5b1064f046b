"""Exception hierarchy for the pipeline and evaluation suite."""


class PapercastError(Exception):
    """Base class for all package errors."""


# --- document ingestion ---

class UnreadablePdf(PapercastError):
    """The input file is not a readable PDF (corrupt, encrypted, wrong type)."""


class EmptyDocument(PapercastError):
    """The PDF contains no extractable text."""


class MissingContext(PapercastError):
    """An asset has neither caption nor adjacent text to describe it from."""


class InconsistentInputs(PapercastError):
    """Library build inputs disagree (doc ids, asset ids, missing pieces)."""


# --- requirement dialogue ---

class SessionFinalized(PapercastError):
    """A turn was submitted to an already-finalized session."""


class ValidationFailure(PapercastError):
    """Config validation failed; ``violations`` lists every violated bound."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


# --- planning ---

class BudgetInfeasible(PapercastError):
    """Target duration too short for the mandatory per-section narration."""


class Overflow(PapercastError):
    """Slide text exceeds box capacity at minimum font size."""


class PlanInvalid(PapercastError):
    """Animation plan violates schema or timing invariants after repair."""


class UnknownActionType(PapercastError):
    """Scene action type outside the closed template library."""


class TemplateParamMissing(PapercastError):
    """A scene action lacks a parameter its template requires."""


class BackendUnavailable(PapercastError):
    """The animation rendering backend is not available."""


class RenderFailure(PapercastError):
    """A renderer (slide or animation backend) failed."""


# --- synthesis ---

class MissingTrack(PapercastError):
    """A storyboard item has no narration track at timeline time."""


class MediaToolFailure(PapercastError):
    """The external media toolchain failed; carries captured diagnostics."""

    def __init__(self, message, diagnostics=""):
        self.diagnostics = diagnostics
        super().__init__(message)


# --- evaluation ---

class NoAudioStream(PapercastError):
    """The video has no audio track."""


class DecodeFailure(PapercastError):
    """The video could not be decoded."""


class EmptyText(PapercastError):
    """Text is empty after tokenization."""


class UnparseableVerdict(PapercastError):
    """Judge output could not be parsed into an in-range score."""


class IncompleteInputs(PapercastError):
    """Report compilation is missing a sub-metric; names the field."""


# --- model gateway ---

class GatewayFailure(PapercastError):
    """A gateway call failed after retries."""


class SchemaViolation(GatewayFailure):
    """Model output failed schema validation (after any repair re-prompt)."""


class ReplayMiss(GatewayFailure):
    """Replay mode had no fixture for the request; no network was touched."""


class ProviderError(GatewayFailure):
    """Provider call failed after bounded retries."""


class RateLimited(ProviderError):
    """Provider rate limit; ``retry_after_s`` carries the server hint."""

    def __init__(self, message, retry_after_s=None):
        self.retry_after_s = retry_after_s
        super().__init__(message)


class CapabilityUnconfigured(GatewayFailure):
    """A required model capability is not configured for the active mode."""


# --- job service ---

class StageOrderViolation(PapercastError):
    """A pipeline stage was requested before its predecessor completed."""


class PortInUse(PapercastError):
    """The requested service port is already bound."""


class JobNotFound(PapercastError):
    """No job with the given id exists in the store."""
