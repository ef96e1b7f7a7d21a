"""Exception types for the extraction adapter."""

from __future__ import annotations

from pathlib import Path


class ExtractError(Exception):
    """Base class for all adapter failures."""


class AudioDecodeError(ExtractError):
    """A single audio file could not be decoded.

    Callers treat this as a per-utterance failure (recorded in the
    manifest), never as a fatal condition.
    """

    def __init__(self, path: Path, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class BackendUnavailableError(ExtractError):
    """The requested embedding backend cannot run in this environment."""


class UnknownModelError(ExtractError):
    def __init__(self, model_id: str, known: list[str]):
        self.model_id = model_id
        super().__init__(f"unknown model {model_id!r}; available: {', '.join(known)}")


class AnnotationError(ExtractError):
    """The annotations file is malformed or does not cover the audio."""


class LayoutError(ExtractError):
    """The audio directory does not follow the speaker_id/... layout."""
