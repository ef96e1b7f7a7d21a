"""Batch speaker-embedding extraction into a portable binary container."""

from .audio import read_wav_mono
from .backends import EMBEDDING_DIM, KNOWN_MODELS, load_backend, spectral_stub_embedding
from .binfmt import write_embeddings_binary
from .errors import (
    AnnotationError,
    AudioDecodeError,
    BackendUnavailableError,
    ExtractError,
    LayoutError,
    UnknownModelError,
)
from .extract import (
    ExtractionManifest,
    UtteranceStatus,
    copy_splits,
    discover_utterances,
    info_path_for,
    manifest_csv_lines,
    manifest_info_lines,
    manifest_path_for,
    parse_annotations,
    run_extraction,
    splits_path_for,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationError",
    "AudioDecodeError",
    "BackendUnavailableError",
    "EMBEDDING_DIM",
    "ExtractError",
    "ExtractionManifest",
    "KNOWN_MODELS",
    "LayoutError",
    "UnknownModelError",
    "UtteranceStatus",
    "copy_splits",
    "discover_utterances",
    "info_path_for",
    "load_backend",
    "manifest_csv_lines",
    "manifest_info_lines",
    "manifest_path_for",
    "parse_annotations",
    "read_wav_mono",
    "run_extraction",
    "spectral_stub_embedding",
    "splits_path_for",
    "write_embeddings_binary",
]
