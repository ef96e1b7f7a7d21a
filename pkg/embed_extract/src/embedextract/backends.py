"""Embedding backends.

Two backends share one contract: `embed(samples, rate) -> float32[192]`
where samples are mono floats in [-1, 1]. The default backend wraps a
pretrained neural speaker encoder and needs optional heavyweight
dependencies plus downloaded weights; the spectral stub is a
dependency-free, fully deterministic signal fingerprint used for
fixtures, tests, and offline smoke runs. Stub vectors are NOT speaker
embeddings and carry no speaker-identity training; they only exercise
the file formats and plumbing.
"""

from __future__ import annotations

from typing import Callable, Protocol

import numpy as np

from .errors import BackendUnavailableError, UnknownModelError

EMBEDDING_DIM = 192

_PRETRAINED_SOURCE = "speechbrain/spkrec-ecapa-voxceleb"
_STUB_REVISION = "spectral-stub/1"


class Backend(Protocol):
    def __call__(self, samples: np.ndarray, rate: int) -> np.ndarray: ...


def spectral_stub_embedding(samples: np.ndarray, rate: int) -> np.ndarray:
    """Deterministic 192-dim spectral fingerprint of a waveform.

    Magnitude spectrum of the whole signal, grouped into 192 equal bin
    bands; log-compressed band energies, L2-normalized. Identical input
    bytes give bit-identical vectors.
    """
    spectrum = np.abs(np.fft.rfft(np.asarray(samples, dtype=np.float64)))
    edges = np.linspace(0, spectrum.size, EMBEDDING_DIM + 1).astype(int)
    energy = np.zeros(EMBEDDING_DIM)
    squared = spectrum * spectrum
    for i in range(EMBEDDING_DIM):
        lo, hi = edges[i], edges[i + 1]
        if hi > lo:
            energy[i] = squared[lo:hi].sum()
    features = np.log1p(energy)
    norm = float(np.linalg.norm(features))
    if norm > 0.0:
        features /= norm
    return features.astype(np.float32)


def _load_pretrained_backend() -> Backend:
    try:
        import torch
        from speechbrain.inference.speaker import EncoderClassifier
    except ImportError as exc:
        raise BackendUnavailableError(
            "model 'speechbrain-ecapa' needs the speechbrain and torch packages "
            f"plus the pretrained weights ({_PRETRAINED_SOURCE}, downloaded on "
            "first use); install them, or pass --model spectral-stub for the "
            "offline deterministic backend"
        ) from exc

    encoder = EncoderClassifier.from_hparams(source=_PRETRAINED_SOURCE, run_opts={"device": "cpu"})

    def embed(samples: np.ndarray, rate: int) -> np.ndarray:
        waveform = torch.from_numpy(np.asarray(samples, dtype=np.float32)).unsqueeze(0)
        with torch.no_grad():
            vector = encoder.encode_batch(waveform, wav_lens=torch.ones(1))
        flat = vector.squeeze().cpu().numpy().astype(np.float32)
        if flat.shape != (EMBEDDING_DIM,):
            raise BackendUnavailableError(
                f"pretrained encoder returned shape {flat.shape}, expected ({EMBEDDING_DIM},)"
            )
        return flat

    return embed


_FACTORIES: dict[str, Callable[[], tuple[Backend, str]]] = {
    "speechbrain-ecapa": lambda: (_load_pretrained_backend(), _PRETRAINED_SOURCE),
    "spectral-stub": lambda: (spectral_stub_embedding, _STUB_REVISION),
}

KNOWN_MODELS = sorted(_FACTORIES)


def load_backend(model_id: str) -> tuple[Backend, str]:
    """Resolve a model id to (embedding function, revision string)."""
    try:
        factory = _FACTORIES[model_id]
    except KeyError:
        raise UnknownModelError(model_id, KNOWN_MODELS) from None
    return factory()
