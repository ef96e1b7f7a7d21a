"""Minimal WAV decoding using the standard library.

The adapter only needs mono float samples; anything the `wave` module
cannot parse, or sample layouts outside plain 16-bit PCM, is reported as
an AudioDecodeError so the caller can record the utterance as failed
and move on.
"""

from __future__ import annotations

import wave
from pathlib import Path

import numpy as np

from .errors import AudioDecodeError


def read_wav_mono(path: Path) -> tuple[np.ndarray, int]:
    """Decode a WAV file to (float64 samples in [-1, 1], sample rate).

    Multi-channel audio is averaged down to one channel.
    """
    try:
        with wave.open(str(path), "rb") as reader:
            channels = reader.getnchannels()
            width = reader.getsampwidth()
            rate = reader.getframerate()
            frames = reader.getnframes()
            payload = reader.readframes(frames)
    except (wave.Error, EOFError, OSError) as exc:
        raise AudioDecodeError(path, f"not a readable WAV file ({exc})") from exc

    if width != 2:
        raise AudioDecodeError(path, f"unsupported sample width {width * 8} bit (need 16)")
    if channels < 1 or rate <= 0:
        raise AudioDecodeError(path, f"bad stream parameters (channels={channels}, rate={rate})")
    if frames == 0 or not payload:
        raise AudioDecodeError(path, "no audio frames")
    if len(payload) != frames * channels * width:
        raise AudioDecodeError(path, "truncated frame payload")

    pcm = np.frombuffer(payload, dtype="<i2").astype(np.float64)
    if channels > 1:
        pcm = pcm.reshape(-1, channels).mean(axis=1)
    return pcm / 32768.0, rate
