"""Generate the committed audio fixtures: 3 short WAV files, 2 speakers.

Deterministic content (seeded tone mixtures plus noise) so the fixtures
can be regenerated byte-identically. Run from the embed_extract
directory:

    python3 scripts/make_audio_fixtures.py
"""

import wave
from pathlib import Path

import numpy as np

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
RATE = 8000
SEED = 413

# utterance relative path -> (fundamental Hz, harmonic mix)
UTTERANCES = {
    "spk_a/sess1/utt01.wav": (110.0, (1.0, 0.5, 0.25)),
    "spk_a/sess1/utt02.wav": (124.0, (1.0, 0.3, 0.4)),
    "spk_b/utt03.wav": (205.0, (1.0, 0.6, 0.1)),
}

ANNOTATIONS = [
    ("spk_a", "m", 178),
    ("spk_b", "f", 164),
]


def synth(fundamental: float, mix: tuple[float, ...], rng: np.random.Generator) -> np.ndarray:
    t = np.arange(int(0.25 * RATE)) / RATE
    signal = sum(
        gain * np.sin(2.0 * np.pi * fundamental * (k + 1) * t)
        for k, gain in enumerate(mix)
    )
    signal += 0.02 * rng.standard_normal(t.size)
    signal *= 0.5 / np.max(np.abs(signal))
    return np.round(signal * 32767.0).astype("<i2")


def main() -> None:
    rng = np.random.default_rng(SEED)
    audio_root = FIXTURES / "audio"
    for relative, (fundamental, mix) in UTTERANCES.items():
        path = audio_root / relative
        path.parent.mkdir(parents=True, exist_ok=True)
        pcm = synth(fundamental, mix, rng)
        with wave.open(str(path), "wb") as writer:
            writer.setnchannels(1)
            writer.setsampwidth(2)
            writer.setframerate(RATE)
            writer.writeframes(pcm.tobytes())
        print(f"wrote {path} ({path.stat().st_size} bytes)")

    annotations = FIXTURES / "annotations.tsv"
    with open(annotations, "w", encoding="utf-8") as fh:
        fh.writelines(f"{s}\t{g}\t{h}\n" for s, g, h in ANNOTATIONS)
    print(f"wrote {annotations}")

    splits = FIXTURES / "splits.tsv"
    with open(splits, "w", encoding="utf-8") as fh:
        fh.writelines(f"{s}\t{'train' if s == 'spk_a' else 'test'}\n" for s, _, _ in ANNOTATIONS)
    print(f"wrote {splits}")


if __name__ == "__main__":
    main()
