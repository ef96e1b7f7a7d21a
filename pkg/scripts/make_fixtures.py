#!/usr/bin/env python3
"""Generate the committed miniature corpus under tests/fixtures/.

Small enough to read by eye, rich enough to exercise every pipeline
path: height is linearly decodable from the embeddings (dimension 0
carries it, dimension 2 redundantly), gender is perfectly separable
(dimension 1), and the remaining dimensions are noise. The main corpus
is written in the binary embedding format, the validation corpus in the
TSV format, so both readers get coverage. Deterministic for the fixed
seed; rerun after any format change.

Usage: make_fixtures.py [OUT_DIR]   (default: tests/fixtures)
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from voiceprofile.datasets import EmbeddingRecord, write_embeddings, write_embeddings_tsv

SEED = 7
DIM = 8

# speaker_id -> (gender tag, height cm, utterance count)
MAIN_SPEAKERS = {
    "fx_m01": ("m", 184, 4),
    "fx_m02": ("m", 176, 3),
    "fx_m03": ("m", 181, 5),
    "fx_m04": ("m", 172, 3),
    "fx_m05": ("m", 190, 4),
    "fx_m06": ("m", 178, 4),
    "fx_m07": ("m", 186, 3),
    "fx_f01": ("f", 163, 4),
    "fx_f02": ("f", 170, 3),
    "fx_f03": ("f", 158, 5),
    "fx_f04": ("f", 166, 4),
    "fx_f05": ("f", 172, 3),
}
TEST_SPEAKERS = {"fx_m06", "fx_m07", "fx_f04", "fx_f05"}

VAL_SPEAKERS = {
    "fxv_m01": ("m", 179, 3),
    "fxv_m02": ("m", 188, 2),
    "fxv_f01": ("f", 161, 3),
    "fxv_f02": ("f", 169, 2),
}

CONFIG_RUN = """\
# full experiment over the miniature corpus
train.annotations=annotations.tsv
train.embeddings=embeddings.bin
train.splits=splits.tsv
train.split=train
test.annotations=annotations.tsv
test.embeddings=embeddings.bin
test.splits=splits.tsv
test.split=test
validation.annotations=val_annotations.tsv
validation.embeddings=val_embeddings.tsv
method=plsr
k_range=1-8
gender_mode=classifier
aggregation=mean-prediction
compare_baseline=true
"""

CONFIG_BASELINE = """\
train.annotations=annotations.tsv
train.embeddings=embeddings.bin
train.splits=splits.tsv
train.split=train
test.annotations=annotations.tsv
test.embeddings=embeddings.bin
test.splits=splits.tsv
test.split=test
method=baseline
gender_mode=oracle
"""


def make_records(rng, speakers):
    records = []
    for speaker_id, (tag, height, n_utts) in speakers.items():
        signal = (height - 170.0) / 10.0
        gender_signal = 1.0 if tag == "m" else -1.0
        for utt in range(1, n_utts + 1):
            vector = rng.normal(0.0, 0.3, DIM)
            vector[0] = signal + rng.normal(0.0, 0.02)
            vector[1] = gender_signal + rng.normal(0.0, 0.05)
            vector[2] = 0.5 * signal + rng.normal(0.0, 0.1)
            records.append(
                EmbeddingRecord(
                    utterance_id=f"{speaker_id}_u{utt:02d}",
                    speaker_id=speaker_id,
                    vector=vector.astype(np.float32),
                )
            )
    return records


def write_annotations(path, speakers):
    with open(path, "w", encoding="utf-8") as fh:
        for speaker_id, (tag, height, _) in speakers.items():
            fh.write(f"{speaker_id}\t{tag}\t{height}\n")


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("tests/fixtures")
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)

    write_annotations(out_dir / "annotations.tsv", MAIN_SPEAKERS)
    with open(out_dir / "splits.tsv", "w", encoding="utf-8") as fh:
        for speaker_id in MAIN_SPEAKERS:
            fh.write(f"{speaker_id}\t{'test' if speaker_id in TEST_SPEAKERS else 'train'}\n")
    write_embeddings(out_dir / "embeddings.bin", make_records(rng, MAIN_SPEAKERS))

    write_annotations(out_dir / "val_annotations.tsv", VAL_SPEAKERS)
    write_embeddings_tsv(out_dir / "val_embeddings.tsv", make_records(rng, VAL_SPEAKERS))

    (out_dir / "config_run.txt").write_text(CONFIG_RUN, encoding="utf-8")
    (out_dir / "config_baseline.txt").write_text(CONFIG_BASELINE, encoding="utf-8")
    print(f"wrote fixture corpus to {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
