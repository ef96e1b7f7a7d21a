"""Batch extraction: audio tree in, embedding container + manifest out.

Audio is expected as `audio_root/speaker_id/.../utterance.wav`; the
utterance id is the file's path relative to the root, slash-separated,
without the extension, so ids stay unique and stable across platforms.

Every discovered utterance lands in the manifest with status `ok` or
`failed` (undecodable audio is never fatal). Output records are sorted
by (speaker_id, utterance_id) no matter how workers finish, so repeated
runs over the same inputs produce byte-identical files.
"""

from __future__ import annotations

import concurrent.futures
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .backends import EMBEDDING_DIM, load_backend
from .binfmt import write_embeddings_binary
from .errors import AnnotationError, AudioDecodeError, LayoutError
from .audio import read_wav_mono

log = logging.getLogger("embedextract")

_AUDIO_SUFFIX = ".wav"
_SPLIT_LABELS = ("train", "test")

# Full-corpus runs of the intended source data land between these
# per-speaker utterance counts; falling outside is worth a warning but
# never an error (small fixtures and partial corpora are legitimate).
EXPECTED_MIN_UTTERANCES = 45
EXPECTED_MAX_UTTERANCES = 250


@dataclass(frozen=True)
class UtteranceStatus:
    utterance_id: str
    speaker_id: str
    ok: bool


@dataclass(frozen=True)
class ExtractionManifest:
    model_id: str
    revision: str
    audio_root: str
    dim: int
    statuses: list[UtteranceStatus]
    ok_counts: dict[str, int] = field(default_factory=dict)

    @property
    def n_ok(self) -> int:
        return sum(1 for s in self.statuses if s.ok)

    @property
    def n_failed(self) -> int:
        return sum(1 for s in self.statuses if not s.ok)


def parse_annotations(path: Path) -> dict[str, tuple[str, float]]:
    """speaker_id -> (gender, height_cm) from a 3-column TSV without header."""
    speakers: dict[str, tuple[str, float]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise AnnotationError(f"{path}:{line_no}: expected 3 tab-separated fields")
            speaker_id, gender, height_text = parts
            if not speaker_id or gender not in ("m", "f"):
                raise AnnotationError(f"{path}:{line_no}: bad speaker id or gender {gender!r}")
            try:
                height = float(height_text)
            except ValueError:
                raise AnnotationError(f"{path}:{line_no}: bad height {height_text!r}") from None
            if speaker_id in speakers:
                raise AnnotationError(f"{path}:{line_no}: duplicate speaker {speaker_id!r}")
            speakers[speaker_id] = (gender, height)
    if not speakers:
        raise AnnotationError(f"{path}: no annotation rows")
    return speakers


def discover_utterances(audio_root: Path) -> list[tuple[str, str, Path]]:
    """Sorted (utterance_id, speaker_id, file path) triples under the root."""
    if not audio_root.is_dir():
        raise LayoutError(f"audio root {audio_root} is not a directory")
    found: list[tuple[str, str, Path]] = []
    for speaker_dir in sorted(p for p in audio_root.iterdir() if p.is_dir()):
        speaker_id = speaker_dir.name
        for wav in sorted(speaker_dir.rglob(f"*{_AUDIO_SUFFIX}")):
            relative = wav.relative_to(audio_root)
            utterance_id = "/".join(relative.parts)[: -len(_AUDIO_SUFFIX)]
            found.append((utterance_id, speaker_id, wav))
    found.sort(key=lambda item: (item[1], item[0]))
    return found


def _embed_one(backend, utterance_id: str, speaker_id: str, path: Path):
    try:
        samples, rate = read_wav_mono(path)
        vector = backend(samples, rate)
    except AudioDecodeError as exc:
        log.warning("skipping %s: %s", utterance_id, exc.reason)
        return utterance_id, speaker_id, None
    return utterance_id, speaker_id, np.asarray(vector, dtype=np.float32)


def manifest_csv_lines(manifest: ExtractionManifest):
    yield "utterance_id,speaker_id,status\n"
    for status in manifest.statuses:
        yield f"{status.utterance_id},{status.speaker_id},{'ok' if status.ok else 'failed'}\n"


def manifest_info_lines(manifest: ExtractionManifest):
    pairs = {
        "model": manifest.model_id,
        "revision": manifest.revision,
        "audio_root": manifest.audio_root,
        "dim": str(manifest.dim),
        "utterances_ok": str(manifest.n_ok),
        "utterances_failed": str(manifest.n_failed),
        "speakers": str(len(manifest.ok_counts)),
    }
    for speaker_id, count in manifest.ok_counts.items():
        pairs[f"utterances.{speaker_id}"] = str(count)
    for key in sorted(pairs):
        yield f"{key}={pairs[key]}\n"


def _sibling(out_path: Path, extra_suffix: str) -> Path:
    return out_path.with_name(out_path.stem + extra_suffix)


def manifest_path_for(out_path: Path) -> Path:
    return _sibling(out_path, ".manifest.csv")


def info_path_for(out_path: Path) -> Path:
    return _sibling(out_path, ".info.txt")


def splits_path_for(out_path: Path) -> Path:
    return _sibling(out_path, ".splits.tsv")


def copy_splits(splits_in: Path, out_path: Path, annotated: set[str]) -> Path:
    """Validate and re-emit a speaker split file next to the embeddings.

    Rows are normalized to sorted order; every speaker must be annotated
    and carry a train/test label.
    """
    assignments: dict[str, str] = {}
    with open(splits_in, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2 or parts[1] not in _SPLIT_LABELS:
                raise AnnotationError(f"{splits_in}:{line_no}: expected `speaker<TAB>train|test`")
            if parts[0] not in annotated:
                raise AnnotationError(
                    f"{splits_in}:{line_no}: speaker {parts[0]!r} is not annotated"
                )
            assignments[parts[0]] = parts[1]
    target = splits_path_for(out_path)
    with open(target, "w", encoding="utf-8") as fh:
        fh.writelines(f"{speaker}\t{split}\n" for speaker, split in sorted(assignments.items()))
    return target


def run_extraction(
    audio_root: Path,
    annotations_path: Path,
    out_path: Path,
    model_id: str = "speechbrain-ecapa",
    workers: int = 1,
    splits_path: Path | None = None,
) -> ExtractionManifest:
    """Extract every discoverable utterance and write all output files.

    Returns the manifest that was also written next to `out_path`.
    """
    annotated = parse_annotations(annotations_path)
    tasks = discover_utterances(audio_root)

    unknown = sorted({speaker for _, speaker, _ in tasks if speaker not in annotated})
    if unknown:
        raise AnnotationError(
            f"{len(unknown)} speaker(s) under {audio_root} missing from "
            f"{annotations_path}: {', '.join(unknown[:5])}"
            + ("..." if len(unknown) > 5 else "")
        )

    backend, revision = load_backend(model_id)

    if workers > 1 and tasks:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(
                pool.map(lambda t: _embed_one(backend, *t), tasks)
            )
    else:
        outcomes = [_embed_one(backend, *task) for task in tasks]

    outcomes.sort(key=lambda item: (item[1], item[0]))
    records = [(u, s, vec) for u, s, vec in outcomes if vec is not None]
    statuses = [UtteranceStatus(u, s, vec is not None) for u, s, vec in outcomes]

    ok_counts: dict[str, int] = {}
    for utterance_id, speaker_id, _ in records:
        ok_counts[speaker_id] = ok_counts.get(speaker_id, 0) + 1
    ok_counts = dict(sorted(ok_counts.items()))

    outliers = [
        s for s, n in ok_counts.items()
        if not EXPECTED_MIN_UTTERANCES <= n <= EXPECTED_MAX_UTTERANCES
    ]
    if outliers:
        log.warning(
            "%d of %d speakers have utterance counts outside the expected "
            "%d-%d range of a full corpus",
            len(outliers), len(ok_counts), EXPECTED_MIN_UTTERANCES, EXPECTED_MAX_UTTERANCES,
        )

    manifest = ExtractionManifest(
        model_id=model_id,
        revision=revision,
        audio_root=str(audio_root),
        dim=EMBEDDING_DIM,
        statuses=statuses,
        ok_counts=ok_counts,
    )

    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_embeddings_binary(out_path, records, EMBEDDING_DIM)
    with open(manifest_path_for(out_path), "w", encoding="utf-8") as fh:
        fh.writelines(manifest_csv_lines(manifest))
    with open(info_path_for(out_path), "w", encoding="utf-8") as fh:
        fh.writelines(manifest_info_lines(manifest))
    if splits_path is not None:
        copy_splits(splits_path, out_path, set(annotated))

    log.info(
        "extracted %d/%d utterances from %d speakers to %s",
        manifest.n_ok, len(statuses), len(ok_counts), out_path,
    )
    return manifest
