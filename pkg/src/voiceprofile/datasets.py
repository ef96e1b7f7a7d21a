"""Annotation, split, and embedding data: file formats and dataset statistics.

File formats
------------
annotations.tsv   one speaker per row: ``speaker_id<TAB>gender<TAB>height_cm``,
                  gender in {m, f}, height in cm with '.' decimal separator,
                  no header.
splits.tsv        ``speaker_id<TAB>split`` with split in {train, test}.
embeddings        binary: magic ``HCEB``, little-endian u32 version (=1),
                  u32 dim, u64 record count, then per record a u16-length-
                  prefixed UTF-8 utterance id, a u16-length-prefixed UTF-8
                  speaker id, and ``dim`` float32 values.
embeddings.tsv    interoperable text alternative:
                  ``utterance_id<TAB>speaker_id<TAB>v1<TAB>...<TAB>vd``.

``read_embeddings`` sniffs the magic bytes and accepts either form.

All loaded objects are immutable after construction and safe to share
across threads; loading itself is single-threaded.
"""

from __future__ import annotations

import enum
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    BadMagicError,
    DimMismatchError,
    DuplicateSpeakerError,
    EmbeddingFormatError,
    EmptyGroupError,
    HeightOutOfRangeError,
    MalformedRowError,
    NonPositiveError,
    TruncatedFileError,
    UnknownSpeakerError,
)

HEIGHT_MIN_CM = 100.0
HEIGHT_MAX_CM = 250.0

EMBEDDING_MAGIC = b"HCEB"
EMBEDDING_VERSION = 1

_HEADER = struct.Struct("<4sIIQ")
_U16 = struct.Struct("<H")


class Gender(enum.Enum):
    MALE = "m"
    FEMALE = "f"

    @classmethod
    def parse(cls, tag: str) -> "Gender":
        try:
            return cls(tag)
        except ValueError:
            raise ValueError(f"unknown gender tag {tag!r}, expected 'm' or 'f'") from None

    @property
    def label(self) -> str:
        return "male" if self is Gender.MALE else "female"


class Split(enum.Enum):
    TRAIN = "train"
    TEST = "test"


@dataclass(frozen=True)
class SpeakerAnnotation:
    speaker_id: str
    gender: Gender
    height_cm: float


@dataclass(frozen=True, eq=False)
class EmbeddingRecord:
    utterance_id: str
    speaker_id: str
    vector: np.ndarray  # float32, shape (d,)


@dataclass(frozen=True)
class GenderStats:
    count: int
    mean: float
    median: float
    std: float
    min: float
    max: float


@dataclass(frozen=True, eq=False)
class Dataset:
    """Joined view of one corpus: annotations, embeddings, optional splits."""

    annotations: dict[str, SpeakerAnnotation]
    embeddings: list[EmbeddingRecord]
    splits: dict[str, Split] = field(default_factory=dict)

    def __post_init__(self):
        for rec in self.embeddings:
            if rec.speaker_id not in self.annotations:
                raise UnknownSpeakerError(rec.speaker_id)

    @property
    def dim(self) -> int:
        if not self.embeddings:
            return 0
        return int(self.embeddings[0].vector.shape[0])

    def subset(self, split: Split) -> "Dataset":
        """Records of speakers assigned to `split`; unlisted speakers drop out."""
        keep = {sid for sid, s in self.splits.items() if s is split}
        return Dataset(
            annotations={sid: a for sid, a in self.annotations.items() if sid in keep},
            embeddings=[r for r in self.embeddings if r.speaker_id in keep],
            splits={sid: s for sid, s in self.splits.items() if sid in keep},
        )

    def height_of(self, speaker_id: str) -> float:
        try:
            return self.annotations[speaker_id].height_cm
        except KeyError:
            raise UnknownSpeakerError(speaker_id) from None

    def gender_of(self, speaker_id: str) -> Gender:
        try:
            return self.annotations[speaker_id].gender
        except KeyError:
            raise UnknownSpeakerError(speaker_id) from None


def load_annotations(path: str | Path) -> list[SpeakerAnnotation]:
    """Read an annotations.tsv file, validating every row.

    Rejects duplicate speaker ids and heights outside [100, 250] cm. The
    range comfortably contains every plausible adult height and catches
    rows corrupted by unit mix-ups (meters, inches).
    """
    path = Path(path)
    out: list[SpeakerAnnotation] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise MalformedRowError(path, line_no, f"expected 3 tab-separated fields, got {len(parts)}")
            speaker_id, gender_tag, height_text = parts
            if not speaker_id:
                raise MalformedRowError(path, line_no, "empty speaker id")
            try:
                gender = Gender.parse(gender_tag)
            except ValueError as exc:
                raise MalformedRowError(path, line_no, str(exc)) from None
            try:
                height = float(height_text)
            except ValueError:
                raise MalformedRowError(path, line_no, f"bad height {height_text!r}") from None
            if not math.isfinite(height):
                raise MalformedRowError(path, line_no, f"non-finite height {height_text!r}")
            if speaker_id in seen:
                raise DuplicateSpeakerError(speaker_id, path)
            if not (HEIGHT_MIN_CM <= height <= HEIGHT_MAX_CM):
                raise HeightOutOfRangeError(speaker_id, height)
            seen.add(speaker_id)
            out.append(SpeakerAnnotation(speaker_id, gender, height))
    return out


def load_splits(path: str | Path) -> dict[str, Split]:
    """Read a splits.tsv file; each speaker may appear exactly once."""
    path = Path(path)
    out: dict[str, Split] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise MalformedRowError(path, line_no, f"expected 2 tab-separated fields, got {len(parts)}")
            speaker_id, tag = parts
            if not speaker_id:
                raise MalformedRowError(path, line_no, "empty speaker id")
            try:
                split = Split(tag)
            except ValueError:
                raise MalformedRowError(path, line_no, f"unknown split {tag!r}") from None
            if speaker_id in out:
                raise DuplicateSpeakerError(speaker_id, path)
            out[speaker_id] = split
    return out


def compute_gender_stats(annotations: list[SpeakerAnnotation], gender: Gender) -> GenderStats:
    """Count / mean / median / population std / min / max of one gender group.

    Median for even counts is the mean of the two middle values; std uses
    divisor N (population convention), the usual choice when summarizing a
    complete dataset rather than estimating from a sample.
    """
    heights = np.array([a.height_cm for a in annotations if a.gender is gender], dtype=float)
    if heights.size == 0:
        raise EmptyGroupError(f"{gender.label} group")
    return GenderStats(
        count=int(heights.size),
        mean=float(heights.mean()),
        median=float(np.median(heights)),
        std=float(heights.std(ddof=0)),
        min=float(heights.min()),
        max=float(heights.max()),
    )


def histogram(
    annotations: list[SpeakerAnnotation], gender: Gender, bin_width_cm: float
) -> list[tuple[float, int]]:
    """Left-closed right-open height bins for one gender, nonempty bins only.

    Bins are anchored at floor(min / width) * width, so every edge is a
    multiple of the width. Counts over the returned bins sum to the group
    size.
    """
    if bin_width_cm <= 0:
        raise NonPositiveError(bin_width_cm)
    heights = [a.height_cm for a in annotations if a.gender is gender]
    if not heights:
        raise EmptyGroupError(f"{gender.label} group")
    counts: dict[float, int] = {}
    for h in heights:
        left = math.floor(h / bin_width_cm) * bin_width_cm
        counts[left] = counts.get(left, 0) + 1
    return sorted(counts.items())


def inches_to_cm(inches: float) -> float:
    """Exact inch-to-centimeter conversion (factor 2.54, no rounding)."""
    if inches <= 0:
        raise NonPositiveError(inches)
    return inches * 2.54


def _validate_records(records: list[EmbeddingRecord]) -> int:
    """Common dimension across records (0 if empty); rejects non-finite vectors."""
    dim = 0
    for rec in records:
        d = int(rec.vector.shape[0])
        if dim == 0:
            if d <= 0:
                raise DimMismatchError(">=1", d, rec.utterance_id)
            dim = d
        elif d != dim:
            raise DimMismatchError(dim, d, rec.utterance_id)
        if not np.all(np.isfinite(rec.vector)):
            raise EmbeddingFormatError(f"non-finite vector component in {rec.utterance_id!r}")
    return dim


def write_embeddings(path: str | Path, records: list[EmbeddingRecord]) -> None:
    """Write records in the binary format; read_embeddings inverts bit-exactly."""
    dim = _validate_records(records)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(EMBEDDING_MAGIC, EMBEDDING_VERSION, dim, len(records)))
        for rec in records:
            for text in (rec.utterance_id, rec.speaker_id):
                raw = text.encode("utf-8")
                if len(raw) > 0xFFFF:
                    raise EmbeddingFormatError(f"id too long ({len(raw)} bytes): {text[:40]!r}...")
                fh.write(_U16.pack(len(raw)))
                fh.write(raw)
            fh.write(np.ascontiguousarray(rec.vector, dtype="<f4").tobytes())


def read_embeddings(path: str | Path) -> list[EmbeddingRecord]:
    """Read an embedding file, binary or TSV (sniffed on the magic bytes)."""
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == EMBEDDING_MAGIC:
        return _read_embeddings_binary(path)
    return _read_embeddings_tsv(path)


def _read_embeddings_binary(path: Path) -> list[EmbeddingRecord]:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise TruncatedFileError(path, f"only {len(data)} header bytes")
    magic, version, dim, count = _HEADER.unpack_from(data, 0)
    if magic != EMBEDDING_MAGIC:
        raise BadMagicError(path, magic)
    if version != EMBEDDING_VERSION:
        raise EmbeddingFormatError(f"{path}: unsupported version {version}")
    if count > 0 and dim <= 0:
        raise EmbeddingFormatError(f"{path}: non-positive dim {dim}")
    offset = _HEADER.size
    vec_bytes = 4 * dim
    records: list[EmbeddingRecord] = []

    def take(n: int, what: str) -> bytes:
        nonlocal offset
        if offset + n > len(data):
            raise TruncatedFileError(path, f"EOF reading {what} of record {len(records)}")
        chunk = data[offset : offset + n]
        offset += n
        return chunk

    for _ in range(count):
        ids = []
        for what in ("utterance id", "speaker id"):
            (n,) = _U16.unpack(take(2, f"{what} length"))
            ids.append(take(n, what).decode("utf-8"))
        vec = np.frombuffer(take(vec_bytes, "vector"), dtype="<f4")
        if not np.all(np.isfinite(vec)):
            raise EmbeddingFormatError(f"{path}: non-finite vector in {ids[0]!r}")
        records.append(EmbeddingRecord(ids[0], ids[1], vec))
    if offset != len(data):
        raise EmbeddingFormatError(f"{path}: {len(data) - offset} trailing bytes after last record")
    return records


def _read_embeddings_tsv(path: Path) -> list[EmbeddingRecord]:
    records: list[EmbeddingRecord] = []
    dim = 0
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) < 3:
                raise MalformedRowError(path, line_no, "expected utterance, speaker, and vector fields")
            try:
                vec = np.array([float(v) for v in parts[2:]], dtype=np.float32)
            except ValueError:
                raise MalformedRowError(path, line_no, "bad vector component") from None
            if dim == 0:
                dim = vec.shape[0]
            elif vec.shape[0] != dim:
                raise DimMismatchError(dim, vec.shape[0], f"{path}:{line_no}")
            if not np.all(np.isfinite(vec)):
                raise MalformedRowError(path, line_no, "non-finite vector component")
            records.append(EmbeddingRecord(parts[0], parts[1], vec))
    return records


def write_embeddings_tsv(path: str | Path, records: list[EmbeddingRecord]) -> None:
    """Write the interoperable TSV form (full float32 round-trip precision)."""
    _validate_records(records)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            values = "\t".join(repr(float(v)) for v in rec.vector)
            fh.write(f"{rec.utterance_id}\t{rec.speaker_id}\t{values}\n")


def load_dataset(
    annotations_path: str | Path,
    embeddings_path: str | Path,
    splits_path: str | Path | None = None,
    split: Split | None = None,
) -> Dataset:
    """Load and join one corpus; optionally restrict to one split label."""
    annotations = {a.speaker_id: a for a in load_annotations(annotations_path)}
    embeddings = read_embeddings(embeddings_path)
    splits = load_splits(splits_path) if splits_path is not None else {}
    ds = Dataset(annotations=annotations, embeddings=embeddings, splits=splits)
    if split is not None:
        if splits_path is None:
            raise ValueError("split selection requires a splits file")
        ds = ds.subset(split)
    return ds
