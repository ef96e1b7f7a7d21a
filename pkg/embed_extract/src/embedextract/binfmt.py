"""Writer for the portable embedding container.

Layout (all integers little-endian):

    magic "HCEB" | u32 version=1 | u32 dim | u64 record_count
    per record: u16 utterance-id byte length, UTF-8 bytes,
                u16 speaker-id byte length, UTF-8 bytes,
                dim float32 values

This module is intentionally self-contained so the adapter stays
decoupled from any particular consumer; the format is shared purely at
the byte level.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Iterable

import numpy as np

MAGIC = b"HCEB"
VERSION = 1


def write_embeddings_binary(
    path: Path, records: Iterable[tuple[str, str, np.ndarray]], dim: int
) -> int:
    """Write (utterance_id, speaker_id, vector) records; returns the count.

    `dim` is explicit so an empty extraction still writes a well-formed
    header. Every vector must be exactly `dim` float32 values.
    """
    entries = list(records)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IIQ", VERSION, dim, len(entries)))
        for utterance_id, speaker_id, vector in entries:
            data = np.ascontiguousarray(vector, dtype="<f4")
            if data.shape != (dim,):
                raise ValueError(
                    f"vector for {utterance_id!r} has shape {data.shape}, expected ({dim},)"
                )
            for text in (utterance_id, speaker_id):
                raw = text.encode("utf-8")
                if len(raw) > 0xFFFF:
                    raise ValueError(f"identifier too long ({len(raw)} bytes)")
                fh.write(struct.pack("<H", len(raw)))
                fh.write(raw)
            fh.write(data.tobytes())
    return len(entries)
