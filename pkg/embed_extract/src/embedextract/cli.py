"""Command-line entry point.

One job per invocation: walk an audio tree, embed every utterance, and
write the embedding container plus its manifest (and optionally a
validated copy of a split file). Diagnostics go to stderr; the
EMBEDEXTRACT_LOG environment variable (error | warn | info | debug)
controls verbosity. Exit codes: 0 success, 1 operational failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .backends import KNOWN_MODELS
from .errors import ExtractError
from .extract import run_extraction

log = logging.getLogger("embedextract")

_LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


def _configure_logging() -> None:
    raw = os.environ.get("EMBEDEXTRACT_LOG", "warn").lower()
    level = _LOG_LEVELS.get(raw)
    logging.basicConfig(
        stream=sys.stderr, level=level or logging.WARNING, format="%(levelname)s: %(message)s"
    )
    if level is None:
        log.warning("unknown EMBEDEXTRACT_LOG=%r, using warn", raw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embedextract",
        description=(
            "Extract speaker embeddings from speaker_id/... audio directories "
            "into a portable binary container with a per-utterance manifest."
        ),
        allow_abbrev=False,
    )
    parser.add_argument("--audio-root", dest="audio_root", required=True,
                        help="directory containing one subdirectory per speaker")
    parser.add_argument("--annotations", required=True,
                        help="speaker TSV (speaker_id, gender, height_cm); must cover every speaker")
    parser.add_argument("--out", required=True,
                        help="embedding container to write; manifest and info files land next to it")
    parser.add_argument("--model", default="speechbrain-ecapa", choices=KNOWN_MODELS,
                        help="embedding backend (default: %(default)s)")
    parser.add_argument("--workers", type=int, default=1,
                        help="parallel decode/embed workers (output order is always sorted)")
    parser.add_argument("--splits",
                        help="optional speaker split TSV to validate and re-emit next to the output")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging()
    if args.workers < 1:
        log.error("--workers must be at least 1")
        return 1
    try:
        manifest = run_extraction(
            audio_root=Path(args.audio_root),
            annotations_path=Path(args.annotations),
            out_path=Path(args.out),
            model_id=args.model,
            workers=args.workers,
            splits_path=Path(args.splits) if args.splits else None,
        )
    except (ExtractError, OSError) as exc:
        log.error("%s", exc)
        return 1
    print(
        f"ok={manifest.n_ok} failed={manifest.n_failed} "
        f"speakers={len(manifest.ok_counts)} dim={manifest.dim} model={manifest.model_id}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
