#!/usr/bin/env python3
"""Generate a synthetic annotations file with pinned per-gender statistics.

Builds an integer-height speaker roster whose per-gender count, mean,
median, population std, min, and max print exactly as the reference
statistics (mean/std to 2 decimals, median to 1). Useful as a stand-in
corpus when the original annotation release is not on disk: any
statistics-level check against the reference values behaves identically.

The construction pins min, max, and the median order statistics, then
repairs the sum with single unit moves and the sum of squares with
sum-preserving pair moves. Deterministic for a fixed seed; the script
asserts every target before writing.

Usage: make_reference_annotations.py [OUT_DIR]   (default: data/reference_synth)
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

# gender tag -> (count, mean, median, population std, min, max), heights in cm
TARGETS = {
    "m": (690, 180.32, 180.0, 7.04, 157, 208),
    "f": (561, 166.49, 166.0, 6.99, 145, 192),
}
TEST_SPEAKERS = {"m": 25, "f": 15}
SEED = 20240917


def build_heights(rng, n, mean, median, std, lo, hi):
    """Integer heights hitting all six statistics at printed precision."""
    med = int(round(median))
    assert abs(median - med) < 1e-9, "median must be integral for the pinning scheme"

    values = np.sort(np.clip(np.rint(rng.normal(mean, std, n)).astype(int), lo, hi))
    n_pins = 2 if n % 2 == 0 else 1
    left_size = (n - 2 - n_pins) // 2
    right_size = n - 2 - n_pins - left_size

    # index 0 pinned to lo, then the left zone, the median pins, the
    # right zone, and index -1 pinned to hi; zone bounds keep the sorted
    # order statistics (min, max, median) fixed under later repairs
    values[0] = lo
    values[-1] = hi
    lo_bound = np.empty(n, dtype=int)
    hi_bound = np.empty(n, dtype=int)
    lo_bound[0] = hi_bound[0] = lo
    lo_bound[-1] = hi_bound[-1] = hi
    left = slice(1, 1 + left_size)
    pins = slice(1 + left_size, 1 + left_size + n_pins)
    right = slice(1 + left_size + n_pins, n - 1)
    values[left] = np.clip(values[left], lo, med)
    values[pins] = med
    values[right] = np.clip(values[right], med, hi)
    lo_bound[left], hi_bound[left] = lo, med
    lo_bound[pins] = hi_bound[pins] = med
    lo_bound[right], hi_bound[right] = med, hi
    assert right.stop - right.start == right_size

    # repair the sum: unit moves toward the integer sum whose mean is
    # closest to the target and still prints correctly
    s_lo = int(np.ceil(n * (mean - 0.0049)))
    s_hi = int(np.floor(n * (mean + 0.0049)))
    s_target = min(max(int(round(n * mean)), s_lo), s_hi)
    guard = 0
    while values.sum() != s_target:
        step = 1 if values.sum() < s_target else -1
        movable = np.nonzero(values + step <= hi_bound)[0] if step > 0 else np.nonzero(
            values + step >= lo_bound
        )[0]
        # move the element that keeps the shape most normal: the one
        # farthest from its zone edge in the move direction
        idx = movable[np.argmax(step * (hi_bound[movable] - values[movable]))] if step > 0 else (
            movable[np.argmax(values[movable] - lo_bound[movable])]
        )
        values[idx] += step
        guard += 1
        assert guard < 10_000, "sum repair did not converge"

    # repair the sum of squares with sum-preserving pair moves
    # (increment i, decrement j): delta = 2 * (v_i - v_j + 1)
    j_lo = n * (std - 0.0049) ** 2
    j_hi = n * (std + 0.0049) ** 2

    def centered_ss():
        return float(np.sum(values.astype(float) ** 2)) - values.sum() ** 2 / n

    guard = 0
    while not (j_lo <= centered_ss() < j_hi):
        j_need = (j_lo + j_hi) / 2 - centered_ss()
        inc_ok = np.nonzero(values < hi_bound)[0]
        dec_ok = np.nonzero(values > lo_bound)[0]
        assert inc_ok.size and dec_ok.size, "no movable elements left"
        best = None
        if j_need > 0:
            j_anchor = dec_ok[np.argmin(values[dec_ok])]
        else:
            j_anchor = dec_ok[np.argmax(values[dec_ok])]
        for i in inc_ok:
            if i == j_anchor:
                continue
            delta = 2.0 * (values[i] - values[j_anchor] + 1)
            if j_need > 0 and delta <= 0:
                continue
            if j_need < 0 and delta >= 0:
                continue
            if best is None or abs(delta - j_need) < best[0]:
                best = (abs(delta - j_need), i, j_anchor)
        assert best is not None, "spread repair stuck"
        _, i, j = best
        values[i] += 1
        values[j] -= 1
        guard += 1
        assert guard < 100_000, "spread repair did not converge"

    check = np.sort(values).astype(float)
    assert check[0] == lo and check[-1] == hi
    assert f"{np.median(check):.1f}" == f"{median:.1f}"
    assert f"{check.mean():.2f}" == f"{mean:.2f}"
    assert f"{check.std(ddof=0):.2f}" == f"{std:.2f}"
    return values


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data/reference_synth")
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)

    rows = []
    for tag, (n, mean, median, std, lo, hi) in TARGETS.items():
        for h in build_heights(rng, n, mean, median, std, lo, hi):
            rows.append((tag, int(h)))
    order = rng.permutation(len(rows))

    annotations_path = out_dir / "annotations.tsv"
    speaker_ids = {"m": [], "f": []}
    with open(annotations_path, "w", encoding="utf-8") as fh:
        for row_idx, shuffled in enumerate(order):
            tag, height = rows[shuffled]
            speaker_id = f"id1{row_idx + 1:04d}"
            speaker_ids[tag].append(speaker_id)
            fh.write(f"{speaker_id}\t{tag}\t{height}\n")

    splits_path = out_dir / "splits.tsv"
    test_ids = set()
    for tag, count in TEST_SPEAKERS.items():
        test_ids.update(rng.choice(speaker_ids[tag], size=count, replace=False))
    with open(splits_path, "w", encoding="utf-8") as fh:
        for row_idx in range(len(rows)):
            speaker_id = f"id1{row_idx + 1:04d}"
            fh.write(f"{speaker_id}\t{'test' if speaker_id in test_ids else 'train'}\n")

    print(f"wrote {annotations_path} ({len(rows)} speakers) and {splits_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
