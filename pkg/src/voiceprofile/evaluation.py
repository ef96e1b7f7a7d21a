"""Metric suite over prediction sets: MAE, RMSE, Max Error, R^2.

Metrics are computed separately per gender and at two levels:

* utterance level - one error per recording;
* speaker level   - predictions of a speaker's recordings are fused
  first (mean prediction by default), leaving one error per speaker.
  Applications that pool several recordings before deciding see this
  error, which is why it is usually lower than the utterance-level one.

The alternative speaker aggregation (averaging absolute errors instead
of predictions) is available behind `Aggregation.MEAN_ABS_ERROR`.

Rows always carry the ground-truth gender: evaluation conditions on the
true gender even when a classifier routed the predictions, so the male
and female columns stay comparable across gender modes.

Computation here is single-threaded; any future partitioning across
workers must keep order-independent accumulation with a deterministic
final reduction (results equal to the single-threaded ones within 1e-9
relative).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .datasets import Gender
from .errors import EmptyGroupError, EmptyInputError, LengthMismatchError, MalformedRowError

_TXT_COLUMNS = ("MAE [cm]", "RMSE [cm]", "Max Error [cm]", "R^2", "n")


class Level(enum.Enum):
    UTTERANCE = "utterance"
    SPEAKER = "speaker"


class Aggregation(enum.Enum):
    MEAN_PREDICTION = "mean-prediction"
    MEAN_ABS_ERROR = "mean-abs-error"


@dataclass(frozen=True)
class PredictionRow:
    utterance_id: str
    speaker_id: str
    gender: Gender  # ground truth
    predicted_cm: float
    true_cm: float
    classified_gender: Gender | None = None  # set when a classifier routed the row

    def __post_init__(self):
        if not self.true_cm > 0:
            raise ValueError(f"true height must be positive, got {self.true_cm}")


@dataclass(frozen=True)
class MetricSummary:
    mae_cm: float
    rmse_cm: float
    max_error_cm: float
    r_squared: float
    count: int


@dataclass(frozen=True, eq=False)
class EvaluationReport:
    """One MetricSummary per (gender, level) present in the prediction set."""

    cells: dict[tuple[Gender, Level], MetricSummary]

    def get(self, gender: Gender, level: Level) -> MetricSummary | None:
        return self.cells.get((gender, level))


def _metrics(errors: np.ndarray, truths: np.ndarray) -> MetricSummary:
    abs_errors = np.abs(errors)
    sse = float(errors @ errors)
    centered = truths - truths.mean()
    ss_tot = float(centered @ centered)
    if ss_tot == 0.0:
        r_squared = 1.0 if sse == 0.0 else float("nan")
    else:
        r_squared = 1.0 - sse / ss_tot
    return MetricSummary(
        mae_cm=float(abs_errors.mean()),
        rmse_cm=float(np.sqrt(np.mean(errors * errors))),
        max_error_cm=float(abs_errors.max()),
        r_squared=r_squared,
        count=int(errors.shape[0]),
    )


def utterance_metrics(rows: list[PredictionRow], gender: Gender) -> MetricSummary:
    """Metrics over each utterance's error (predicted - true)."""
    group = [r for r in rows if r.gender is gender]
    if not group:
        raise EmptyGroupError(f"{gender.label} utterances")
    errors = np.array([r.predicted_cm - r.true_cm for r in group])
    truths = np.array([r.true_cm for r in group])
    return _metrics(errors, truths)


def speaker_metrics(
    rows: list[PredictionRow],
    gender: Gender,
    aggregation: Aggregation = Aggregation.MEAN_PREDICTION,
) -> MetricSummary:
    """Metrics over one fused error per speaker.

    MEAN_PREDICTION averages a speaker's predictions and takes one
    signed error against the true height. MEAN_ABS_ERROR averages the
    absolute per-utterance errors instead (a nonnegative per-speaker
    error, so MAE and Max cannot shrink through cancellation).
    """
    group = [r for r in rows if r.gender is gender]
    if not group:
        raise EmptyGroupError(f"{gender.label} speakers")
    by_speaker: dict[str, list[PredictionRow]] = {}
    for row in group:
        by_speaker.setdefault(row.speaker_id, []).append(row)
    errors = []
    truths = []
    for speaker_rows in by_speaker.values():
        true_cm = speaker_rows[0].true_cm
        preds = np.array([r.predicted_cm for r in speaker_rows])
        if aggregation is Aggregation.MEAN_PREDICTION:
            errors.append(float(preds.mean()) - true_cm)
        else:
            errors.append(float(np.abs(preds - true_cm).mean()))
        truths.append(true_cm)
    return _metrics(np.array(errors), np.array(truths))


def accuracy(predicted_labels, true_labels) -> float:
    """Fraction of matching labels."""
    predicted = list(predicted_labels)
    truth = list(true_labels)
    if len(predicted) != len(truth):
        raise LengthMismatchError(len(predicted), len(truth))
    if not predicted:
        raise EmptyInputError("no labels")
    hits = sum(1 for p, t in zip(predicted, truth) if p == t)
    return hits / len(predicted)


def evaluate(
    rows: list[PredictionRow], aggregation: Aggregation = Aggregation.MEAN_PREDICTION
) -> EvaluationReport:
    """Full per-gender, per-level report for the genders present."""
    if not rows:
        raise EmptyInputError("no prediction rows")
    cells: dict[tuple[Gender, Level], MetricSummary] = {}
    for gender in Gender:
        if not any(r.gender is gender for r in rows):
            continue
        cells[(gender, Level.UTTERANCE)] = utterance_metrics(rows, gender)
        cells[(gender, Level.SPEAKER)] = speaker_metrics(rows, gender, aggregation)
    return EvaluationReport(cells)


def utterance_abs_errors(rows: list[PredictionRow], gender: Gender) -> list[tuple[str, float]]:
    """(utterance_id, |error|) pairs for one gender, sorted by utterance id."""
    pairs = [(r.utterance_id, abs(r.predicted_cm - r.true_cm)) for r in rows if r.gender is gender]
    return sorted(pairs)


# --- renderers and file formats ---


def render_report_text(report: EvaluationReport) -> str:
    """Aligned table: one row per level, metric x gender columns."""
    header_top = f"{'':12s}"
    header_sub = f"{'level':<12s}"
    for name in _TXT_COLUMNS:
        header_top += f"{name:<20s}"
        header_sub += f"{'male':<10s}{'female':<10s}"
    lines = [header_top.rstrip(), header_sub.rstrip()]
    for level in Level:
        cells = {g: report.get(g, level) for g in Gender}
        if all(c is None for c in cells.values()):
            continue
        row = f"{level.value:<12s}"
        for attr, fmt in (
            ("mae_cm", "{:.2f}"),
            ("rmse_cm", "{:.2f}"),
            ("max_error_cm", "{:.2f}"),
            ("r_squared", "{:.4f}"),
            ("count", "{:d}"),
        ):
            for gender in Gender:
                cell = cells[gender]
                text = fmt.format(getattr(cell, attr)) if cell is not None else "-"
                row += f"{text:<10s}"
        lines.append(row.rstrip())
    return "\n".join(lines) + "\n"


def write_report_csv(report: EvaluationReport, path: str | Path) -> None:
    """Machine-readable report: one row per (gender, level) cell."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("gender,level,count,mae_cm,rmse_cm,max_error_cm,r_squared\n")
        for (gender, level), cell in report.cells.items():
            fh.write(
                f"{gender.label},{level.value},{cell.count},"
                f"{cell.mae_cm!r},{cell.rmse_cm!r},{cell.max_error_cm!r},{cell.r_squared!r}\n"
            )


def predictions_csv_lines(rows: list[PredictionRow]):
    """Yield predictions CSV lines (newline-terminated), header first."""
    yield "utterance_id,speaker_id,gender,predicted_cm,true_cm,classified_gender\n"
    for r in rows:
        classified = r.classified_gender.value if r.classified_gender else ""
        yield (
            f"{r.utterance_id},{r.speaker_id},{r.gender.value},"
            f"{r.predicted_cm!r},{r.true_cm!r},{classified}\n"
        )


def write_predictions_csv(rows: list[PredictionRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(predictions_csv_lines(rows))


def read_predictions_csv(path: str | Path) -> list[PredictionRow]:
    path = Path(path)
    rows: list[PredictionRow] = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if not header.startswith("utterance_id,speaker_id,gender,predicted_cm,true_cm"):
            raise MalformedRowError(path, 1, f"unexpected header {header!r}")
        for line_no, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) not in (5, 6):
                raise MalformedRowError(path, line_no, f"expected 5-6 fields, got {len(parts)}")
            try:
                classified = Gender.parse(parts[5]) if len(parts) == 6 and parts[5] else None
                rows.append(
                    PredictionRow(
                        utterance_id=parts[0],
                        speaker_id=parts[1],
                        gender=Gender.parse(parts[2]),
                        predicted_cm=float(parts[3]),
                        true_cm=float(parts[4]),
                        classified_gender=classified,
                    )
                )
            except ValueError as exc:
                raise MalformedRowError(path, line_no, str(exc)) from None
    return rows
