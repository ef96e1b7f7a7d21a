import math

import numpy as np
import pytest

from voiceprofile.datasets import Gender
from voiceprofile.errors import EmptyGroupError, EmptyInputError, LengthMismatchError
from voiceprofile.evaluation import (
    Aggregation,
    Level,
    PredictionRow,
    accuracy,
    evaluate,
    predictions_csv_lines,
    read_predictions_csv,
    render_report_text,
    speaker_metrics,
    utterance_abs_errors,
    utterance_metrics,
    write_predictions_csv,
    write_report_csv,
)


def rows_from(preds, truths, gender=Gender.MALE, speaker="s1", prefix="u"):
    return [
        PredictionRow(f"{prefix}{i}", speaker, gender, float(p), float(t))
        for i, (p, t) in enumerate(zip(preds, truths))
    ]


class TestUtteranceMetrics:
    def test_direct_example(self):
        cell = utterance_metrics(rows_from([1, 2, 3], [1, 2, 5]), Gender.MALE)
        assert cell.mae_cm == pytest.approx(2.0 / 3.0, rel=1e-12)
        assert cell.rmse_cm == pytest.approx(math.sqrt(4.0 / 3.0), rel=1e-12)
        assert cell.max_error_cm == 2.0
        assert cell.count == 3

    def test_perfect_predictions(self):
        rows = rows_from([170, 180], [170, 180])
        cell = utterance_metrics(rows, Gender.MALE)
        assert (cell.mae_cm, cell.rmse_cm, cell.max_error_cm) == (0.0, 0.0, 0.0)
        assert cell.r_squared == 1.0

    def test_matches_direct_formulas(self):
        rng = np.random.default_rng(61)
        for _ in range(30):
            n = int(rng.integers(1, 60))
            truths = rng.uniform(150, 200, n)
            preds = truths + rng.normal(0, 3, n)
            rows = rows_from(preds, truths)
            cell = utterance_metrics(rows, Gender.MALE)
            e = preds - truths
            assert cell.mae_cm == pytest.approx(np.mean(np.abs(e)), rel=1e-12, abs=1e-12)
            assert cell.rmse_cm == pytest.approx(np.sqrt(np.mean(e**2)), rel=1e-12, abs=1e-12)
            assert cell.max_error_cm == pytest.approx(np.max(np.abs(e)), rel=1e-12)
            assert cell.rmse_cm**2 * n == pytest.approx(np.sum(e**2), rel=1e-9)
            ss_tot = np.sum((truths - truths.mean()) ** 2)
            if ss_tot > 0:
                assert cell.r_squared == pytest.approx(1 - np.sum(e**2) / ss_tot, rel=1e-10)
            assert cell.mae_cm <= cell.rmse_cm + 1e-15
            assert cell.rmse_cm <= cell.max_error_cm + 1e-15

    def test_permutation_invariant(self):
        rng = np.random.default_rng(62)
        truths = rng.uniform(150, 200, 20)
        preds = truths + rng.normal(size=20)
        rows = rows_from(preds, truths)
        shuffled = [rows[i] for i in rng.permutation(20)]
        a = utterance_metrics(rows, Gender.MALE)
        b = utterance_metrics(shuffled, Gender.MALE)
        # summation order may differ in the last ulp
        assert a.mae_cm == pytest.approx(b.mae_cm, rel=1e-12)
        assert a.rmse_cm == pytest.approx(b.rmse_cm, rel=1e-12)
        assert a.max_error_cm == b.max_error_cm

    def test_empty_group_raises(self):
        with pytest.raises(EmptyGroupError):
            utterance_metrics(rows_from([170], [171]), Gender.FEMALE)


class TestSpeakerMetrics:
    def test_mean_then_error(self):
        rows = [
            PredictionRow("u1", "s1", Gender.MALE, 178.0, 178.0),
            PredictionRow("u2", "s1", Gender.MALE, 182.0, 178.0),
        ]
        cell = speaker_metrics(rows, Gender.MALE, Aggregation.MEAN_PREDICTION)
        assert cell.mae_cm == pytest.approx(2.0)
        assert cell.count == 1

    def test_aggregation_modes_differ(self):
        # symmetric errors cancel under prediction averaging but not
        # under absolute-error averaging
        rows = [
            PredictionRow("u1", "s1", Gender.MALE, 176.0, 178.0),
            PredictionRow("u2", "s1", Gender.MALE, 180.0, 178.0),
        ]
        mean_pred = speaker_metrics(rows, Gender.MALE, Aggregation.MEAN_PREDICTION)
        mean_abs = speaker_metrics(rows, Gender.MALE, Aggregation.MEAN_ABS_ERROR)
        assert mean_pred.mae_cm == pytest.approx(0.0)
        assert mean_abs.mae_cm == pytest.approx(2.0)

    def test_single_utterance_speakers_equal_utterance_metrics(self):
        rng = np.random.default_rng(63)
        truths = rng.uniform(150, 200, 15)
        preds = truths + rng.normal(size=15)
        rows = [
            PredictionRow(f"u{i}", f"s{i}", Gender.MALE, float(p), float(t))
            for i, (p, t) in enumerate(zip(preds, truths))
        ]
        utter = utterance_metrics(rows, Gender.MALE)
        for aggregation in Aggregation:
            speaker = speaker_metrics(rows, Gender.MALE, aggregation)
            assert speaker.mae_cm == pytest.approx(utter.mae_cm, rel=1e-12)
            assert speaker.rmse_cm == pytest.approx(utter.rmse_cm, rel=1e-12)
            assert speaker.max_error_cm == pytest.approx(utter.max_error_cm, rel=1e-12)

    def test_constant_prediction_levels_match_when_balanced(self):
        # constant per-gender prediction with equal utterance counts per
        # speaker: both levels see the same error multiset
        rng = np.random.default_rng(64)
        rows = []
        for s in range(6):
            truth = float(rng.integers(165, 195))
            for u in range(10):
                rows.append(PredictionRow(f"s{s}_u{u}", f"s{s}", Gender.MALE, 177.0, truth))
        utter = utterance_metrics(rows, Gender.MALE)
        speaker = speaker_metrics(rows, Gender.MALE, Aggregation.MEAN_PREDICTION)
        assert speaker.mae_cm == pytest.approx(utter.mae_cm, rel=1e-12)
        assert speaker.rmse_cm == pytest.approx(utter.rmse_cm, rel=1e-12)
        assert speaker.max_error_cm == pytest.approx(utter.max_error_cm, rel=1e-12)

    def test_baseline_r_squared_zero_on_training_group(self):
        # predicting the group mean makes SSE equal SS_tot
        heights = [170.0, 175.0, 182.0, 169.0]
        mean = sum(heights) / len(heights)
        rows = [
            PredictionRow(f"u{i}", f"s{i}", Gender.MALE, mean, h)
            for i, h in enumerate(heights)
        ]
        cell = utterance_metrics(rows, Gender.MALE)
        assert cell.r_squared == pytest.approx(0.0, abs=1e-12)


class TestAccuracy:
    def test_all_match(self):
        assert accuracy([Gender.MALE, Gender.FEMALE], [Gender.MALE, Gender.FEMALE]) == 1.0

    def test_half_match(self):
        assert accuracy([Gender.MALE, Gender.MALE], [Gender.MALE, Gender.FEMALE]) == 0.5

    def test_none_match(self):
        assert accuracy([Gender.FEMALE], [Gender.MALE]) == 0.0

    def test_length_mismatch_raises(self):
        with pytest.raises(LengthMismatchError):
            accuracy([Gender.MALE], [])

    def test_empty_raises(self):
        with pytest.raises(EmptyInputError):
            accuracy([], [])


class TestEvaluateAndReport:
    def make_rows(self):
        rng = np.random.default_rng(65)
        rows = []
        for s in range(4):
            gender = Gender.MALE if s < 2 else Gender.FEMALE
            truth = float(rng.integers(160, 195))
            for u in range(3):
                rows.append(
                    PredictionRow(
                        f"s{s}_u{u}", f"s{s}", gender, truth + float(rng.normal()), truth
                    )
                )
        return rows

    def test_cells_present_for_both_genders_and_levels(self):
        report = evaluate(self.make_rows(), Aggregation.MEAN_PREDICTION)
        assert set(report.cells) == {
            (g, level) for g in Gender for level in Level
        }
        for cell in report.cells.values():
            assert cell.mae_cm <= cell.rmse_cm <= cell.max_error_cm + 1e-15

    def test_single_gender_input(self):
        rows = rows_from([170.0], [171.0])
        report = evaluate(rows, Aggregation.MEAN_PREDICTION)
        assert (Gender.FEMALE, Level.UTTERANCE) not in report.cells
        assert (Gender.MALE, Level.UTTERANCE) in report.cells

    def test_render_contains_formatted_metrics(self):
        report = evaluate(self.make_rows(), Aggregation.MEAN_PREDICTION)
        text = render_report_text(report)
        assert "MAE" in text and "RMSE" in text and "Max Error" in text
        assert "utterance" in text and "speaker" in text
        cell = report.cells[(Gender.MALE, Level.UTTERANCE)]
        assert f"{cell.mae_cm:.2f}" in text

    def test_report_csv_roundtrip_precision(self, tmp_path):
        report = evaluate(self.make_rows(), Aggregation.MEAN_PREDICTION)
        path = tmp_path / "report.csv"
        write_report_csv(report, path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "gender,level,count,mae_cm,rmse_cm,max_error_cm,r_squared"
        parsed = {}
        for line in lines[1:]:
            gender, level, count, mae, rmse, max_err, r2 = line.split(",")
            parsed[(gender, level)] = (int(count), float(mae), float(rmse), float(max_err))
        cell = report.cells[(Gender.MALE, Level.UTTERANCE)]
        assert parsed[("male", "utterance")] == (
            cell.count, cell.mae_cm, cell.rmse_cm, cell.max_error_cm
        )

    def test_predictions_csv_roundtrip(self, tmp_path):
        rows = self.make_rows()
        rows[0] = PredictionRow(
            rows[0].utterance_id, rows[0].speaker_id, rows[0].gender,
            rows[0].predicted_cm, rows[0].true_cm, classified_gender=Gender.FEMALE,
        )
        path = tmp_path / "pred.csv"
        write_predictions_csv(rows, path)
        back = read_predictions_csv(path)
        assert back == rows

    def test_predictions_lines_header(self):
        lines = list(predictions_csv_lines([]))
        assert lines == ["utterance_id,speaker_id,gender,predicted_cm,true_cm,classified_gender\n"]

    def test_utterance_abs_errors_sorted(self):
        rows = [
            PredictionRow("b", "s1", Gender.MALE, 171.0, 170.0),
            PredictionRow("a", "s1", Gender.MALE, 168.0, 170.0),
        ]
        assert utterance_abs_errors(rows, Gender.MALE) == [("a", 2.0), ("b", 1.0)]

    def test_prediction_row_requires_positive_truth(self):
        with pytest.raises(ValueError):
            PredictionRow("u1", "s1", Gender.MALE, 170.0, 0.0)
