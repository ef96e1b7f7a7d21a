from pathlib import Path

import pytest

from voiceprofile.cli import build_parser, main
from voiceprofile.datasets import read_embeddings

FIXTURES = Path(__file__).parent / "fixtures"


def run_cli(*argv):
    return main([str(a) for a in argv])


class TestParser:
    def test_no_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as exc_info:
            main([])
        assert exc_info.value.code == 2

    def test_unknown_flag_is_usage_error(self):
        with pytest.raises(SystemExit) as exc_info:
            main(["stats", "--annotations", "x.tsv", "--frobnicate"])
        assert exc_info.value.code == 2

    @pytest.mark.parametrize(
        "command",
        ["stats", "train", "predict", "evaluate", "sweep", "ttest", "ecdf", "run"],
    )
    def test_subcommand_help_exits_zero(self, command, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main([command, "--help"])
        assert exc_info.value.code == 0
        assert command in capsys.readouterr().out or True  # help text printed

    def test_parser_builds(self):
        parser = build_parser()
        assert parser.prog == "voiceprofile"


class TestStats:
    def test_fixture_rows(self, capsys):
        assert run_cli("stats", "--annotations", FIXTURES / "annotations.tsv") == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "gender count mean_cm median_cm std_cm min_cm max_cm"
        assert lines[1].startswith("male 7 181.00 181.0 ")
        assert lines[1].endswith(" 172 190")
        assert lines[2].startswith("female 5 165.80 166.0 ")
        assert lines[2].endswith(" 158 172")

    def test_out_dir_files(self, tmp_path, capsys):
        code = run_cli(
            "stats", "--annotations", FIXTURES / "annotations.tsv",
            "--bin-width", "5", "--out", tmp_path,
        )
        assert code == 0
        capsys.readouterr()
        stats_lines = (tmp_path / "stats.csv").read_text(encoding="utf-8").splitlines()
        assert stats_lines[0] == "gender,count,mean_cm,median_cm,std_cm,min_cm,max_cm"
        assert len(stats_lines) == 3
        for label, expected_total in (("male", 7), ("female", 5)):
            hist_lines = (
                (tmp_path / f"histogram_{label}.csv").read_text(encoding="utf-8").splitlines()
            )
            assert hist_lines[0] == "bin_left_cm,count"
            counts = [int(line.split(",")[1]) for line in hist_lines[1:]]
            assert sum(counts) == expected_total
        assert (tmp_path / "histogram.png").stat().st_size > 0

    def test_bin_width_without_out_fails(self, caplog):
        code = run_cli(
            "stats", "--annotations", FIXTURES / "annotations.tsv", "--bin-width", "5"
        )
        assert code == 1
        assert "--out" in caplog.text

    def test_missing_file_fails(self, tmp_path):
        assert run_cli("stats", "--annotations", tmp_path / "absent.tsv") == 1

    def test_empty_file_fails(self, tmp_path):
        empty = tmp_path / "empty.tsv"
        empty.write_text("", encoding="utf-8")
        assert run_cli("stats", "--annotations", empty) == 1


class TestRun:
    def test_full_run_stdout_and_artifacts(self, tmp_path, capsys):
        code = run_cli("run", "--config", FIXTURES / "config_run.txt", "--out", tmp_path / "out")
        assert code == 0
        out = capsys.readouterr().out
        assert "level" in out and "utterance" in out and "speaker" in out
        assert "gender classifier accuracy: 1.0000" in out
        assert out.count("vs baseline [") == 2
        assert (tmp_path / "out" / "report.csv").exists()
        assert (tmp_path / "out" / "model_male.txt").exists()

    def test_baseline_run_has_no_classifier_line(self, capsys):
        code = run_cli("run", "--config", FIXTURES / "config_baseline.txt")
        assert code == 0
        out = capsys.readouterr().out
        assert "gender classifier accuracy" not in out
        assert "vs baseline" not in out

    def test_invalid_config_exits_one(self, tmp_path, caplog):
        bad = tmp_path / "bad.txt"
        base = (FIXTURES / "config_baseline.txt").read_text(encoding="utf-8")
        bad.write_text(base.replace("method=baseline", "method=plsr"), encoding="utf-8")
        assert run_cli("run", "--config", bad) == 1
        assert "validation" in caplog.text

    def test_single_corpus_flags_require_splits(self, caplog):
        code = run_cli(
            "run",
            "--annotations", FIXTURES / "annotations.tsv",
            "--embeddings", FIXTURES / "embeddings.bin",
        )
        assert code == 1
        assert "--splits" in caplog.text

    def test_single_corpus_flags_with_splits(self, capsys):
        code = run_cli(
            "run",
            "--annotations", FIXTURES / "annotations.tsv",
            "--embeddings", FIXTURES / "embeddings.bin",
            "--splits", FIXTURES / "splits.tsv",
            "--method", "mlr",
        )
        assert code == 0
        assert "utterance" in capsys.readouterr().out

    def test_flag_overrides_config_method(self, capsys):
        code = run_cli(
            "run", "--config", FIXTURES / "config_run.txt", "--method", "mlr"
        )
        assert code == 0
        # PLSR config would have swept components; MLR needs no k selection,
        # and the classifier line still appears.
        assert "gender classifier accuracy" in capsys.readouterr().out


class TestTrainPredictEvaluate:
    def train_dir(self, tmp_path):
        model_dir = tmp_path / "model"
        code = run_cli("train", "--config", FIXTURES / "config_run.txt", "--out", model_dir)
        assert code == 0
        return model_dir

    def test_train_writes_models_and_sweeps(self, tmp_path):
        model_dir = self.train_dir(tmp_path)
        for name in (
            "model_male.txt", "model_female.txt", "model_gender_classifier.txt",
            "metadata.txt", "sweep_male.csv", "sweep_female.csv", "sweep.png",
        ):
            assert (model_dir / name).exists(), name
        metadata = dict(
            line.split("=", 1)
            for line in (model_dir / "metadata.txt").read_text(encoding="utf-8").splitlines()
        )
        assert metadata["method"] == "plsr"
        assert metadata["dim"] == "8"
        assert "selected_components_male" in metadata

    def test_predict_with_annotations_stdout(self, tmp_path, capsys):
        model_dir = self.train_dir(tmp_path)
        capsys.readouterr()
        code = run_cli(
            "predict", model_dir,
            "--embeddings", FIXTURES / "embeddings.bin",
            "--annotations", FIXTURES / "annotations.tsv",
        )
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "utterance_id,speaker_id,gender,predicted_cm,true_cm,classified_gender"
        n_records = len(read_embeddings(FIXTURES / "embeddings.bin"))
        assert len(lines) == 1 + n_records
        # classifier is the default mode here, so the routed gender is recorded
        assert all(line.split(",")[5] in ("m", "f") for line in lines[1:])

    def test_predict_without_annotations_raw_csv(self, tmp_path, capsys):
        model_dir = self.train_dir(tmp_path)
        capsys.readouterr()
        code = run_cli("predict", model_dir, "--embeddings", FIXTURES / "val_embeddings.tsv")
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "utterance_id,speaker_id,classified_gender,predicted_cm"
        assert len(lines) > 1
        for line in lines[1:]:
            fields = line.split(",")
            assert fields[2] in ("m", "f")
            assert 100.0 < float(fields[3]) < 250.0

    def test_predict_oracle_without_annotations_fails(self, tmp_path, caplog):
        model_dir = self.train_dir(tmp_path)
        code = run_cli(
            "predict", model_dir,
            "--embeddings", FIXTURES / "val_embeddings.tsv",
            "--gender-mode", "oracle",
        )
        assert code == 1
        assert "annotations" in caplog.text

    def test_evaluate_predictions_file(self, tmp_path, capsys):
        model_dir = self.train_dir(tmp_path)
        pred_dir = tmp_path / "pred"
        code = run_cli(
            "predict", model_dir,
            "--embeddings", FIXTURES / "embeddings.bin",
            "--annotations", FIXTURES / "annotations.tsv",
            "--out", pred_dir,
        )
        assert code == 0
        capsys.readouterr()
        report_dir = tmp_path / "report"
        code = run_cli("evaluate", pred_dir / "predictions.csv", "--out", report_dir)
        assert code == 0
        out = capsys.readouterr().out
        assert out.splitlines()[1].startswith("level")
        for name in (
            "report.txt", "report.csv",
            "errors_utterance_male.csv", "errors_utterance_female.csv",
            "ecdf_utterance_male.csv", "ecdf_utterance_female.csv",
            "ecdf_utterance.png",
        ):
            assert (report_dir / name).exists(), name
        assert (report_dir / "report.txt").read_text(encoding="utf-8") == out

    def test_evaluate_missing_file_fails(self, tmp_path):
        assert run_cli("evaluate", tmp_path / "nope.csv") == 1


class TestSweepCommand:
    def test_stdout_table(self, capsys):
        code = run_cli("sweep", "--config", FIXTURES / "config_run.txt")
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "gender,n_components,validation_mae_cm,selected"
        body = [line.split(",") for line in lines[1:]]
        assert len(body) == 16  # k_range 1-8 for each gender
        for label in ("male", "female"):
            rows = [r for r in body if r[0] == label]
            assert [int(r[1]) for r in rows] == list(range(1, 9))
            assert sum(r[3] == "true" for r in rows) == 1

    def test_requires_validation_corpus(self, caplog):
        code = run_cli(
            "sweep",
            "--annotations", FIXTURES / "annotations.tsv",
            "--embeddings", FIXTURES / "embeddings.bin",
        )
        assert code == 1
        assert "validation" in caplog.text

    def test_out_dir_files(self, tmp_path, capsys):
        code = run_cli("sweep", "--config", FIXTURES / "config_run.txt", "--out", tmp_path)
        assert code == 0
        capsys.readouterr()
        assert (tmp_path / "sweep_male.csv").exists()
        assert (tmp_path / "sweep_female.csv").exists()
        assert (tmp_path / "sweep.png").stat().st_size > 0


class TestTtestCommand:
    def write_errors(self, path, pairs, header=True):
        with open(path, "w", encoding="utf-8") as fh:
            if header:
                fh.write("utterance_id,abs_error_cm\n")
            for utterance_id, value in pairs:
                if header:
                    fh.write(f"{utterance_id},{value}\n")
                else:
                    fh.write(f"{value}\n")

    def test_identical_files_null_result(self, tmp_path, capsys):
        path = tmp_path / "e.csv"
        self.write_errors(path, [("u1", 1.0), ("u2", 2.0), ("u3", 3.0)])
        assert run_cli("ttest", path, path) == 0
        out = capsys.readouterr().out
        assert out == "t=0 df=2 p=1 n=3 mean_diff=0\n"

    def test_id_join_ignores_row_order(self, tmp_path, capsys):
        pairs_a = [(f"u{i}", float(i)) for i in range(1, 7)]
        pairs_b = [(f"u{i}", float(i) + (0.5 if i % 2 else -0.2)) for i in range(1, 7)]
        a = tmp_path / "a.csv"
        b_sorted = tmp_path / "b1.csv"
        b_shuffled = tmp_path / "b2.csv"
        self.write_errors(a, pairs_a)
        self.write_errors(b_sorted, pairs_b)
        self.write_errors(b_shuffled, [pairs_b[i] for i in (3, 0, 5, 2, 4, 1)])
        assert run_cli("ttest", a, b_sorted) == 0
        first = capsys.readouterr().out
        assert run_cli("ttest", a, b_shuffled) == 0
        assert capsys.readouterr().out == first

    def test_bare_float_files(self, tmp_path, capsys):
        a = tmp_path / "a.txt"
        b = tmp_path / "b.txt"
        self.write_errors(a, [(None, v) for v in (1.0, 2.0, 3.0)], header=False)
        self.write_errors(b, [(None, v) for v in (2.0, 3.0, 4.0)], header=False)
        assert run_cli("ttest", a, b) == 0
        out = capsys.readouterr().out
        assert "mean_diff=-1" in out

    def test_length_mismatch_fails(self, tmp_path, caplog):
        a = tmp_path / "a.txt"
        b = tmp_path / "b.txt"
        self.write_errors(a, [(None, v) for v in (1.0, 2.0)], header=False)
        self.write_errors(b, [(None, v) for v in (1.0, 2.0, 3.0)], header=False)
        assert run_cli("ttest", a, b) == 1

    def test_id_set_mismatch_fails(self, tmp_path, caplog):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        self.write_errors(a, [("u1", 1.0), ("u2", 2.0)])
        self.write_errors(b, [("u1", 1.0), ("u9", 2.0)])
        assert run_cli("ttest", a, b) == 1
        assert "differ" in caplog.text

    def test_garbage_file_fails(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("not a number\n", encoding="utf-8")
        good = tmp_path / "good.txt"
        good.write_text("1.0\n", encoding="utf-8")
        assert run_cli("ttest", bad, good) == 1


class TestEcdfCommand:
    def test_stdout_golden(self, tmp_path, capsys):
        errors = tmp_path / "e.txt"
        errors.write_text("1.0\n2.0\n2.0\n4.0\n", encoding="utf-8")
        assert run_cli("ecdf", errors) == 0
        assert capsys.readouterr().out == (
            "abs_error_cm,cumulative_probability\n"
            "1.0,0.25\n2.0,0.5\n2.0,0.75\n4.0,1.0\n"
        )

    def test_out_files(self, tmp_path, capsys):
        errors = tmp_path / "e.txt"
        errors.write_text("1.0\n2.0\n", encoding="utf-8")
        assert run_cli("ecdf", errors, "--out", tmp_path / "out") == 0
        capsys.readouterr()
        assert (tmp_path / "out" / "ecdf.csv").exists()
        assert (tmp_path / "out" / "ecdf.png").stat().st_size > 0

    def test_header_errors_file_accepted(self, tmp_path, capsys):
        errors = tmp_path / "e.csv"
        errors.write_text("utterance_id,abs_error_cm\nu1,3.0\n", encoding="utf-8")
        assert run_cli("ecdf", errors) == 0
        assert "3.0,1.0" in capsys.readouterr().out


class TestLogging:
    def test_log_env_debug_accepted(self, monkeypatch, capsys):
        monkeypatch.setenv("VOICEPROFILE_LOG", "debug")
        assert run_cli("stats", "--annotations", FIXTURES / "annotations.tsv") == 0

    def test_log_env_invalid_value_still_runs(self, monkeypatch, capsys, caplog):
        monkeypatch.setenv("VOICEPROFILE_LOG", "chatty")
        assert run_cli("stats", "--annotations", FIXTURES / "annotations.tsv") == 0
        assert "VOICEPROFILE_LOG" in caplog.text
