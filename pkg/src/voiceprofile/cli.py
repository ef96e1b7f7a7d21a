"""Command-line surface.

Subcommands: stats, train, predict, evaluate, sweep, ttest, ecdf, run.
Data goes to stdout (pipeable CSV / tables), diagnostics to stderr. The
VOICEPROFILE_LOG environment variable (error | warn | info | debug)
controls stderr verbosity. Exit status is 0 only when the operation
fully succeeded; usage errors exit 2 (argparse convention) and
operational failures exit 1.

File-set arguments: corpora are named either by direct flags
(--annotations / --embeddings / --splits) or by a key=value config file
(--config) using role-prefixed keys such as `train.annotations`;
CLI flags override config keys. --classifier-train points at a small
key=value file with `annotations=` and `embeddings=` entries (plus
optional `splits=` / `split=`), letting the gender classifier train on
a different corpus than the height regressors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .datasets import (
    Gender,
    Split,
    compute_gender_stats,
    histogram,
    load_annotations,
    load_dataset,
    read_embeddings,
)
from .errors import (
    ConfigError,
    DimMismatchError,
    ExperimentError,
    MalformedRowError,
    VoiceProfileError,
)
from .evaluation import (
    Aggregation,
    evaluate,
    predictions_csv_lines,
    read_predictions_csv,
    render_report_text,
    utterance_abs_errors,
    write_predictions_csv,
    write_report_csv,
)
from .pipeline import (
    DatasetSource,
    GenderMode,
    GenderRouting,
    HierarchicalModel,
    Method,
    build_experiment_config,
    classify_gender,
    parse_config_file,
    parse_k_range,
    predict_hierarchical,
    run_experiment,
    source_from_keys,
    train_gender_classifier,
    train_per_gender,
)
from .regression import load_model, predict_many, save_model
from .stats import build_ecdf, ecdf_csv_lines, paired_t_test, write_ecdf_csv

log = logging.getLogger("voiceprofile")

_LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


def _configure_logging() -> None:
    raw = os.environ.get("VOICEPROFILE_LOG", "warn").lower()
    level = _LOG_LEVELS.get(raw)
    logging.basicConfig(
        stream=sys.stderr, level=level or logging.WARNING, format="%(levelname)s: %(message)s"
    )
    if level is None:
        log.warning("unknown VOICEPROFILE_LOG=%r, using warn", raw)


def _resolved(path_text: str) -> str:
    return str(Path(path_text).expanduser().resolve())


def _config_keys(args) -> tuple[dict[str, str], Path]:
    """Config-file keys (if any) plus the directory for resolving them."""
    if getattr(args, "config", None):
        config_path = Path(args.config)
        return parse_config_file(config_path), config_path.resolve().parent
    return {}, Path.cwd()


def _apply_classifier_train_flag(keys: dict[str, str], spec_path: str) -> None:
    """Expand a --classifier-train dataset-spec file into config keys."""
    path = Path(spec_path)
    spec = parse_config_file(path)
    unknown = set(spec) - {"annotations", "embeddings", "splits", "split"}
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    base = path.resolve().parent
    for key in ("annotations", "embeddings", "splits"):
        if key in spec:
            keys[f"classifier_train.{key}"] = str((base / spec[key]).resolve())
    if "split" in spec:
        keys["classifier_train.split"] = spec["split"]


def _apply_scalar_flags(keys: dict[str, str], args) -> None:
    for flag, key in (
        ("method", "method"),
        ("k_range", "k_range"),
        ("gender_mode", "gender_mode"),
        ("gender_routing", "gender_routing"),
        ("aggregation", "aggregation"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            keys[key] = value
    if getattr(args, "l2_normalize", False):
        keys["l2_normalize"] = "true"
    if getattr(args, "compare_baseline", False):
        keys["compare_baseline"] = "true"
    if getattr(args, "classifier_train", None):
        _apply_classifier_train_flag(keys, args.classifier_train)


def _apply_corpus_flags(keys: dict[str, str], args, roles: tuple[str, ...]) -> None:
    """Map --annotations/--embeddings/--splits onto role-prefixed keys.

    When annotations/embeddings are given, each role in `roles` reads the
    same corpus; with several roles a splits file is required and each
    role is restricted to its own split label (train role -> 'train'
    split, test role -> 'test').
    """
    direct = {
        "annotations": getattr(args, "annotations", None),
        "embeddings": getattr(args, "embeddings", None),
        "splits": getattr(args, "splits", None),
    }
    if direct["annotations"] is None and direct["embeddings"] is None:
        if direct["splits"] is not None:
            for role in roles:
                keys[f"{role}.splits"] = _resolved(direct["splits"])
        return
    if direct["annotations"] is None or direct["embeddings"] is None:
        raise ConfigError("--annotations and --embeddings must be given together")
    if len(roles) > 1 and direct["splits"] is None:
        raise ConfigError("a single corpus for train and test requires --splits")
    for role in roles:
        keys[f"{role}.annotations"] = _resolved(direct["annotations"])
        keys[f"{role}.embeddings"] = _resolved(direct["embeddings"])
        if direct["splits"] is not None:
            keys[f"{role}.splits"] = _resolved(direct["splits"])
            if len(roles) > 1:
                keys[f"{role}.split"] = "train" if role == "train" else "test"


# --- subcommands ---


def cmd_stats(args) -> int:
    annotations = load_annotations(args.annotations)
    if not annotations:
        raise MalformedRowError(Path(args.annotations), 1, "no annotation rows")
    if args.bin_width is not None and args.out is None:
        raise ConfigError("--bin-width requires --out for the histogram files")

    print("gender count mean_cm median_cm std_cm min_cm max_cm")
    stats_by_gender = {}
    for gender in Gender:
        if not any(a.gender is gender for a in annotations):
            log.info("no %s speakers, skipping row", gender.label)
            continue
        s = compute_gender_stats(annotations, gender)
        stats_by_gender[gender] = s
        print(
            f"{gender.label} {s.count} {s.mean:.2f} {s.median:.1f} "
            f"{s.std:.2f} {s.min:g} {s.max:g}"
        )

    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "stats.csv", "w", encoding="utf-8") as fh:
            fh.write("gender,count,mean_cm,median_cm,std_cm,min_cm,max_cm\n")
            for gender, s in stats_by_gender.items():
                fh.write(
                    f"{gender.label},{s.count},{s.mean!r},{s.median!r},"
                    f"{s.std!r},{s.min!r},{s.max!r}\n"
                )
        if args.bin_width is not None:
            from . import plots

            bins_by_label = {}
            for gender in stats_by_gender:
                bins = histogram(annotations, gender, args.bin_width)
                bins_by_label[gender.label] = bins
                with open(out_dir / f"histogram_{gender.label}.csv", "w", encoding="utf-8") as fh:
                    fh.write("bin_left_cm,count\n")
                    for left, count in bins:
                        fh.write(f"{left!r},{count}\n")
            plots.render_histogram(bins_by_label, args.bin_width, out_dir / "histogram.png")
    return 0


def _train_sources(args) -> tuple[dict[str, str], Path]:
    keys, base_dir = _config_keys(args)
    _apply_scalar_flags(keys, args)
    _apply_corpus_flags(keys, args, roles=("train",))
    return keys, base_dir


def cmd_train(args) -> int:
    keys, base_dir = _train_sources(args)
    train_src = source_from_keys(keys, "train", base_dir)
    if train_src is None:
        raise ConfigError("no training corpus: give --annotations/--embeddings or train.* config keys")
    validation_src = source_from_keys(keys, "validation", base_dir)
    classifier_src = source_from_keys(keys, "classifier_train", base_dir)

    method = Method(keys.get("method", "mlr"))
    gender_mode = GenderMode(keys.get("gender_mode", "oracle"))
    l2 = keys.get("l2_normalize", "false").lower() in ("true", "1", "yes", "on")
    k_range = parse_k_range(keys["k_range"]) if "k_range" in keys else None
    if method is Method.PLSR and validation_src is None:
        raise ConfigError("method=plsr needs validation.* config keys for the component sweep")

    train_ds = train_src.load()
    validation_ds = validation_src.load() if validation_src else None
    training = train_per_gender(train_ds, method, validation_ds, k_range, l2)

    classifier = None
    if gender_mode is GenderMode.CLASSIFIER:
        classifier_ds = classifier_src.load() if classifier_src else train_ds
        classifier = train_gender_classifier(classifier_ds, l2)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_model(training.models[Gender.MALE], out_dir / "model_male.txt")
    save_model(training.models[Gender.FEMALE], out_dir / "model_female.txt")
    if classifier is not None:
        save_model(classifier, out_dir / "model_gender_classifier.txt")

    metadata = {
        "method": method.value,
        "gender_mode": gender_mode.value,
        "l2_normalize": str(l2).lower(),
        "dim": str(train_ds.dim),
        "train_utterances": str(len(train_ds.embeddings)),
    }
    for gender, k in (training.selected_components or {}).items():
        metadata[f"selected_components_{gender.label}"] = str(k)
    with open(out_dir / "metadata.txt", "w", encoding="utf-8") as fh:
        fh.writelines(f"{k}={v}\n" for k, v in sorted(metadata.items()))

    if training.sweep_curves:
        from . import plots

        for gender, curve in training.sweep_curves.items():
            with open(out_dir / f"sweep_{gender.label}.csv", "w", encoding="utf-8") as fh:
                fh.write("n_components,validation_mae_cm\n")
                for k, mae in curve:
                    fh.write(f"{k},{float(mae)!r}\n")
        plots.render_sweep(
            {g.label: c for g, c in training.sweep_curves.items()}, out_dir / "sweep.png"
        )
    log.info("saved models to %s", out_dir)
    return 0


def _load_model_dir(model_dir: Path) -> tuple[HierarchicalModel, dict[str, str]]:
    metadata: dict[str, str] = {}
    metadata_path = model_dir / "metadata.txt"
    if metadata_path.exists():
        metadata = parse_config_file(metadata_path)
    classifier_path = model_dir / "model_gender_classifier.txt"
    return (
        HierarchicalModel(
            male_model=load_model(model_dir / "model_male.txt"),
            female_model=load_model(model_dir / "model_female.txt"),
            gender_classifier=load_model(classifier_path) if classifier_path.exists() else None,
        ),
        metadata,
    )


def cmd_predict(args) -> int:
    model_dir = Path(args.model_dir)
    model, metadata = _load_model_dir(model_dir)
    l2 = args.l2_normalize or metadata.get("l2_normalize") == "true"
    routing = GenderRouting(args.gender_routing or "utterance")
    if args.gender_mode is not None:
        gender_mode = GenderMode(args.gender_mode)
    else:
        gender_mode = (
            GenderMode.CLASSIFIER if model.gender_classifier is not None else GenderMode.ORACLE
        )

    if gender_mode is GenderMode.CLASSIFIER and model.gender_classifier is None:
        raise ConfigError(f"no model_gender_classifier.txt in {model_dir}")
    if model.male_model.dim and model.female_model.dim and model.male_model.dim != model.female_model.dim:
        raise DimMismatchError(model.male_model.dim, model.female_model.dim, "per-gender models")

    if args.annotations is not None:
        dataset = load_dataset(args.annotations, args.embeddings)
        rows = predict_hierarchical(
            model, dataset.embeddings, gender_mode, dataset, routing, l2
        )
        lines = predictions_csv_lines(rows)
    else:
        if gender_mode is GenderMode.ORACLE:
            raise ConfigError("oracle gender mode requires --annotations")
        records = read_embeddings(args.embeddings)
        genders = classify_gender(model.gender_classifier, records, l2, routing)
        from .pipeline import _feature_matrix  # same package, shared feature prep

        X = _feature_matrix(records, l2)
        predicted = {
            Gender.MALE: predict_many(model.male_model, X),
            Gender.FEMALE: predict_many(model.female_model, X),
        }

        def raw_lines():
            yield "utterance_id,speaker_id,classified_gender,predicted_cm\n"
            for i, record in enumerate(records):
                value = float(predicted[genders[i]][i])
                yield f"{record.utterance_id},{record.speaker_id},{genders[i].value},{value!r}\n"

        lines = raw_lines()

    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "predictions.csv", "w", encoding="utf-8") as fh:
            fh.writelines(lines)
    else:
        for line in lines:
            sys.stdout.write(line)
    return 0


def cmd_evaluate(args) -> int:
    rows = read_predictions_csv(args.predictions)
    aggregation = Aggregation(args.aggregation or "mean-prediction")
    report = evaluate(rows, aggregation)
    sys.stdout.write(render_report_text(report))

    if args.out is not None:
        from . import plots

        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.txt").write_text(render_report_text(report), encoding="utf-8")
        write_report_csv(report, out_dir / "report.csv")
        curves = {}
        for gender in Gender:
            errors = utterance_abs_errors(rows, gender)
            if not errors:
                continue
            with open(out_dir / f"errors_utterance_{gender.label}.csv", "w", encoding="utf-8") as fh:
                fh.write("utterance_id,abs_error_cm\n")
                for utterance_id, err in errors:
                    fh.write(f"{utterance_id},{float(err)!r}\n")
            curve = build_ecdf([e for _, e in errors])
            curves[gender.label] = curve
            write_ecdf_csv(curve, out_dir / f"ecdf_utterance_{gender.label}.csv")
        if curves:
            plots.render_ecdf(curves, out_dir / "ecdf_utterance.png")
    return 0


def cmd_sweep(args) -> int:
    keys, base_dir = _config_keys(args)
    _apply_scalar_flags(keys, args)
    _apply_corpus_flags(keys, args, roles=("train",))
    train_src = source_from_keys(keys, "train", base_dir)
    validation_src = source_from_keys(keys, "validation", base_dir)
    if train_src is None or validation_src is None:
        raise ConfigError("sweep needs train.* and validation.* corpora (see --config)")
    l2 = keys.get("l2_normalize", "false").lower() in ("true", "1", "yes", "on")
    k_range = parse_k_range(keys["k_range"]) if "k_range" in keys else None

    training = train_per_gender(train_src.load(), Method.PLSR, validation_src.load(), k_range, l2)

    print("gender,n_components,validation_mae_cm,selected")
    for gender, curve in training.sweep_curves.items():
        best = training.selected_components[gender]
        for k, mae in curve:
            print(f"{gender.label},{k},{float(mae)!r},{str(k == best).lower()}")

    if args.out is not None:
        from . import plots

        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for gender, curve in training.sweep_curves.items():
            with open(out_dir / f"sweep_{gender.label}.csv", "w", encoding="utf-8") as fh:
                fh.write("n_components,validation_mae_cm\n")
                for k, mae in curve:
                    fh.write(f"{k},{float(mae)!r}\n")
        plots.render_sweep(
            {g.label: c for g, c in training.sweep_curves.items()}, out_dir / "sweep.png"
        )
    return 0


def _read_error_values(path: Path) -> tuple[list[str] | None, list[float]]:
    """Errors file: `utterance_id,abs_error_cm` CSV or one float per line."""
    ids: list[str] = []
    values: list[float] = []
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().strip()
        has_ids = first == "utterance_id,abs_error_cm"
        if not has_ids and first:
            try:
                values.append(float(first.split(",")[-1]))
            except ValueError:
                raise MalformedRowError(path, 1, f"expected a float or the errors header, got {first!r}") from None
        for line_no, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if has_ids:
                if len(parts) != 2:
                    raise MalformedRowError(path, line_no, f"expected 2 fields, got {len(parts)}")
                ids.append(parts[0])
            try:
                values.append(float(parts[-1]))
            except ValueError:
                raise MalformedRowError(path, line_no, f"bad value {parts[-1]!r}") from None
    return (ids if has_ids else None), values


def cmd_ttest(args) -> int:
    ids_a, values_a = _read_error_values(Path(args.errors_a))
    ids_b, values_b = _read_error_values(Path(args.errors_b))
    if ids_a is not None and ids_b is not None:
        by_id_a = dict(zip(ids_a, values_a))
        by_id_b = dict(zip(ids_b, values_b))
        if len(by_id_a) != len(ids_a) or len(by_id_b) != len(ids_b):
            raise ConfigError("duplicate utterance ids in an errors file")
        if set(by_id_a) != set(by_id_b):
            only_a = len(set(by_id_a) - set(by_id_b))
            only_b = len(set(by_id_b) - set(by_id_a))
            raise ConfigError(
                f"utterance ids differ between files ({only_a} only in A, {only_b} only in B)"
            )
        order = sorted(by_id_a)
        values_a = [by_id_a[u] for u in order]
        values_b = [by_id_b[u] for u in order]
    result = paired_t_test(values_a, values_b)
    print(
        f"t={result.t_statistic:g} df={result.degrees_of_freedom} "
        f"p={result.p_value_two_tailed:g} n={result.n_pairs} "
        f"mean_diff={result.mean_difference:g}"
    )
    return 0


def cmd_ecdf(args) -> int:
    _, values = _read_error_values(Path(args.errors))
    curve = build_ecdf(values)
    for line in ecdf_csv_lines(curve):
        sys.stdout.write(line)
    if args.out is not None:
        from . import plots

        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_ecdf_csv(curve, out_dir / "ecdf.csv")
        plots.render_ecdf({"errors": curve}, out_dir / "ecdf.png")
    return 0


def cmd_run(args) -> int:
    keys, base_dir = _config_keys(args)
    _apply_scalar_flags(keys, args)
    _apply_corpus_flags(keys, args, roles=("train", "test"))
    out_dir = Path(args.out).resolve() if args.out else None
    config = build_experiment_config(keys, base_dir, out_dir)
    result = run_experiment(config)

    sys.stdout.write(render_report_text(result.report))
    if result.classifier_accuracy is not None:
        print(f"gender classifier accuracy: {result.classifier_accuracy:.4f}")
    for gender, ttest in result.ttest_vs_baseline.items():
        print(
            f"vs baseline [{gender.label}]: t={ttest.t_statistic:g} "
            f"df={ttest.degrees_of_freedom} p={ttest.p_value_two_tailed:g}"
        )
    if result.artifacts:
        log.info("wrote %d artifacts to %s", len(result.artifacts), config.out_dir)
    return 0


# --- parser ---


def _add_corpus_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--annotations", help="speaker annotations TSV (speaker_id, gender, height_cm)")
    sub.add_argument("--embeddings", help="embeddings file (binary or TSV)")
    sub.add_argument("--splits", help="speaker split assignment TSV")


def _add_model_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--method", choices=[m.value for m in Method], help="regression method")
    sub.add_argument("--k-range", dest="k_range", metavar="A-B", help="PLSR component range, e.g. 1-192")
    sub.add_argument(
        "--gender-mode", dest="gender_mode", choices=[g.value for g in GenderMode],
        help="route utterances by annotated gender (oracle) or by the classifier",
    )
    sub.add_argument(
        "--classifier-train", dest="classifier_train", metavar="PATH",
        help="dataset-spec file (annotations=..., embeddings=...) for classifier training",
    )
    sub.add_argument(
        "--gender-routing", dest="gender_routing", choices=[r.value for r in GenderRouting],
        help="classifier decisions per utterance or per speaker (majority vote)",
    )
    sub.add_argument("--l2-normalize", dest="l2_normalize", action="store_true",
                     help="scale each embedding to unit length")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voiceprofile",
        description="Train and evaluate speaker-height predictors over speaker embeddings.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    p_stats = sub.add_parser("stats", help="per-gender height statistics of an annotations file",
                             allow_abbrev=False)
    p_stats.add_argument("--annotations", required=True)
    p_stats.add_argument("--bin-width", dest="bin_width", type=float,
                         help="also write height histogram CSVs with this bin width (cm)")
    p_stats.add_argument("--out", help="directory for stats.csv and histogram files")
    p_stats.set_defaults(func=cmd_stats)

    p_train = sub.add_parser("train", help="fit per-gender height models (and gender classifier)",
                             allow_abbrev=False)
    _add_corpus_flags(p_train)
    _add_model_flags(p_train)
    p_train.add_argument("--config", help="key=value experiment config supplying corpora")
    p_train.add_argument("--out", required=True, help="directory for model files")
    p_train.set_defaults(func=cmd_train)

    p_predict = sub.add_parser("predict", help="apply saved models to an embeddings file",
                               allow_abbrev=False)
    p_predict.add_argument("model_dir", help="directory written by `train` (or `run`)")
    p_predict.add_argument("--embeddings", required=True)
    p_predict.add_argument("--annotations", help="needed for oracle gender routing and true heights")
    p_predict.add_argument("--gender-mode", dest="gender_mode",
                           choices=[g.value for g in GenderMode])
    p_predict.add_argument("--gender-routing", dest="gender_routing",
                           choices=[r.value for r in GenderRouting])
    p_predict.add_argument("--l2-normalize", dest="l2_normalize", action="store_true")
    p_predict.add_argument("--out", help="directory for predictions.csv (default: stdout)")
    p_predict.set_defaults(func=cmd_predict)

    p_eval = sub.add_parser("evaluate", help="metric report from a predictions.csv",
                            allow_abbrev=False)
    p_eval.add_argument("predictions", help="predictions.csv with true heights")
    p_eval.add_argument("--aggregation", choices=[a.value for a in Aggregation])
    p_eval.add_argument("--out", help="directory for report/error/eCDF files")
    p_eval.set_defaults(func=cmd_evaluate)

    p_sweep = sub.add_parser("sweep", help="PLSR component sweep against a validation corpus",
                             allow_abbrev=False)
    _add_corpus_flags(p_sweep)
    p_sweep.add_argument("--config", help="config supplying train.* and validation.* corpora")
    p_sweep.add_argument("--k-range", dest="k_range", metavar="A-B")
    p_sweep.add_argument("--l2-normalize", dest="l2_normalize", action="store_true")
    p_sweep.add_argument("--out", help="directory for sweep CSVs and figure")
    p_sweep.set_defaults(func=cmd_sweep)

    p_ttest = sub.add_parser("ttest", help="paired t-test between two error files",
                             allow_abbrev=False)
    p_ttest.add_argument("errors_a")
    p_ttest.add_argument("errors_b")
    p_ttest.set_defaults(func=cmd_ttest)

    p_ecdf = sub.add_parser("ecdf", help="empirical CDF of an error file", allow_abbrev=False)
    p_ecdf.add_argument("errors")
    p_ecdf.add_argument("--out", help="directory for ecdf.csv and figure")
    p_ecdf.set_defaults(func=cmd_ecdf)

    p_run = sub.add_parser("run", help="full experiment: train, predict, evaluate, report",
                           allow_abbrev=False)
    _add_corpus_flags(p_run)
    _add_model_flags(p_run)
    p_run.add_argument("--config", help="key=value experiment config")
    p_run.add_argument("--aggregation", choices=[a.value for a in Aggregation])
    p_run.add_argument("--compare-baseline", dest="compare_baseline", action="store_true",
                       help="also fit the per-gender mean baseline and t-test against it")
    p_run.add_argument("--out", help="directory for report and model artifacts")
    p_run.set_defaults(func=cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging()
    try:
        return args.func(args)
    except ExperimentError as exc:
        log.error("%s", exc)
        return 1
    except VoiceProfileError as exc:
        log.error("%s", exc)
        return 1
    except OSError as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
