"""Experiment orchestration: per-gender training, component sweeps,
hierarchical prediction, and end-to-end runs.

An experiment is described by an ExperimentConfig (usually parsed from a
flat key=value file) naming a training corpus, a test corpus, optionally
a validation corpus (required for the PLSR component sweep) and a
separate classifier training corpus. `run_experiment` executes
load -> train -> predict -> evaluate -> report and wraps any failure in
an ExperimentError naming the stage.

Training rows are per-utterance: every utterance of a speaker
contributes one (embedding, height) pair, matching the utterance-level
test protocol. Gender-specific regressors are fit independently; in
classifier mode a logistic gender classifier routes each test utterance
to one of them (or each speaker, under PER_SPEAKER routing, by majority
vote over the speaker's utterance classifications with ties going to
male, the majority class).

Experiments are deterministic: repeated runs on identical inputs produce
byte-identical reports and model files. Fitting is single-threaded per
gender; the per-gender fits share no state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .datasets import Dataset, EmbeddingRecord, Gender, Split, load_dataset
from .errors import (
    ConfigError,
    DimMismatchError,
    EmptyValidationError,
    ExperimentError,
    MissingGenderError,
    TooManyComponentsError,
    UnknownSpeakerError,
    VoiceProfileError,
)
from .evaluation import (
    Aggregation,
    EvaluationReport,
    PredictionRow,
    accuracy,
    evaluate,
    render_report_text,
    utterance_abs_errors,
    write_predictions_csv,
    write_report_csv,
)
from .regression import (
    LinearModel,
    ModelKind,
    collapse_pls,
    fit_baseline,
    fit_logistic,
    fit_ols,
    fit_pls1,
    predict_many,
    save_model,
)
from .stats import PairedTTestResult, build_ecdf, paired_t_test, write_ecdf_csv

MALE_LABEL = 1.0  # logistic classifier output >= 0.5 reads as male


class Method(enum.Enum):
    BASELINE = "baseline"
    MLR = "mlr"
    PLSR = "plsr"


class GenderMode(enum.Enum):
    ORACLE = "oracle"
    CLASSIFIER = "classifier"


class GenderRouting(enum.Enum):
    PER_UTTERANCE = "utterance"
    PER_SPEAKER = "speaker"


@dataclass(frozen=True)
class DatasetSource:
    """Paths naming one corpus, with an optional split restriction."""

    annotations: Path
    embeddings: Path
    splits: Path | None = None
    split: Split | None = None

    def load(self) -> Dataset:
        if self.split is not None and self.splits is None:
            raise ConfigError(f"split={self.split.value} given without a splits file")
        return load_dataset(self.annotations, self.embeddings, self.splits, self.split)


@dataclass(frozen=True)
class ExperimentConfig:
    train: DatasetSource
    test: DatasetSource
    method: Method
    validation: DatasetSource | None = None
    classifier_train: DatasetSource | None = None
    gender_mode: GenderMode = GenderMode.ORACLE
    routing: GenderRouting = GenderRouting.PER_UTTERANCE
    aggregation: Aggregation = Aggregation.MEAN_PREDICTION
    k_range: tuple[int, int] | None = None  # None: sweep 1..d
    l2_normalize: bool = False
    compare_baseline: bool = False
    out_dir: Path | None = None

    def validate(self) -> None:
        if self.method is Method.PLSR and self.validation is None:
            raise ConfigError("method=plsr requires a validation dataset for the component sweep")
        if self.k_range is not None:
            lo, hi = self.k_range
            if lo < 1 or hi < lo:
                raise ConfigError(f"bad k_range {lo}-{hi}")
        for name, source in (
            ("train", self.train),
            ("test", self.test),
            ("validation", self.validation),
            ("classifier_train", self.classifier_train),
        ):
            if source is not None and source.split is not None and source.splits is None:
                raise ConfigError(f"{name}: split label given without a splits file")


@dataclass(frozen=True, eq=False)
class HierarchicalModel:
    """Gender classifier plus one height regressor per gender."""

    male_model: LinearModel
    female_model: LinearModel
    gender_classifier: LinearModel | None = None
    selected_components: dict[Gender, int] | None = None
    sweep_curves: dict[Gender, list[tuple[int, float]]] | None = None

    def regressor(self, gender: Gender) -> LinearModel:
        return self.male_model if gender is Gender.MALE else self.female_model


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    report: EvaluationReport
    rows: list[PredictionRow]
    model: HierarchicalModel
    classifier_accuracy: float | None
    ttest_vs_baseline: dict[Gender, PairedTTestResult]
    metadata: dict[str, str]
    artifacts: dict[str, Path]


def l2_normalize_rows(X: np.ndarray) -> np.ndarray:
    """Scale each row to unit Euclidean norm; all-zero rows pass through."""
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    return X / np.where(norms == 0.0, 1.0, norms)


def _feature_matrix(records: list[EmbeddingRecord], normalize: bool) -> np.ndarray:
    X = np.array([r.vector for r in records], dtype=float)
    return l2_normalize_rows(X) if normalize else X


def _gender_rows(ds: Dataset, gender: Gender) -> list[EmbeddingRecord]:
    return [r for r in ds.embeddings if ds.gender_of(r.speaker_id) is gender]


def parse_k_range(text: str) -> tuple[int, int]:
    """Parse 'A-B' (or a single 'K') into an inclusive component range."""
    text = text.strip()
    try:
        if "-" in text:
            lo_text, hi_text = text.split("-", 1)
            lo, hi = int(lo_text), int(hi_text)
        else:
            lo = hi = int(text)
    except ValueError:
        raise ConfigError(f"bad k_range {text!r}, expected 'A-B'") from None
    if lo < 1 or hi < lo:
        raise ConfigError(f"bad k_range {text!r}: need 1 <= A <= B")
    return lo, hi


def sweep_pls_components(
    train_X: np.ndarray,
    train_y: np.ndarray,
    val_X: np.ndarray,
    val_y: np.ndarray,
    ks: list[int],
) -> tuple[int, list[tuple[int, float]]]:
    """Pick the component count minimizing validation utterance-level MAE.

    PLS components are nested, so one fit at max(ks) is truncated to
    score every candidate; this is identical to refitting per k. Ties
    break toward the smallest k. Counts past an early deflation stop
    reuse the final model (there is nothing further to fit).
    """
    if val_X.shape[0] == 0:
        raise EmptyValidationError("requested")
    if not ks:
        raise ConfigError("empty component range")
    ks = sorted(set(ks))
    _, trace = fit_pls1(train_X, train_y, max(ks))
    curve: list[tuple[int, float]] = []
    best_k, best_mae = ks[0], float("inf")
    for k in ks:
        model_k = collapse_pls(trace, k)
        mae = float(np.mean(np.abs(predict_many(model_k, val_X) - val_y)))
        curve.append((k, mae))
        if mae < best_mae:
            best_k, best_mae = k, mae
    return best_k, curve


@dataclass(frozen=True, eq=False)
class PerGenderTraining:
    models: dict[Gender, LinearModel]
    selected_components: dict[Gender, int] | None = None
    sweep_curves: dict[Gender, list[tuple[int, float]]] | None = None


def train_per_gender(
    train: Dataset,
    method: Method,
    validation: Dataset | None = None,
    k_range: tuple[int, int] | None = None,
    l2_normalize: bool = False,
) -> PerGenderTraining:
    """Fit one height regressor per gender on that gender's utterances."""
    models: dict[Gender, LinearModel] = {}
    selected: dict[Gender, int] = {}
    curves: dict[Gender, list[tuple[int, float]]] = {}
    d = train.dim
    for gender in Gender:
        records = _gender_rows(train, gender)
        if not records:
            raise MissingGenderError(gender.label)
        X = _feature_matrix(records, l2_normalize)
        y = np.array([train.height_of(r.speaker_id) for r in records])
        if method is Method.BASELINE:
            models[gender] = fit_baseline(y, dim=d)
        elif method is Method.MLR:
            models[gender] = fit_ols(X, y)
        else:
            if validation is None:
                raise ConfigError("PLSR training requires a validation dataset")
            val_records = _gender_rows(validation, gender)
            if not val_records:
                raise EmptyValidationError(gender.label)
            val_X = _feature_matrix(val_records, l2_normalize)
            val_y = np.array([validation.height_of(r.speaker_id) for r in val_records])
            lo, hi = k_range if k_range is not None else (1, d)
            if hi > d:
                raise TooManyComponentsError(hi, d)
            best_k, curve = sweep_pls_components(X, y, val_X, val_y, list(range(lo, hi + 1)))
            model, trace = fit_pls1(X, y, max(best_k, 1))
            models[gender] = collapse_pls(trace, best_k)
            selected[gender] = best_k
            curves[gender] = curve
    if method is Method.PLSR:
        return PerGenderTraining(models, selected, curves)
    return PerGenderTraining(models)


def train_gender_classifier(dataset: Dataset, l2_normalize: bool = False) -> LinearModel:
    """Logistic gender classifier over utterance embeddings (male = 1)."""
    records = dataset.embeddings
    X = _feature_matrix(records, l2_normalize)
    labels = np.array(
        [MALE_LABEL if dataset.gender_of(r.speaker_id) is Gender.MALE else 0.0 for r in records]
    )
    model, _ = fit_logistic(X, labels)
    return model


def classify_gender(
    classifier: LinearModel,
    records: list[EmbeddingRecord],
    l2_normalize: bool = False,
    routing: GenderRouting = GenderRouting.PER_UTTERANCE,
) -> list[Gender]:
    """Gender decision per record; 0.5 on the sigmoid splits male/female.

    PER_SPEAKER routing replaces each utterance's decision by the
    speaker's majority vote, ties to male.
    """
    X = _feature_matrix(records, l2_normalize)
    probs = predict_many(classifier, X)
    decisions = [Gender.MALE if p >= 0.5 else Gender.FEMALE for p in probs]
    if routing is GenderRouting.PER_UTTERANCE:
        return decisions
    male_votes: dict[str, int] = {}
    totals: dict[str, int] = {}
    for record, decision in zip(records, decisions):
        totals[record.speaker_id] = totals.get(record.speaker_id, 0) + 1
        if decision is Gender.MALE:
            male_votes[record.speaker_id] = male_votes.get(record.speaker_id, 0) + 1
    speaker_gender = {
        sid: Gender.MALE if 2 * male_votes.get(sid, 0) >= totals[sid] else Gender.FEMALE
        for sid in totals
    }
    return [speaker_gender[r.speaker_id] for r in records]


def predict_hierarchical(
    model: HierarchicalModel,
    records: list[EmbeddingRecord],
    gender_mode: GenderMode,
    annotations: Dataset,
    routing: GenderRouting = GenderRouting.PER_UTTERANCE,
    l2_normalize: bool = False,
) -> list[PredictionRow]:
    """Predict heights for test utterances, routed by gender.

    ORACLE mode routes by the annotated gender; CLASSIFIER mode routes by
    the logistic classifier's decision. Rows keep the ground-truth gender
    (evaluation conditions on it) and, in classifier mode, the decision
    that routed them.
    """
    for record in records:
        if record.speaker_id not in annotations.annotations:
            raise UnknownSpeakerError(record.speaker_id)
    if gender_mode is GenderMode.ORACLE:
        routed = [annotations.gender_of(r.speaker_id) for r in records]
        classified: list[Gender | None] = [None] * len(records)
    else:
        if model.gender_classifier is None:
            raise ConfigError("classifier mode requires a trained gender classifier")
        routed = classify_gender(model.gender_classifier, records, l2_normalize, routing)
        classified = list(routed)

    X = _feature_matrix(records, l2_normalize)
    rows: list[PredictionRow] = []
    for i, record in enumerate(records):
        regressor = model.regressor(routed[i])
        predicted = (
            regressor.intercept
            if regressor.kind is ModelKind.BASELINE
            else float(regressor.intercept + regressor.coefficients @ X[i])
        )
        rows.append(
            PredictionRow(
                utterance_id=record.utterance_id,
                speaker_id=record.speaker_id,
                gender=annotations.gender_of(record.speaker_id),
                predicted_cm=predicted,
                true_cm=annotations.height_of(record.speaker_id),
                classified_gender=classified[i],
            )
        )
    return rows


# --- config file handling ---

_CONFIG_ROLES = ("train", "test", "validation", "classifier_train")
_CONFIG_SCALARS = (
    "method",
    "k_range",
    "gender_mode",
    "gender_routing",
    "aggregation",
    "l2_normalize",
    "compare_baseline",
    "out",
)


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Flat key=value lines; '#' starts a comment; later keys win."""
    path = Path(path)
    out: dict[str, str] = {}
    for line_no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{line_no}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def _parse_bool(key: str, value: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


def source_from_keys(keys: dict[str, str], role: str, base_dir: Path) -> DatasetSource | None:
    prefix = role + "."
    relevant = {k[len(prefix):]: v for k, v in keys.items() if k.startswith(prefix)}
    if not relevant:
        return None
    unknown = set(relevant) - {"annotations", "embeddings", "splits", "split"}
    if unknown:
        raise ConfigError(f"{role}: unknown keys {sorted(unknown)}")
    for required in ("annotations", "embeddings"):
        if required not in relevant:
            raise ConfigError(f"{role}: missing {role}.{required}")
    split = None
    if "split" in relevant and relevant["split"]:
        try:
            split = Split(relevant["split"])
        except ValueError:
            raise ConfigError(f"{role}: unknown split {relevant['split']!r}") from None
    return DatasetSource(
        annotations=(base_dir / relevant["annotations"]).resolve(),
        embeddings=(base_dir / relevant["embeddings"]).resolve(),
        splits=(base_dir / relevant["splits"]).resolve() if relevant.get("splits") else None,
        split=split,
    )


def build_experiment_config(
    keys: dict[str, str], base_dir: Path, out_dir: Path | None = None
) -> ExperimentConfig:
    """Assemble and validate an ExperimentConfig from flat config keys."""
    known_prefixes = tuple(r + "." for r in _CONFIG_ROLES)
    for key in keys:
        if key in _CONFIG_SCALARS or key.startswith(known_prefixes):
            continue
        raise ConfigError(f"unknown config key {key!r}")

    sources = {role: source_from_keys(keys, role, base_dir) for role in _CONFIG_ROLES}
    if sources["train"] is None:
        raise ConfigError("missing train.annotations / train.embeddings")
    if sources["test"] is None:
        raise ConfigError("missing test.annotations / test.embeddings")

    def enum_value(key: str, enum_cls, default):
        if key not in keys:
            return default
        try:
            return enum_cls(keys[key])
        except ValueError:
            valid = ", ".join(e.value for e in enum_cls)
            raise ConfigError(f"{key}: expected one of {valid}, got {keys[key]!r}") from None

    config = ExperimentConfig(
        train=sources["train"],
        test=sources["test"],
        validation=sources["validation"],
        classifier_train=sources["classifier_train"],
        method=enum_value("method", Method, Method.MLR),
        gender_mode=enum_value("gender_mode", GenderMode, GenderMode.ORACLE),
        routing=enum_value("gender_routing", GenderRouting, GenderRouting.PER_UTTERANCE),
        aggregation=enum_value("aggregation", Aggregation, Aggregation.MEAN_PREDICTION),
        k_range=parse_k_range(keys["k_range"]) if "k_range" in keys else None,
        l2_normalize=_parse_bool("l2_normalize", keys["l2_normalize"]) if "l2_normalize" in keys else False,
        compare_baseline=_parse_bool("compare_baseline", keys["compare_baseline"]) if "compare_baseline" in keys else False,
        out_dir=out_dir if out_dir is not None else (base_dir / keys["out"]).resolve() if "out" in keys else None,
    )
    config.validate()
    return config


# --- end-to-end experiment ---


def _stage(stage: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ExperimentError:
        raise
    except (VoiceProfileError, OSError) as exc:
        raise ExperimentError(stage, exc) from exc


def _check_dims(named_datasets: dict[str, Dataset]) -> int:
    dims = {name: ds.dim for name, ds in named_datasets.items() if ds is not None}
    values = {d for d in dims.values() if d > 0}
    if len(values) > 1:
        raise DimMismatchError(min(values), max(values), f"embedding dims across datasets {dims}")
    return values.pop() if values else 0


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Execute one experiment and write its artifacts (if out_dir is set).

    Artifacts: report.txt / report.csv, predictions.csv, per-gender
    utterance error and eCDF CSVs, persisted models, sweep CSVs for
    PLSR, a metadata key=value file, and rendered figures. When
    compare_baseline is set, a baseline model trained on the same rows
    is evaluated and a per-gender paired t-test of per-utterance
    absolute errors is emitted.
    """
    _stage("config-validate", config.validate)

    datasets: dict[str, Dataset | None] = {}

    def load_all():
        datasets["train"] = config.train.load()
        datasets["test"] = config.test.load()
        datasets["validation"] = config.validation.load() if config.validation else None
        datasets["classifier_train"] = (
            config.classifier_train.load() if config.classifier_train else None
        )
        _check_dims({k: v for k, v in datasets.items() if v is not None})
        if not datasets["test"].embeddings:
            raise ConfigError("test dataset has no utterances")

    _stage("load", load_all)
    train_ds: Dataset = datasets["train"]
    test_ds: Dataset = datasets["test"]

    def train_all():
        training = train_per_gender(
            train_ds, config.method, datasets["validation"], config.k_range, config.l2_normalize
        )
        classifier = None
        if config.gender_mode is GenderMode.CLASSIFIER:
            classifier_ds = datasets["classifier_train"] or train_ds
            classifier = train_gender_classifier(classifier_ds, config.l2_normalize)
        return HierarchicalModel(
            male_model=training.models[Gender.MALE],
            female_model=training.models[Gender.FEMALE],
            gender_classifier=classifier,
            selected_components=training.selected_components,
            sweep_curves=training.sweep_curves,
        )

    model: HierarchicalModel = _stage("train", train_all)

    rows: list[PredictionRow] = _stage(
        "predict",
        predict_hierarchical,
        model,
        test_ds.embeddings,
        config.gender_mode,
        test_ds,
        config.routing,
        config.l2_normalize,
    )

    def evaluate_all():
        report = evaluate(rows, config.aggregation)
        classifier_accuracy = None
        if config.gender_mode is GenderMode.CLASSIFIER:
            classifier_accuracy = accuracy(
                [r.classified_gender for r in rows], [r.gender for r in rows]
            )
        ttests: dict[Gender, PairedTTestResult] = {}
        if config.compare_baseline:
            base_training = train_per_gender(train_ds, Method.BASELINE, None, None, config.l2_normalize)
            base_model = HierarchicalModel(
                male_model=base_training.models[Gender.MALE],
                female_model=base_training.models[Gender.FEMALE],
                gender_classifier=model.gender_classifier,
            )
            base_rows = predict_hierarchical(
                base_model, test_ds.embeddings, config.gender_mode, test_ds,
                config.routing, config.l2_normalize,
            )
            for gender in Gender:
                ours = utterance_abs_errors(rows, gender)
                base = utterance_abs_errors(base_rows, gender)
                if ours:
                    ttests[gender] = paired_t_test(
                        [e for _, e in ours], [e for _, e in base]
                    )
        return report, classifier_accuracy, ttests

    report, classifier_accuracy, ttests = _stage("evaluate", evaluate_all)

    metadata = _result_metadata(config, model, rows, classifier_accuracy)
    artifacts: dict[str, Path] = {}
    if config.out_dir is not None:
        artifacts = _stage(
            "report", write_artifacts, config.out_dir, config, model, rows, report,
            ttests, metadata,
        )

    return ExperimentResult(
        report=report,
        rows=rows,
        model=model,
        classifier_accuracy=classifier_accuracy,
        ttest_vs_baseline=ttests,
        metadata=metadata,
        artifacts=artifacts,
    )


def _result_metadata(config, model, rows, classifier_accuracy) -> dict[str, str]:
    metadata = {
        "method": config.method.value,
        "gender_mode": config.gender_mode.value,
        "gender_routing": config.routing.value,
        "aggregation": config.aggregation.value,
        "l2_normalize": str(config.l2_normalize).lower(),
        "test_utterances": str(len(rows)),
        "test_speakers": str(len({r.speaker_id for r in rows})),
    }
    if config.method is Method.PLSR:
        metadata["k_range"] = (
            f"{config.k_range[0]}-{config.k_range[1]}" if config.k_range else "1-d"
        )
        for gender, k in (model.selected_components or {}).items():
            metadata[f"selected_components_{gender.label}"] = str(k)
    if config.gender_mode is GenderMode.CLASSIFIER:
        metadata["classifier_train"] = (
            "explicit" if config.classifier_train is not None else "default-train-set"
        )
        if classifier_accuracy is not None:
            metadata["classifier_test_accuracy"] = repr(classifier_accuracy)
    return metadata


def write_artifacts(
    out_dir: Path,
    config: ExperimentConfig,
    model: HierarchicalModel,
    rows: list[PredictionRow],
    report: EvaluationReport,
    ttests: dict[Gender, PairedTTestResult],
    metadata: dict[str, str],
) -> dict[str, Path]:
    from . import plots  # heavy import (matplotlib), keep it off the library path

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    artifacts: dict[str, Path] = {}

    def emit(name: str, writer) -> Path:
        path = out_dir / name
        writer(path)
        artifacts[name] = path
        return path

    emit("report.txt", lambda p: p.write_text(render_report_text(report), encoding="utf-8"))
    emit("report.csv", lambda p: write_report_csv(report, p))
    emit("predictions.csv", lambda p: write_predictions_csv(rows, p))
    emit("metadata.txt", lambda p: p.write_text(
        "".join(f"{k}={v}\n" for k, v in sorted(metadata.items())), encoding="utf-8"
    ))
    emit("model_male.txt", lambda p: save_model(model.male_model, p))
    emit("model_female.txt", lambda p: save_model(model.female_model, p))
    if model.gender_classifier is not None:
        emit("model_gender_classifier.txt", lambda p: save_model(model.gender_classifier, p))

    ecdf_curves = {}
    for gender in Gender:
        errors = utterance_abs_errors(rows, gender)
        if not errors:
            continue
        emit(f"errors_utterance_{gender.label}.csv", lambda p, e=errors: _write_errors_csv(e, p))
        curve = build_ecdf([e for _, e in errors])
        ecdf_curves[gender.label] = curve
        emit(f"ecdf_utterance_{gender.label}.csv", lambda p, c=curve: write_ecdf_csv(c, p))
    if ecdf_curves:
        emit("ecdf_utterance.png", lambda p: plots.render_ecdf(ecdf_curves, p))

    if model.sweep_curves:
        for gender, curve in model.sweep_curves.items():
            emit(
                f"sweep_{gender.label}.csv",
                lambda p, c=curve: _write_sweep_csv(c, p),
            )
        emit("sweep.png", lambda p: plots.render_sweep(
            {g.label: c for g, c in model.sweep_curves.items()}, p
        ))

    if ttests:
        emit("ttest.csv", lambda p: _write_ttest_csv(ttests, p))
    return artifacts


def _write_errors_csv(pairs: list[tuple[str, float]], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("utterance_id,abs_error_cm\n")
        for utterance_id, err in pairs:
            fh.write(f"{utterance_id},{float(err)!r}\n")


def _write_sweep_csv(curve: list[tuple[int, float]], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("n_components,validation_mae_cm\n")
        for k, mae in curve:
            fh.write(f"{k},{float(mae)!r}\n")


def _write_ttest_csv(ttests: dict[Gender, PairedTTestResult], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("gender,t_statistic,degrees_of_freedom,p_value_two_tailed,mean_difference,n_pairs,zero_variance\n")
        for gender, result in ttests.items():
            fh.write(
                f"{gender.label},{result.t_statistic!r},{result.degrees_of_freedom},"
                f"{result.p_value_two_tailed!r},{result.mean_difference!r},"
                f"{result.n_pairs},{str(result.zero_variance).lower()}\n"
            )
