"""Speaker-height prediction from pre-extracted speaker embeddings.

Per-gender linear regressors (mean baseline, least squares, partial
least squares with a validated component sweep) over fixed-dimensional
speaker embeddings, a logistic gender classifier for hierarchical
prediction, dataset statistics, and statistical evaluation (MAE / RMSE /
max error at utterance and speaker level, paired t-tests, empirical
CDFs).
"""

from .datasets import (
    Dataset,
    EmbeddingRecord,
    Gender,
    GenderStats,
    SpeakerAnnotation,
    Split,
    compute_gender_stats,
    histogram,
    inches_to_cm,
    load_annotations,
    load_dataset,
    load_splits,
    read_embeddings,
    write_embeddings,
    write_embeddings_tsv,
)
from .errors import VoiceProfileError
from .evaluation import (
    Aggregation,
    EvaluationReport,
    Level,
    MetricSummary,
    PredictionRow,
    accuracy,
    evaluate,
    read_predictions_csv,
    render_report_text,
    speaker_metrics,
    utterance_metrics,
    write_predictions_csv,
    write_report_csv,
)
from .pipeline import (
    DatasetSource,
    ExperimentConfig,
    ExperimentResult,
    GenderMode,
    GenderRouting,
    HierarchicalModel,
    Method,
    build_experiment_config,
    parse_config_file,
    predict_hierarchical,
    run_experiment,
    sweep_pls_components,
    train_gender_classifier,
    train_per_gender,
)
from .regression import (
    LinearModel,
    ModelKind,
    PlsFitTrace,
    collapse_pls,
    fit_baseline,
    fit_logistic,
    fit_ols,
    fit_pls1,
    load_model,
    predict,
    predict_many,
    save_model,
)
from .stats import (
    EcdfCurve,
    PairedTTestResult,
    build_ecdf,
    ecdf_at,
    paired_t_test,
    regularized_incomplete_beta,
    student_t_sf,
    write_ecdf_csv,
)

__version__ = "0.1.0"

__all__ = [
    "Aggregation",
    "Dataset",
    "DatasetSource",
    "EcdfCurve",
    "EmbeddingRecord",
    "EvaluationReport",
    "ExperimentConfig",
    "ExperimentResult",
    "Gender",
    "GenderMode",
    "GenderRouting",
    "GenderStats",
    "HierarchicalModel",
    "Level",
    "LinearModel",
    "Method",
    "MetricSummary",
    "ModelKind",
    "PairedTTestResult",
    "PlsFitTrace",
    "PredictionRow",
    "SpeakerAnnotation",
    "Split",
    "VoiceProfileError",
    "accuracy",
    "build_ecdf",
    "build_experiment_config",
    "collapse_pls",
    "compute_gender_stats",
    "ecdf_at",
    "evaluate",
    "fit_baseline",
    "fit_logistic",
    "fit_ols",
    "fit_pls1",
    "histogram",
    "inches_to_cm",
    "load_annotations",
    "load_dataset",
    "load_model",
    "load_splits",
    "paired_t_test",
    "parse_config_file",
    "predict",
    "predict_hierarchical",
    "predict_many",
    "read_embeddings",
    "read_predictions_csv",
    "regularized_incomplete_beta",
    "render_report_text",
    "run_experiment",
    "save_model",
    "speaker_metrics",
    "student_t_sf",
    "sweep_pls_components",
    "train_gender_classifier",
    "train_per_gender",
    "utterance_metrics",
    "write_ecdf_csv",
    "write_embeddings",
    "write_embeddings_tsv",
    "write_predictions_csv",
    "write_report_csv",
    "__version__",
]
