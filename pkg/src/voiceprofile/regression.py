"""Statistical learners mapping embedding vectors to heights (or genders).

Four fitters share the LinearModel result type:

* `fit_baseline`  - constant model predicting the training mean.
* `fit_ols`       - multiple linear regression, minimum-norm least squares.
* `fit_pls1`      - partial least squares for a single response, computed
                    with the NIPALS deflation scheme (closed form per
                    component for univariate y, so fitting is
                    deterministic and iteration-free).
* `fit_logistic`  - L2-regularized logistic regression via iteratively
                    reweighted least squares; used as the gender
                    classifier in hierarchical prediction.

Features are mean-centered, never variance-scaled, inside `fit_pls1`
(the usual convention when predictors live on one homogeneous scale, as
embedding dimensions do). Any L2-normalization of the vectors themselves
is the caller's choice and happens upstream.

Fitting functions are pure; fitted models are immutable and safe to
share across threads for concurrent prediction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DimMismatchError,
    EmptyTrainingSetError,
    ModelFormatError,
    NonFiniteInputError,
    SingleClassError,
    TooManyComponentsError,
)

PLS_DEFLATION_TOL = 1e-12  # relative to the initial covariance norm
LOGISTIC_RIDGE = 1e-4
LOGISTIC_MAX_ITER = 100
LOGISTIC_PARAM_TOL = 1e-8


class ModelKind(enum.Enum):
    OLS = "ols"
    PLS = "pls"
    BASELINE = "baseline"
    LOGISTIC = "logistic"


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Affine predictor: intercept + coefficients . x.

    For LOGISTIC kind, `predict` passes the affine form through a sigmoid.
    BASELINE models have all-zero coefficients and accept inputs of any
    dimension. PLS models carry `n_components` and the centering means
    used during fitting (informational; the affine form already folds
    them in).
    """

    kind: ModelKind
    intercept: float
    coefficients: np.ndarray
    n_components: int | None = None
    x_mean: np.ndarray | None = None
    y_mean: float | None = None

    def __post_init__(self):
        self.coefficients.flags.writeable = False

    @property
    def dim(self) -> int:
        return int(self.coefficients.shape[0])


@dataclass(frozen=True, eq=False)
class PlsFitTrace:
    """Per-component NIPALS byproducts, enough to rebuild any truncation.

    weights, loadings have one column per stored component; score_norms
    holds the Euclidean norm of each score vector. `n_components` is the
    stored count, which is the requested count unless deflation stopped
    early. A `degenerate` trace (constant response) stores no components.
    """

    weights: np.ndarray  # (d, k)
    loadings: np.ndarray  # (d, k)
    response_loadings: np.ndarray  # (k,)
    score_norms: np.ndarray  # (k,)
    x_mean: np.ndarray  # (d,)
    y_mean: float
    requested_components: int
    degenerate: bool = False

    @property
    def n_components(self) -> int:
        return int(self.weights.shape[1])


@dataclass(frozen=True)
class LogisticFitInfo:
    converged: bool
    n_iter: int
    objectives: tuple[float, ...]  # regularized NLL per accepted iterate


def _as_matrix(X, y=None):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-D, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise NonFiniteInputError("X")
    if y is None:
        return X
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise ValueError(f"y must be 1-D, got shape {y.shape}")
    if y.shape[0] != X.shape[0]:
        raise DimMismatchError(X.shape[0], y.shape[0], "rows of X vs y")
    if not np.all(np.isfinite(y)):
        raise NonFiniteInputError("y")
    return X, y


def fit_baseline(heights, dim: int = 0) -> LinearModel:
    """Constant predictor: the mean of the training heights.

    Equivalent to a regression with zero explanatory power (R^2 = 0 on
    its own training group). `dim` only sizes the zero coefficient
    vector so persisted models stay self-describing.
    """
    heights = np.asarray(heights, dtype=float)
    if heights.size == 0:
        raise EmptyTrainingSetError("no training heights")
    if not np.all(np.isfinite(heights)):
        raise NonFiniteInputError("heights")
    return LinearModel(ModelKind.BASELINE, float(heights.mean()), np.zeros(dim))


def fit_ols(X, y) -> LinearModel:
    """Least-squares fit of [1 | X] b ~ y.

    Solved by SVD (np.linalg.lstsq), which is numerically stable and
    returns the minimum-norm solution when the design is rank-deficient,
    so duplicated or collinear embedding dimensions cannot change the
    fitted values.
    """
    X, y = _as_matrix(X, y)
    n, d = X.shape
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got X shape {X.shape}")
    design = np.hstack([np.ones((n, 1)), X])
    beta, *_ = np.linalg.lstsq(design, y, rcond=None)
    return LinearModel(ModelKind.OLS, float(beta[0]), beta[1:].copy())


def fit_pls1(X, y, n_components: int) -> tuple[LinearModel, PlsFitTrace]:
    """PLS regression for a univariate response via NIPALS deflation.

    After centering X and y, each component k takes the weight vector
    w = X'y / ||X'y||, scores t = Xw, loadings p = X't/(t't) and
    q = y't/(t't), then deflates X <- X - t p' and y <- y - q t.
    Deflation stops early once ||X'y|| falls below 1e-12 of its initial
    value (that covariance is exhausted). The collapsed affine model is
    B = W (P'W)^-1 q with intercept y_mean - x_mean . B.

    A constant response has no covariance to model at all; that returns
    a baseline-equivalent model flagged degenerate rather than raising.
    """
    X, y = _as_matrix(X, y)
    n, d = X.shape
    if n < 2:
        raise ValueError(f"need n >= 2 samples, got {n}")
    if not 1 <= n_components <= d:
        raise TooManyComponentsError(n_components, d)

    x_mean = X.mean(axis=0)
    y_mean = float(y.mean())
    Xc = X - x_mean
    yc = y - y_mean

    initial_cov_norm = float(np.linalg.norm(Xc.T @ yc))
    if initial_cov_norm == 0.0:
        trace = PlsFitTrace(
            weights=np.zeros((d, 0)),
            loadings=np.zeros((d, 0)),
            response_loadings=np.zeros(0),
            score_norms=np.zeros(0),
            x_mean=x_mean,
            y_mean=y_mean,
            requested_components=n_components,
            degenerate=True,
        )
        model = LinearModel(
            ModelKind.PLS, y_mean, np.zeros(d), n_components=0, x_mean=x_mean, y_mean=y_mean
        )
        return model, trace

    weights, loadings, q_list, norms = [], [], [], []
    for _ in range(n_components):
        cov = Xc.T @ yc
        cov_norm = float(np.linalg.norm(cov))
        if cov_norm < PLS_DEFLATION_TOL * initial_cov_norm:
            break
        w = cov / cov_norm
        t = Xc @ w
        tt = float(t @ t)
        if tt == 0.0:
            break
        p = (Xc.T @ t) / tt
        q = float(yc @ t) / tt
        Xc = Xc - np.outer(t, p)
        yc = yc - q * t
        weights.append(w)
        loadings.append(p)
        q_list.append(q)
        norms.append(math.sqrt(tt))

    trace = PlsFitTrace(
        weights=np.column_stack(weights) if weights else np.zeros((d, 0)),
        loadings=np.column_stack(loadings) if loadings else np.zeros((d, 0)),
        response_loadings=np.array(q_list),
        score_norms=np.array(norms),
        x_mean=x_mean,
        y_mean=y_mean,
        requested_components=n_components,
    )
    return collapse_pls(trace, trace.n_components), trace


def collapse_pls(trace: PlsFitTrace, k: int) -> LinearModel:
    """Affine model using the first `k` components of a fitted trace.

    Components are nested, so truncating an existing trace is identical
    to refitting with a smaller component count. `k` beyond the stored
    count clamps to it (deflation had already exhausted the covariance).
    """
    k = min(k, trace.n_components)
    d = trace.x_mean.shape[0]
    if k == 0:
        coefs = np.zeros(d)
    else:
        W = trace.weights[:, :k]
        P = trace.loadings[:, :k]
        q = trace.response_loadings[:k]
        coefs = W @ np.linalg.solve(P.T @ W, q)
    intercept = trace.y_mean - float(trace.x_mean @ coefs)
    return LinearModel(
        ModelKind.PLS,
        intercept,
        coefs,
        n_components=k,
        x_mean=trace.x_mean,
        y_mean=trace.y_mean,
    )


def sigmoid(z):
    """Numerically stable logistic function."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out if out.ndim else float(out)


def _logistic_objective(design, y, beta, ridge):
    z = design @ beta
    # log(1 + e^z) - y z, computed without overflow
    nll = float(np.sum(np.logaddexp(0.0, z) - y * z))
    return nll + 0.5 * ridge * float(beta[1:] @ beta[1:])


def fit_logistic(X, labels) -> tuple[LinearModel, LogisticFitInfo]:
    """Binary logistic regression by IRLS (Newton steps with halving).

    Minimizes the negative log-likelihood plus an L2 penalty
    (ridge 1e-4, intercept excluded) that keeps separable embedding data
    from driving the weights to infinity. Newton steps are halved until
    the objective does not increase, so the recorded objective sequence
    is nonincreasing. Stops when the parameter change falls below 1e-8
    in infinity norm, or after 100 iterations (then `converged=False`
    and the best iterate is returned).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(labels, dtype=float)
    X, y = _as_matrix(X, y)
    n, d = X.shape
    if n < 2:
        raise ValueError(f"need n >= 2 samples, got {n}")
    if not np.all((y == 0.0) | (y == 1.0)):
        raise ValueError("labels must be binary (0/1)")
    if np.all(y == y[0]):
        raise SingleClassError()

    design = np.hstack([np.ones((n, 1)), X])
    ridge_diag = np.ones(d + 1) * LOGISTIC_RIDGE
    ridge_diag[0] = 0.0

    beta = np.zeros(d + 1)
    objective = _logistic_objective(design, y, beta, LOGISTIC_RIDGE)
    objectives = [objective]
    converged = False
    n_iter = 0

    for n_iter in range(1, LOGISTIC_MAX_ITER + 1):
        p = sigmoid(design @ beta)
        w = p * (1.0 - p)
        grad = design.T @ (p - y) + ridge_diag * beta
        hess = (design.T * w) @ design + np.diag(ridge_diag)
        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(hess, grad, rcond=None)

        scale = 1.0
        new_beta = beta - step
        new_objective = _logistic_objective(design, y, new_beta, LOGISTIC_RIDGE)
        while new_objective > objective and scale > 1e-12:
            scale *= 0.5
            new_beta = beta - scale * step
            new_objective = _logistic_objective(design, y, new_beta, LOGISTIC_RIDGE)
        if new_objective > objective:
            break  # no descent direction left at machine precision

        delta = float(np.max(np.abs(new_beta - beta)))
        beta = new_beta
        objective = new_objective
        objectives.append(objective)
        if delta < LOGISTIC_PARAM_TOL:
            converged = True
            break

    model = LinearModel(ModelKind.LOGISTIC, float(beta[0]), beta[1:].copy())
    return model, LogisticFitInfo(converged, n_iter, tuple(objectives))


def predict(model: LinearModel, x) -> float:
    """Model output for one vector: affine value, or its sigmoid for LOGISTIC."""
    x = np.asarray(x, dtype=float)
    if model.kind is ModelKind.BASELINE:
        return model.intercept
    if x.shape != model.coefficients.shape:
        raise DimMismatchError(model.coefficients.shape[0], x.shape, "predict input")
    value = model.intercept + float(model.coefficients @ x)
    if model.kind is ModelKind.LOGISTIC:
        return float(sigmoid(value))
    return value


def predict_many(model: LinearModel, X) -> np.ndarray:
    """Vectorized `predict` over the rows of X."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-D, got shape {X.shape}")
    if model.kind is ModelKind.BASELINE:
        return np.full(X.shape[0], model.intercept)
    if X.shape[1] != model.coefficients.shape[0]:
        raise DimMismatchError(model.coefficients.shape[0], X.shape[1], "predict input")
    values = model.intercept + X @ model.coefficients
    if model.kind is ModelKind.LOGISTIC:
        return sigmoid(values)
    return values


def save_model(model: LinearModel, path: str | Path) -> None:
    """Persist a model as self-describing text.

    Floats are rendered with shortest round-trip precision (repr), so a
    load reproduces the stored values exactly. PLS models additionally
    record their component count and centering means (response mean
    first, then the feature means).
    """
    lines = [
        f"kind={model.kind.value}",
        f"dim={model.dim}",
        f"intercept={model.intercept!r}",
        "coefficients=" + " ".join(repr(float(c)) for c in model.coefficients),
    ]
    if model.kind is ModelKind.PLS:
        if model.n_components is not None:
            lines.append(f"n_components={model.n_components}")
        if model.x_mean is not None and model.y_mean is not None:
            means = [model.y_mean, *model.x_mean]
            lines.append("centering_means=" + " ".join(repr(float(m)) for m in means))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> LinearModel:
    """Inverse of `save_model`."""
    fields: dict[str, str] = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        if "=" not in line:
            raise ModelFormatError(f"{path}:{line_no}: expected key=value")
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    try:
        kind = ModelKind(fields["kind"])
        dim = int(fields["dim"])
        intercept = float(fields["intercept"])
        coef_text = fields["coefficients"]
        coefficients = (
            np.array([float(v) for v in coef_text.split()]) if coef_text else np.zeros(0)
        )
    except (KeyError, ValueError) as exc:
        raise ModelFormatError(f"{path}: {exc}") from exc
    if coefficients.shape[0] != dim:
        raise ModelFormatError(f"{path}: dim={dim} but {coefficients.shape[0]} coefficients")
    n_components = int(fields["n_components"]) if "n_components" in fields else None
    x_mean = None
    y_mean = None
    if "centering_means" in fields:
        means = np.array([float(v) for v in fields["centering_means"].split()])
        if means.shape[0] != dim + 1:
            raise ModelFormatError(f"{path}: centering_means must hold {dim + 1} values")
        y_mean = float(means[0])
        x_mean = means[1:]
    return LinearModel(kind, intercept, coefficients, n_components, x_mean, y_mean)
