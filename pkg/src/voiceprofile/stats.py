"""Paired t-test, Student-t tail probabilities, and empirical CDFs.

The t-test compares two aligned per-utterance absolute-error sequences
(model A vs model B on the same test utterances). Its p-value comes from
`student_t_sf`, which evaluates the regularized incomplete beta function
with a continued fraction rather than an approximation, so p-values stay
accurate far into the tail (the regime that matters when errors differ
significantly).

All functions are pure; nothing here holds state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    EmptyInputError,
    InvalidDfError,
    LengthMismatchError,
    NegativeValueError,
    NonFiniteInputError,
    TooFewPairsError,
)

_CF_MAX_ITER = 300
_CF_EPS = 1e-15
_CF_FPMIN = 1e-300


@dataclass(frozen=True)
class PairedTTestResult:
    t_statistic: float
    degrees_of_freedom: int
    p_value_two_tailed: float
    mean_difference: float
    n_pairs: int
    zero_variance: bool = False


@dataclass(frozen=True, eq=False)
class EcdfCurve:
    sorted_values: np.ndarray  # nondecreasing absolute errors, cm
    cumulative_probs: np.ndarray  # (0, 1], nondecreasing, last == 1.0


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz).

    Converges quickly for x < (a+1)/(a+b+2); callers apply the symmetry
    switch before getting here.
    """
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_FPMIN:
        d = _CF_FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_FPMIN:
            d = _CF_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _CF_FPMIN:
            c = _CF_FPMIN
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_FPMIN:
            d = _CF_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _CF_FPMIN:
            c = _CF_FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    return h


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1].

    Uses the continued fraction directly when x < (a+1)/(a+b+2) and the
    symmetry I_x(a,b) = 1 - I_{1-x}(b,a) otherwise, which keeps the
    fraction in its fast-converging regime.
    """
    if a <= 0 or b <= 0:
        raise ValueError(f"a and b must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def student_t_sf(t: float, df: int) -> float:
    """Upper-tail probability P(T > t) of the Student-t distribution.

    For t >= 0 this is I_x(df/2, 1/2) / 2 with x = df / (df + t^2); the
    negative tail follows from symmetry. Two-tailed p-values are
    2 * student_t_sf(abs(t), df).
    """
    if df < 1:
        raise InvalidDfError(df)
    if not math.isfinite(t):
        raise NonFiniteInputError("t statistic")
    x = df / (df + t * t)
    half_tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x)
    return half_tail if t >= 0 else 1.0 - half_tail


def paired_t_test(errors_a, errors_b) -> PairedTTestResult:
    """Paired t-test of per-utterance errors, pairs aligned by position.

    d_i = a_i - b_i, t = mean(d) / (sd(d) / sqrt(n)) with the sample
    standard deviation (divisor n-1), and a two-tailed p-value with n-1
    degrees of freedom.

    Two degenerate inputs are handled without raising: identical lists
    give (t=0, p=1), and lists whose differences are all equal but
    nonzero give p=0 with the `zero_variance` flag set (t is +-inf there,
    the only case where t is not finite).
    """
    a = np.asarray(errors_a, dtype=float)
    b = np.asarray(errors_b, dtype=float)
    if a.ndim != 1 or b.ndim != 1:
        raise ValueError("error sequences must be one-dimensional")
    if a.shape[0] != b.shape[0]:
        raise LengthMismatchError(a.shape[0], b.shape[0])
    n = int(a.shape[0])
    if n < 2:
        raise TooFewPairsError(n)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise NonFiniteInputError("error values")
    d = a - b
    df = n - 1
    mean_d = float(d.mean())
    if np.all(d == 0.0):
        return PairedTTestResult(0.0, df, 1.0, 0.0, n)
    if np.all(d == d[0]):
        t = math.copysign(math.inf, mean_d)
        return PairedTTestResult(t, df, 0.0, mean_d, n, zero_variance=True)
    sd = float(d.std(ddof=1))
    t = mean_d / (sd / math.sqrt(n))
    p = min(1.0, 2.0 * student_t_sf(abs(t), df))
    return PairedTTestResult(t, df, p, mean_d, n)


def build_ecdf(abs_errors) -> EcdfCurve:
    """Empirical CDF of absolute errors: F(x) = (# values <= x) / n.

    The curve keeps one entry per input value (ties repeat), so the
    stored probabilities are simply (i+1)/n over the sorted values.
    """
    values = np.asarray(abs_errors, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise EmptyInputError("no absolute errors given")
    if not np.all(np.isfinite(values)):
        raise NonFiniteInputError("absolute errors")
    if np.any(values < 0):
        raise NegativeValueError(float(values[values < 0][0]))
    ordered = np.sort(values)
    probs = np.arange(1, ordered.size + 1, dtype=float) / ordered.size
    return EcdfCurve(sorted_values=ordered, cumulative_probs=probs)


def ecdf_at(curve: EcdfCurve, threshold_cm: float) -> float:
    """F(threshold): fraction of errors <= threshold (right-continuous)."""
    idx = int(np.searchsorted(curve.sorted_values, threshold_cm, side="right"))
    if idx == 0:
        return 0.0
    return float(curve.cumulative_probs[idx - 1])


def ecdf_csv_lines(curve: EcdfCurve):
    """Yield `abs_error_cm,cumulative_probability` CSV lines, header first."""
    yield "abs_error_cm,cumulative_probability\n"
    for value, prob in zip(curve.sorted_values, curve.cumulative_probs):
        yield f"{float(value)!r},{float(prob)!r}\n"


def write_ecdf_csv(curve: EcdfCurve, path: str | Path) -> None:
    """Export the curve's CSV rows in sorted order."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(ecdf_csv_lines(curve))
