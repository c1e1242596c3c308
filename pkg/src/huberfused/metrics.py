"""Estimation, prediction and classification metrics."""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields

import numpy as np

__all__ = [
    "MetricsReport",
    "rlne",
    "mae",
    "mse",
    "residuals",
    "classification_metrics",
    "evaluate",
]


@dataclass(frozen=True)
class MetricsReport:
    rlne: float
    mae: float
    mse: float
    iterations: int
    wall_time: float
    rel_err_final: float

    @staticmethod
    def header():
        return [f.name for f in fields(MetricsReport)]

    def to_row(self):
        return list(astuple(self))


def rlne(beta_hat, beta_star):
    """Relative l2 estimation error ``||beta_hat - beta*|| / ||beta*||``."""
    beta_star = np.asarray(beta_star, dtype=float)
    denom = np.linalg.norm(beta_star)
    if denom == 0:
        raise ZeroDivisionError("RLNE is undefined for a zero true coefficient vector")
    return float(np.linalg.norm(np.asarray(beta_hat, dtype=float) - beta_star) / denom)


def residuals(problem, beta_hat):
    return problem.y - problem.X @ np.asarray(beta_hat, dtype=float)


def mae(problem, beta_hat):
    return float(np.mean(np.abs(residuals(problem, beta_hat))))


def mse(problem, beta_hat):
    r = residuals(problem, beta_hat)
    return float(np.mean(r * r))


def classification_metrics(y_true, scores, threshold=0.5):
    """Accuracy and recall of the rule ``score >= threshold``.

    Label 1 is the positive class.  Recall is ``nan`` when there are no
    positive samples; accuracy is still reported.
    """
    y_true = np.asarray(y_true)
    scores = np.asarray(scores, dtype=float)
    if y_true.shape != scores.shape:
        raise ValueError("y_true and scores must have the same length")
    if y_true.size == 0:
        raise ValueError("no samples")
    if not np.all(np.isin(y_true, (0, 1))):
        raise ValueError("labels must be coded 0/1")
    pred = scores >= threshold
    actual = y_true == 1
    accuracy = float(np.mean(pred == actual))
    n_pos = int(actual.sum())
    recall = float(np.sum(pred & actual) / n_pos) if n_pos else float("nan")
    return accuracy, recall


def evaluate(problem, fit, beta_star=None) -> MetricsReport:
    """Collect the standard metrics of a finished fit."""
    return MetricsReport(
        rlne=rlne(fit.beta_hat, beta_star) if beta_star is not None else float("nan"),
        mae=mae(problem, fit.beta_hat),
        mse=mse(problem, fit.beta_hat),
        iterations=fit.iterations,
        wall_time=fit.wall_time,
        rel_err_final=fit.rel_err_final,
    )
