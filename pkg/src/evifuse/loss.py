"""Reciprocal loss on Dirichlet concentrations, with analytic gradients.

For a one-hot label y the loss splits into a positive-class term
sum_k y_k * (psi(alpha0) - psi(alpha_k)) - which equals the expected
cross-entropy under the Dirichlet (its Bayes risk), pushing evidence for
the true class up - and a negative-class term
sum_k (1 - y_k) / (psi(alpha0) - psi(alpha_k)), the reciprocal of the
same gap, pushing evidence for the other classes down. Every gap
psi(alpha0) - psi(alpha_k) is strictly positive because alpha0 exceeds
alpha_k by at least K - 1 >= 1 when all alphas are >= 1.

The two-view training objective sums the per-view losses and the loss of
their fused concentration. Batch reduction is the mean over samples so
step sizes do not depend on batch size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import digamma, trigamma
from .opinion import DirichletParams


@dataclass(frozen=True)
class LossBreakdown:
    positive: float
    negative: float
    total: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total", self.positive + self.negative)


def one_hot(label: int, num_classes: int) -> np.ndarray:
    """One-hot float vector for a class index."""
    if not 0 <= label < num_classes:
        raise ValueError(f"label {label} out of range for {num_classes} classes")
    y = np.zeros(num_classes)
    y[label] = 1.0
    return y


def _check_label(y, num_classes: int) -> np.ndarray:
    arr = np.asarray(y, dtype=np.float64)
    if arr.shape != (num_classes,):
        raise ValueError(f"label shape {arr.shape} does not match {num_classes} classes")
    if not np.all((arr == 0.0) | (arr == 1.0)) or arr.sum() != 1.0:
        raise ValueError("label must be one-hot: entries in {0,1} with exactly one 1")
    return arr


def _gaps(d: DirichletParams) -> np.ndarray:
    gaps = digamma(d.alpha0) - digamma(d.alpha)
    assert gaps.min() > 0.0
    return gaps


def reciprocal_loss(d: DirichletParams, y) -> LossBreakdown:
    """Positive and negative class terms for one sample."""
    yv = _check_label(y, d.num_classes)
    gaps = _gaps(d)
    positive = float(np.dot(yv, gaps))
    negative = float(np.dot(1.0 - yv, 1.0 / gaps))
    return LossBreakdown(positive, negative)


def bayes_risk_ce(d: DirichletParams, y) -> float:
    """Expected cross-entropy under the Dirichlet; identical to the positive term."""
    yv = _check_label(y, d.num_classes)
    return float(np.dot(yv, _gaps(d)))


def reciprocal_loss_grad(d: DirichletParams, y) -> np.ndarray:
    """d(total loss)/d(alpha_j), for all j.

    With g_k = psi(alpha0) - psi(alpha_k) and w_k = (1 - y_k) / g_k**2:
    dL/d(alpha_j) = psi'(alpha0) * (1 - sum_k w_k) - psi'(alpha_j) * (y_j - w_j).
    """
    yv = _check_label(y, d.num_classes)
    gaps = _gaps(d)
    w = (1.0 - yv) / (gaps * gaps)
    return trigamma(d.alpha0) * (1.0 - w.sum()) - trigamma(d.alpha) * (yv - w)


def global_loss(d1: DirichletParams, d2: DirichletParams, d_fused: DirichletParams, y) -> float:
    """Sum of both per-view losses and the fused loss for one sample."""
    if not (d1.num_classes == d2.num_classes == d_fused.num_classes):
        raise ValueError("all concentration vectors must share the class count")
    return (
        reciprocal_loss(d1, y).total
        + reciprocal_loss(d2, y).total
        + reciprocal_loss(d_fused, y).total
    )


# Batched internals used by the trainer. alpha is (B, K), labels (B, K) one-hot.


def reciprocal_loss_batch(alpha: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Per-sample loss totals, shape (B,)."""
    alpha0 = alpha.sum(axis=1)
    gaps = digamma(alpha0)[:, None] - digamma(alpha)
    assert gaps.min() > 0.0
    return (labels * gaps).sum(axis=1) + ((1.0 - labels) / gaps).sum(axis=1)


def reciprocal_loss_grad_batch(alpha: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Per-sample d(loss)/d(alpha), shape (B, K)."""
    alpha0 = alpha.sum(axis=1)
    gaps = digamma(alpha0)[:, None] - digamma(alpha)
    assert gaps.min() > 0.0
    w = (1.0 - labels) / (gaps * gaps)
    return (
        trigamma(alpha0)[:, None] * (1.0 - w.sum(axis=1))[:, None]
        - trigamma(alpha) * (labels - w)
    )
