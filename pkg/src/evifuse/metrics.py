"""Evaluation metrics and uncertainty summaries.

Macro-F1 averages per-class F1 over all classes of the label universe;
a class with no predictions and no instances contributes 0. Uncertainty
histograms use 20 right-closed bins over (0, 1]; "credible" samples are
those at or below an uncertainty threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HISTOGRAM_BINS = 20


def accuracy_and_macro_f1(preds, labels, num_classes: int | None = None) -> tuple[float, float]:
    """(accuracy, macro-F1) for integer class predictions."""
    p = np.asarray(preds, dtype=np.int64)
    t = np.asarray(labels, dtype=np.int64)
    if p.shape != t.shape or p.ndim != 1:
        raise ValueError(f"shape mismatch: preds {p.shape} vs labels {t.shape}")
    if p.size == 0:
        raise ValueError("empty input")
    k = int(max(p.max(), t.max())) + 1 if num_classes is None else num_classes
    accuracy = float((p == t).mean())
    f1s = np.zeros(k)
    for c in range(k):
        tp = np.sum((p == c) & (t == c))
        denom = np.sum(p == c) + np.sum(t == c)
        if denom > 0:
            f1s[c] = 2.0 * tp / denom
    return accuracy, float(f1s.mean())


def credible_count(us, labels, threshold: float, num_classes: int | None = None) -> np.ndarray:
    """Per-class count of samples with uncertainty <= threshold."""
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must lie in (0, 1], got {threshold!r}")
    u = np.asarray(us, dtype=np.float64)
    t = np.asarray(labels, dtype=np.int64)
    if u.shape != t.shape or u.ndim != 1:
        raise ValueError(f"shape mismatch: us {u.shape} vs labels {t.shape}")
    k = int(t.max()) + 1 if num_classes is None else num_classes
    return np.bincount(t[u <= threshold], minlength=k)[:k]


def average_relative_error(n, m) -> float:
    """Mean of |n_k - m_k| / m_k over classes; every m_k must be positive."""
    nv = np.asarray(n, dtype=np.float64)
    mv = np.asarray(m, dtype=np.float64)
    if nv.shape != mv.shape or nv.ndim != 1 or nv.size == 0:
        raise ValueError(f"shape mismatch: {nv.shape} vs {mv.shape}")
    if np.any(mv <= 0.0):
        raise ValueError("reference counts must all be positive")
    return float(np.mean(np.abs(nv - mv) / mv))


def uncertainty_histogram(us) -> np.ndarray:
    """Counts over 20 right-closed bins ((i-1)/20, i/20]; u=0 lands in bin 0."""
    u = np.asarray(us, dtype=np.float64)
    if np.any(u < 0.0) or np.any(u > 1.0):
        raise ValueError("uncertainty values must lie in [0, 1]")
    idx = np.clip(np.ceil(u * HISTOGRAM_BINS).astype(np.int64) - 1, 0, HISTOGRAM_BINS - 1)
    return np.bincount(idx, minlength=HISTOGRAM_BINS)


@dataclass(frozen=True)
class EvalReport:
    """Metrics of one prediction set plus its uncertainty summaries.

    mean_u_degraded / mean_u_clean are None when the corresponding group
    is empty.
    """

    accuracy: float
    macro_f1: float
    mean_u: float
    mean_u_degraded: float | None
    mean_u_clean: float | None
    credible_counts: np.ndarray
    histogram: np.ndarray

    def to_json_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "mean_u": self.mean_u,
            "mean_u_degraded": self.mean_u_degraded,
            "mean_u_clean": self.mean_u_clean,
            "credible_counts": self.credible_counts.tolist(),
            "histogram": self.histogram.tolist(),
        }


def build_eval_report(
    preds, labels, us, degraded, threshold: float, num_classes: int
) -> EvalReport:
    """Assemble an EvalReport from per-sample arrays."""
    u = np.asarray(us, dtype=np.float64)
    flag = np.asarray(degraded, dtype=bool)
    accuracy, macro_f1 = accuracy_and_macro_f1(preds, labels, num_classes)
    return EvalReport(
        accuracy=accuracy,
        macro_f1=macro_f1,
        mean_u=float(u.mean()),
        mean_u_degraded=float(u[flag].mean()) if flag.any() else None,
        mean_u_clean=float(u[~flag].mean()) if (~flag).any() else None,
        credible_counts=credible_count(u, labels, threshold, num_classes),
        histogram=uncertainty_histogram(u),
    )
