"""Decision-level fusion of two views.

The evidential rule combines two opinions so that each view's say is
scaled by certainty: class k collects c_k1*c_k2 + (1-u1)*c_k1 +
(1-u2)*c_k2, the joint ignorance keeps u1*u2, and everything is divided
by the scale factor lambda (the sum of all those masses) so the result is
again a valid opinion. A view whose uncertainty is high therefore
contributes little besides its ignorance; a vacuous partner leaves the
other view's ranking untouched.

Fixed softmax-probability combination rules (sum / product / elementwise
max / elementwise min, each followed by argmax) are provided as
baselines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .opinion import SIMPLEX_ATOL, Evidence, Opinion, opinion_to_evidence

BASELINE_RULES = ("sum", "product", "max", "min")


@dataclass(frozen=True)
class FusedDecision:
    """Fused opinion, the evidence it maps back to, and the argmax label."""

    opinion: Opinion
    evidence: Evidence
    predicted_class: int


def fuse_opinions(o1: Opinion, o2: Opinion) -> FusedDecision:
    """Fuse two opinions over the same K classes (symmetric in its arguments).

    lambda is accumulated as u1*u2 plus the sum of the per-class
    numerators, which makes the fused masses sum to one by construction.
    """
    if o1.num_classes != o2.num_classes:
        raise ValueError(
            f"dimension mismatch: {o1.num_classes} vs {o2.num_classes} classes"
        )
    c1, u1 = o1.credibility, o1.uncertainty
    c2, u2 = o2.credibility, o2.uncertainty
    num = c1 * c2 + (1.0 - u1) * c1 + (1.0 - u2) * c2
    lam = u1 * u2 + num.sum()
    fused = Opinion(num / lam, u1 * u2 / lam)
    return FusedDecision(fused, opinion_to_evidence(fused), fused.predicted_class())


def fuse_sequence(opinions: list[Opinion]) -> FusedDecision:
    """Left fold of fuse_opinions over 2+ opinions.

    Convenience only: the two-view rule is not associative, so the result
    of chaining depends on order beyond the first pair.
    """
    if len(opinions) < 2:
        raise ValueError("fuse_sequence needs at least two opinions")
    acc = fuse_opinions(opinions[0], opinions[1])
    for o in opinions[2:]:
        acc = fuse_opinions(acc.opinion, o)
    return acc


def fuse_evidence_batch(e1: np.ndarray, e2: np.ndarray) -> np.ndarray:
    """Fused evidence for batches of evidence rows, shape (B, K).

    Same value as converting each row to an opinion, fusing, and mapping
    back to evidence: the normalizer cancels, leaving
    (e1*e2 + (S2/S1)*E1*e1 + (S1/S2)*E2*e2) / K with E the row sums and
    S = E + K. Used by the trainer, where this route is differentiated.
    """
    n_classes = e1.shape[1]
    tot1 = e1.sum(axis=1, keepdims=True)
    tot2 = e2.sum(axis=1, keepdims=True)
    s1 = tot1 + n_classes
    s2 = tot2 + n_classes
    return (e1 * e2 + (s2 / s1) * tot1 * e1 + (s1 / s2) * tot2 * e2) / n_classes


def fuse_evidence_batch_grad(
    e1: np.ndarray, e2: np.ndarray, upstream: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Backward pass of fuse_evidence_batch.

    upstream is dL/d(fused evidence), shape (B, K); returns (dL/de1, dL/de2).
    The Jacobian is diagonal plus a rank-one row correction, so each side
    is an elementwise product plus a per-row constant.
    """
    n_classes = e1.shape[1]
    tot1 = e1.sum(axis=1, keepdims=True)
    tot2 = e2.sum(axis=1, keepdims=True)
    s1 = tot1 + n_classes
    s2 = tot2 + n_classes
    a = s2 / s1
    b = s1 / s2
    ge1 = (upstream * e1).sum(axis=1, keepdims=True)
    ge2 = (upstream * e2).sum(axis=1, keepdims=True)
    const1 = (a * n_classes * ge1 + b * tot2 * ge2) / (n_classes * s1)
    const2 = (b * n_classes * ge2 + a * tot1 * ge1) / (n_classes * s2)
    g1 = upstream * (e2 + a * tot1) / n_classes + const1
    g2 = upstream * (e1 + b * tot2) / n_classes + const2
    return g1, g2


def _check_prob_vector(p, name: str) -> np.ndarray:
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 2:
        raise ValueError(f"{name} must be a probability vector of length >= 2")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError(f"{name} entries must be finite and in [0, 1]")
    if abs(arr.sum() - 1.0) > SIMPLEX_ATOL:
        raise ValueError(f"{name} sums to {arr.sum()!r}, expected 1 within {SIMPLEX_ATOL}")
    return arr


def fuse_baseline(p1, p2, rule: str, elementwise: bool = True) -> int:
    """Combine two per-view probability vectors with a fixed rule; return argmax.

    sum and product combine elementwise and take the argmax. For max/min
    the default reading is also elementwise; with elementwise=False they
    instead select the whole prediction of the view whose top probability
    is larger (max) or smaller (min). Ties break to the lowest index
    (and to view 1 in the view-picking variant).
    """
    a = _check_prob_vector(p1, "p1")
    b = _check_prob_vector(p2, "p2")
    if a.size != b.size:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size} classes")
    if rule not in BASELINE_RULES:
        raise ValueError(f"unknown rule {rule!r}, expected one of {BASELINE_RULES}")
    if rule == "sum":
        fused = a + b
    elif rule == "product":
        fused = a * b
    elif not elementwise:
        if rule == "max":
            fused = a if a.max() >= b.max() else b
        else:
            fused = a if a.max() <= b.max() else b
    elif rule == "max":
        fused = np.maximum(a, b)
    else:
        fused = np.minimum(a, b)
    return int(np.argmax(fused))
