"""Evidence / opinion / Dirichlet conversions.

A classifier head emits a non-negative per-class evidence vector e. The
matching "opinion" splits unit mass between per-class credibility
c_k = e_k / sum_j(e_j + 1) and a residual uncertainty u = K / sum_j(e_j + 1),
so u + sum_k c_k = 1 always. The same evidence also parameterizes a
Dirichlet distribution over class probabilities via alpha_k = e_k + 1;
credibility and uncertainty can be read back from alpha. Zero evidence is
total ignorance: c = 0, u = 1.

All types are immutable and all operations pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import log_multivariate_beta

# Single global tolerance for "sums to one" membership checks.
SIMPLEX_ATOL = 1e-9


def _freeze(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Evidence:
    """Non-negative per-class evidence for one sample, K >= 2."""

    values: np.ndarray

    def __post_init__(self):
        arr = _freeze(self.values, "evidence")
        if arr.size < 2:
            raise ValueError(f"evidence needs at least 2 classes, got {arr.size}")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
            raise ValueError("evidence entries must be finite and >= 0")
        object.__setattr__(self, "values", arr)

    @property
    def num_classes(self) -> int:
        return self.values.size

    def predicted_class(self) -> int:
        """Index of the largest evidence; ties break to the lowest index."""
        return int(np.argmax(self.values))

    def to_json_dict(self) -> dict:
        return {"evidence": self.values.tolist()}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Evidence":
        return cls(np.asarray(obj["evidence"], dtype=np.float64))


@dataclass(frozen=True)
class Opinion:
    """Credibility per class plus residual uncertainty, summing to one."""

    credibility: np.ndarray
    uncertainty: float

    def __post_init__(self):
        c = _freeze(self.credibility, "credibility")
        u = float(self.uncertainty)
        if c.size < 2:
            raise ValueError(f"opinion needs at least 2 classes, got {c.size}")
        if not np.all(np.isfinite(c)) or np.any(c < 0.0):
            raise ValueError("credibility entries must be finite and >= 0")
        if not np.isfinite(u) or u <= 0.0 or u > 1.0:
            raise ValueError(f"uncertainty must lie in (0, 1], got {u!r}")
        if abs(u + c.sum() - 1.0) > SIMPLEX_ATOL:
            raise ValueError(
                f"uncertainty + sum(credibility) = {u + c.sum()!r}, expected 1 within {SIMPLEX_ATOL}"
            )
        object.__setattr__(self, "credibility", c)
        object.__setattr__(self, "uncertainty", u)

    @property
    def num_classes(self) -> int:
        return self.credibility.size

    def predicted_class(self) -> int:
        return int(np.argmax(self.credibility))

    def to_json_dict(self) -> dict:
        return {"credibility": self.credibility.tolist(), "uncertainty": self.uncertainty}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Opinion":
        return cls(np.asarray(obj["credibility"], dtype=np.float64), float(obj["uncertainty"]))


@dataclass(frozen=True)
class DirichletParams:
    """Dirichlet concentration vector with every alpha_k >= 1."""

    alpha: np.ndarray
    alpha0: float = field(init=False)

    def __post_init__(self):
        a = _freeze(self.alpha, "alpha")
        if a.size < 2:
            raise ValueError(f"alpha needs at least 2 classes, got {a.size}")
        if not np.all(np.isfinite(a)) or np.any(a < 1.0 - 1e-12):
            raise ValueError("alpha entries must be finite and >= 1")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "alpha0", float(a.sum()))

    @property
    def num_classes(self) -> int:
        return self.alpha.size


@dataclass(frozen=True)
class SimplexPoint:
    """A point of the probability simplex (entries in [0,1], summing to one)."""

    probs: np.ndarray

    def __post_init__(self):
        p = _freeze(self.probs, "probs")
        if p.size < 2:
            raise ValueError(f"simplex point needs at least 2 classes, got {p.size}")
        if not np.all(np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0):
            raise ValueError("probabilities must be finite and in [0, 1]")
        if abs(p.sum() - 1.0) > SIMPLEX_ATOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}, expected 1 within {SIMPLEX_ATOL}")
        object.__setattr__(self, "probs", p)


def evidence_to_opinion(e: Evidence) -> Opinion:
    """c_k = e_k / sum(e_j + 1), u = K / sum(e_j + 1)."""
    total = float(e.values.sum()) + e.num_classes
    return Opinion(e.values / total, e.num_classes / total)


def evidence_to_dirichlet(e: Evidence) -> DirichletParams:
    """alpha_k = e_k + 1."""
    return DirichletParams(e.values + 1.0)


def dirichlet_to_opinion(d: DirichletParams) -> Opinion:
    """c_k = (alpha_k - 1) / alpha0, u = K / alpha0."""
    return Opinion((d.alpha - 1.0) / d.alpha0, d.num_classes / d.alpha0)


def opinion_to_evidence(o: Opinion) -> Evidence:
    """e_k = K * c_k / u; exact inverse of evidence_to_opinion."""
    if o.uncertainty <= 0.0:
        raise ValueError("cannot recover evidence from an opinion with u <= 0")
    return Evidence(o.num_classes * o.credibility / o.uncertainty)


def dirichlet_log_density(d: DirichletParams, p: SimplexPoint) -> float:
    """Log density of the Dirichlet at a simplex point.

    Returns -inf when some p_k = 0 with alpha_k > 1 (density vanishes
    there); a zero p_k with alpha_k = 1 contributes nothing.
    """
    if p.probs.size != d.num_classes:
        raise ValueError(
            f"dimension mismatch: alpha has {d.num_classes} classes, point has {p.probs.size}"
        )
    expo = d.alpha - 1.0
    zero = p.probs == 0.0
    if np.any(zero & (expo > 0.0)):
        return float("-inf")
    with np.errstate(divide="ignore"):
        logp = np.where(zero, 0.0, np.log(np.where(zero, 1.0, p.probs)))
    return float(-log_multivariate_beta(d.alpha) + np.dot(expo, logp))
