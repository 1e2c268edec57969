"""Per-view classifier heads and their trainers.

A head is feature vector -> affine -> tanh -> affine -> non-negative
activation (softplus by default, relu optional) -> per-class evidence.
The softmax twin shares the architecture but ends in softmax and trains
with cross-entropy; it feeds the fixed baseline fusion rules.

Training is plain minibatch gradient descent (constant or per-epoch
cosine step schedule), end to end for the evidential pair: both heads'
evidence is fused in evidence space, all three concentration vectors
enter the loss, and gradients flow back through the fusion into both
heads. All reverse-mode passes are hand-written.

Random streams (see evifuse.rng): with training seed s, the evidential
pair initializes head A from derive(s, 1), head B from derive(s, 2) and
shuffles minibatches from derive(s, 3); the softmax baselines use
derive(s, 4)/derive(s, 5) for view A and derive(s, 6)/derive(s, 7) for
view B. Parameters are drawn uniformly in [-1/sqrt(fan_in), 1/sqrt(fan_in))
in the order W1 (row-major), b1, W2 (row-major), b2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import rng
from .datagen import Dataset
from .fusion import fuse_evidence_batch, fuse_evidence_batch_grad
from .loss import reciprocal_loss_batch, reciprocal_loss_grad_batch
from .opinion import Evidence

MODEL_FORMAT_VERSION = "evifuse-model-v1"

ACTIVATIONS = ("softplus", "relu")
SCHEDULES = ("constant", "cosine")


@dataclass(frozen=True)
class TrainConfig:
    step_size: float = 0.01
    epochs: int = 200
    batch_size: int = 128
    seed: int = 0
    schedule: str = "cosine"
    hidden_dim: int = 32
    activation: str = "softplus"

    def __post_init__(self):
        if not self.step_size > 0.0:
            raise ValueError("step_size must be > 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.hidden_dim < 1:
            raise ValueError("hidden_dim must be >= 1")
        if self.schedule not in SCHEDULES:
            raise ValueError(f"schedule must be one of {SCHEDULES}, got {self.schedule!r}")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}, got {self.activation!r}")
        object.__setattr__(self, "seed", int(self.seed))

    def to_json_dict(self) -> dict:
        return {
            "step_size": self.step_size,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "seed": self.seed,
            "schedule": self.schedule,
            "hidden_dim": self.hidden_dim,
            "activation": self.activation,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "TrainConfig":
        unknown = set(obj) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown TrainConfig keys: {sorted(unknown)}")
        return cls(**obj)


@dataclass
class EvidenceHead:
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray
    activation: str = "softplus"

    @property
    def shapes(self):
        return self.W1.shape, self.b1.shape, self.W2.shape, self.b2.shape


@dataclass
class SoftmaxHead:
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray


@dataclass(frozen=True)
class HeadGrads:
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray


@dataclass(frozen=True)
class EpochRecord:
    global_loss: float
    view_a_loss: float
    view_b_loss: float
    fused_loss: float
    val_accuracy: float | None


@dataclass(frozen=True)
class TrainedPair:
    head_a: EvidenceHead
    head_b: EvidenceHead
    history: list[EpochRecord]


@dataclass(frozen=True)
class TrainedSoftmax:
    head: SoftmaxHead
    losses: list[float]


def _init_params(stream: rng.Stream, d_in: int, hidden: int, k: int):
    s1 = 1.0 / math.sqrt(d_in)
    s2 = 1.0 / math.sqrt(hidden)
    w1 = (2.0 * stream.uniforms(d_in * hidden) - 1.0).reshape(d_in, hidden) * s1
    b1 = (2.0 * stream.uniforms(hidden) - 1.0) * s1
    w2 = (2.0 * stream.uniforms(hidden * k) - 1.0).reshape(hidden, k) * s2
    b2 = (2.0 * stream.uniforms(k) - 1.0) * s2
    return w1, b1, w2, b2


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _nonneg(z, activation):
    if activation == "softplus":
        return np.logaddexp(0.0, z)
    return np.maximum(z, 0.0)


def _nonneg_deriv(z, activation):
    if activation == "softplus":
        return _sigmoid(z)
    return (z > 0.0).astype(np.float64)


def _affine_forward(head, x):
    z1 = x @ head.W1 + head.b1
    hid = np.tanh(z1)
    z2 = hid @ head.W2 + head.b2
    return z2, (x, hid)


def _affine_backward(head, cache, g_z2) -> HeadGrads:
    x, hid = cache
    g_w2 = hid.T @ g_z2
    g_b2 = g_z2.sum(axis=0)
    g_hid = g_z2 @ head.W2.T
    g_z1 = g_hid * (1.0 - hid * hid)
    g_w1 = x.T @ g_z1
    g_b1 = g_z1.sum(axis=0)
    return HeadGrads(g_w1, g_b1, g_w2, g_b2)


def evidence_batch(head: EvidenceHead, x: np.ndarray) -> np.ndarray:
    """Evidence rows for a batch of feature rows."""
    z2, _ = _affine_forward(head, x)
    return _nonneg(z2, head.activation)


def forward(head: EvidenceHead, x: np.ndarray) -> Evidence:
    """Evidence for a single feature vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (head.W1.shape[0],):
        raise ValueError(f"input shape {x.shape} does not match feature_dim {head.W1.shape[0]}")
    return Evidence(evidence_batch(head, x[None, :])[0])


def backward(head: EvidenceHead, x: np.ndarray, upstream: np.ndarray) -> HeadGrads:
    """Parameter gradients for one sample given dL/d(evidence)."""
    x = np.asarray(x, dtype=np.float64)
    upstream = np.asarray(upstream, dtype=np.float64)
    if x.shape != (head.W1.shape[0],):
        raise ValueError(f"input shape {x.shape} does not match feature_dim {head.W1.shape[0]}")
    if upstream.shape != (head.W2.shape[1],):
        raise ValueError(f"upstream shape {upstream.shape} does not match class count")
    z2, cache = _affine_forward(head, x[None, :])
    g_z2 = upstream[None, :] * _nonneg_deriv(z2, head.activation)
    return _affine_backward(head, cache, g_z2)


def _apply_update(head, grads: HeadGrads, lr: float):
    head.W1 -= lr * grads.W1
    head.b1 -= lr * grads.b1
    head.W2 -= lr * grads.W2
    head.b2 -= lr * grads.b2


def _step_size(cfg: TrainConfig, epoch: int) -> float:
    if cfg.schedule == "constant":
        return cfg.step_size
    return cfg.step_size * 0.5 * (1.0 + math.cos(math.pi * epoch / cfg.epochs))


def _one_hot_rows(labels: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros((labels.size, k))
    out[np.arange(labels.size), labels] = 1.0
    return out


def _check_trainable(ds: Dataset):
    if len(ds) == 0:
        raise ValueError("dataset is empty")
    if np.unique(ds.labels).size < 2:
        raise ValueError("dataset must contain at least 2 classes")
    if ds.subset("train")[2].size == 0:
        raise ValueError("train split is empty")


def global_loss_batch(
    head_a: EvidenceHead, head_b: EvidenceHead, xa: np.ndarray, xb: np.ndarray, labels_1h: np.ndarray
) -> tuple[float, HeadGrads, HeadGrads, tuple[float, float, float]]:
    """Mean two-view global loss over a batch plus gradients for both heads.

    Also returns the (view A, view B, fused) mean loss components.
    """
    batch = xa.shape[0]
    z2_a, cache_a = _affine_forward(head_a, xa)
    z2_b, cache_b = _affine_forward(head_b, xb)
    ev_a = _nonneg(z2_a, head_a.activation)
    ev_b = _nonneg(z2_b, head_b.activation)
    ev_f = fuse_evidence_batch(ev_a, ev_b)
    alpha_a, alpha_b, alpha_f = ev_a + 1.0, ev_b + 1.0, ev_f + 1.0

    loss_a = reciprocal_loss_batch(alpha_a, labels_1h).mean()
    loss_b = reciprocal_loss_batch(alpha_b, labels_1h).mean()
    loss_f = reciprocal_loss_batch(alpha_f, labels_1h).mean()

    g_alpha_a = reciprocal_loss_grad_batch(alpha_a, labels_1h) / batch
    g_alpha_b = reciprocal_loss_grad_batch(alpha_b, labels_1h) / batch
    g_alpha_f = reciprocal_loss_grad_batch(alpha_f, labels_1h) / batch
    g_from_fused_a, g_from_fused_b = fuse_evidence_batch_grad(ev_a, ev_b, g_alpha_f)

    g_ev_a = g_alpha_a + g_from_fused_a
    g_ev_b = g_alpha_b + g_from_fused_b
    grads_a = _affine_backward(head_a, cache_a, g_ev_a * _nonneg_deriv(z2_a, head_a.activation))
    grads_b = _affine_backward(head_b, cache_b, g_ev_b * _nonneg_deriv(z2_b, head_b.activation))
    total = float(loss_a + loss_b + loss_f)
    return total, grads_a, grads_b, (float(loss_a), float(loss_b), float(loss_f))


def predict_fused(head_a: EvidenceHead, head_b: EvidenceHead, xa, xb) -> np.ndarray:
    """Fused predicted class per row (argmax of fused evidence)."""
    ev_f = fuse_evidence_batch(evidence_batch(head_a, xa), evidence_batch(head_b, xb))
    return np.argmax(ev_f, axis=1)


def train_pair(data: Dataset, cfg: TrainConfig) -> TrainedPair:
    """Train both evidence heads end to end through the fusion."""
    _check_trainable(data)
    k = data.num_classes
    d = data.gen_config.feature_dim
    xa, xb, labels, _ = data.subset("train")
    labels_1h = _one_hot_rows(labels, k)
    val_xa, val_xb, val_labels, _ = data.subset("val")

    head_a = EvidenceHead(*_init_params(rng.Stream(rng.derive(cfg.seed, 1)), d, cfg.hidden_dim, k), cfg.activation)
    head_b = EvidenceHead(*_init_params(rng.Stream(rng.derive(cfg.seed, 2)), d, cfg.hidden_dim, k), cfg.activation)
    shuffle = rng.Stream(rng.derive(cfg.seed, 3))

    n = labels.size
    history: list[EpochRecord] = []
    for epoch in range(cfg.epochs):
        lr = _step_size(cfg, epoch)
        perm = shuffle.shuffle(n)
        sums = np.zeros(4)
        for lo in range(0, n, cfg.batch_size):
            idx = perm[lo : lo + cfg.batch_size]
            total, grads_a, grads_b, parts = global_loss_batch(
                head_a, head_b, xa[idx], xb[idx], labels_1h[idx]
            )
            _apply_update(head_a, grads_a, lr)
            _apply_update(head_b, grads_b, lr)
            sums += idx.size * np.array([total, *parts])
        sums /= n
        if val_labels.size:
            val_acc = float(
                (predict_fused(head_a, head_b, val_xa, val_xb) == val_labels).mean()
            )
        else:
            val_acc = None
        history.append(EpochRecord(sums[0], sums[1], sums[2], sums[3], val_acc))
    return TrainedPair(head_a, head_b, history)


def softmax_probs(head: SoftmaxHead, x: np.ndarray) -> np.ndarray:
    """Class probability rows."""
    z2, _ = _affine_forward(head, x)
    z2 = z2 - z2.max(axis=1, keepdims=True)
    ez = np.exp(z2)
    return ez / ez.sum(axis=1, keepdims=True)


def train_softmax_baseline(data: Dataset, cfg: TrainConfig, view: str) -> TrainedSoftmax:
    """Train the softmax twin with cross-entropy on one view ('a' or 'b')."""
    if view not in ("a", "b"):
        raise ValueError(f"view must be 'a' or 'b', got {view!r}")
    _check_trainable(data)
    k = data.num_classes
    d = data.gen_config.feature_dim
    xa, xb, labels, _ = data.subset("train")
    x = xa if view == "a" else xb
    labels_1h = _one_hot_rows(labels, k)
    init_label, shuffle_label = (4, 5) if view == "a" else (6, 7)
    head = SoftmaxHead(*_init_params(rng.Stream(rng.derive(cfg.seed, init_label)), d, cfg.hidden_dim, k))
    shuffle = rng.Stream(rng.derive(cfg.seed, shuffle_label))

    n = labels.size
    losses: list[float] = []
    for epoch in range(cfg.epochs):
        lr = _step_size(cfg, epoch)
        perm = shuffle.shuffle(n)
        loss_sum = 0.0
        for lo in range(0, n, cfg.batch_size):
            idx = perm[lo : lo + cfg.batch_size]
            z2, cache = _affine_forward(head, x[idx])
            z2s = z2 - z2.max(axis=1, keepdims=True)
            log_probs = z2s - np.log(np.exp(z2s).sum(axis=1, keepdims=True))
            loss_sum += float(-(labels_1h[idx] * log_probs).sum())
            g_z2 = (np.exp(log_probs) - labels_1h[idx]) / idx.size
            _apply_update(head, _affine_backward(head, cache, g_z2), lr)
        losses.append(loss_sum / n)
    return TrainedSoftmax(head, losses)


def _head_to_dict(head, kind: str) -> dict:
    d, h = head.W1.shape
    k = head.W2.shape[1]
    out = {
        "version": MODEL_FORMAT_VERSION,
        "kind": kind,
        "feature_dim": d,
        "hidden_dim": h,
        "num_classes": k,
        "W1": head.W1.ravel().tolist(),
        "b1": head.b1.tolist(),
        "W2": head.W2.ravel().tolist(),
        "b2": head.b2.tolist(),
    }
    if kind == "evidence":
        out["activation"] = head.activation
    return out


def save_model(head: EvidenceHead | SoftmaxHead, path: str | Path) -> None:
    """Write head parameters as versioned JSON (row-major arrays)."""
    kind = "evidence" if isinstance(head, EvidenceHead) else "softmax"
    with open(path, "w") as fh:
        json.dump(_head_to_dict(head, kind), fh, sort_keys=True)
        fh.write("\n")


def load_model(path: str | Path) -> EvidenceHead | SoftmaxHead:
    with open(path) as fh:
        obj = json.load(fh)
    if obj.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model version {obj.get('version')!r}")
    d, h, k = obj["feature_dim"], obj["hidden_dim"], obj["num_classes"]
    params = (
        np.asarray(obj["W1"], dtype=np.float64).reshape(d, h),
        np.asarray(obj["b1"], dtype=np.float64),
        np.asarray(obj["W2"], dtype=np.float64).reshape(h, k),
        np.asarray(obj["b2"], dtype=np.float64),
    )
    if obj["kind"] == "evidence":
        return EvidenceHead(*params, obj["activation"])
    if obj["kind"] == "softmax":
        return SoftmaxHead(*params)
    raise ValueError(f"unknown model kind {obj['kind']!r}")
