"""Synthetic paired-view datasets.

Each class gets a prototype vertex of a regular simplex with unit edge
length, centered at the origin and embedded in the first K feature
coordinates. View A uses the prototypes contracted toward their centroid
by `overlap_a` (0 = fully separated, 1 = collapsed), making classes
harder to tell apart; view B uses the uncontracted prototypes but each
sample is, with probability `junk_rate_b`, replaced by class-independent
zero-mean noise at three times the nominal sigma and flagged as
degraded. Samples are prototype + isotropic Gaussian noise.

Counter layout (stream = the package RNG keyed directly by cfg.seed; see
evifuse.rng for the word-level spec), with n = num_samples and
D = feature_dim:

* words [0, n):           label uniforms, inverted through the class-weight CDF
* words [n, 2n):          split uniforms (< .72 train, < .80 val, else test)
* words [2n, 3n):         junk uniforms (< junk_rate_b marks view B degraded)
* words [3n, 3n+w):       view A noise, n*D normals row-major, w = 2*ceil(n*D/2)
* words [3n+w, 3n+2w):    view B noise, same shape

Given the same config the generated arrays are bit-identical.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import rng

SPLIT_NAMES = ("train", "val", "test")
_SPLIT_FRACTIONS = (0.72, 0.08, 0.20)


def long_tail_weights(num_classes: int, ratio: float) -> np.ndarray:
    """Geometrically decaying class weights with head/tail ratio `ratio`."""
    if num_classes < 2:
        raise ValueError("long_tail_weights needs at least 2 classes")
    if not ratio > 1.0:
        raise ValueError(f"ratio must exceed 1, got {ratio!r}")
    w = ratio ** (-np.arange(num_classes) / (num_classes - 1))
    return w / w.sum()


@dataclass(frozen=True)
class GenConfig:
    num_classes: int
    feature_dim: int
    num_samples: int
    overlap_a: float = 0.0
    junk_rate_b: float = 0.0
    class_weights: np.ndarray | None = None
    noise_sigma: float = 0.25
    seed: int = 0

    def __post_init__(self):
        if self.num_classes < 2:
            raise ValueError("num_classes must be >= 2")
        if self.feature_dim < self.num_classes:
            raise ValueError(
                "feature_dim must be >= num_classes (prototypes use the first "
                f"{self.num_classes} coordinates)"
            )
        if self.num_samples < 1:
            raise ValueError("num_samples must be >= 1")
        for name in ("overlap_a", "junk_rate_b"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
        if not self.noise_sigma > 0.0:
            raise ValueError("noise_sigma must be > 0")
        if self.class_weights is None:
            w = np.full(self.num_classes, 1.0 / self.num_classes)
        else:
            w = np.asarray(self.class_weights, dtype=np.float64)
            if w.shape != (self.num_classes,) or np.any(w <= 0.0) or not np.all(np.isfinite(w)):
                raise ValueError("class_weights must be num_classes positive reals")
            w = w / w.sum()
        w.flags.writeable = False
        object.__setattr__(self, "class_weights", w)
        object.__setattr__(self, "seed", int(self.seed))

    def to_json_dict(self) -> dict:
        return {
            "num_classes": self.num_classes,
            "feature_dim": self.feature_dim,
            "num_samples": self.num_samples,
            "overlap_a": self.overlap_a,
            "junk_rate_b": self.junk_rate_b,
            "class_weights": self.class_weights.tolist(),
            "noise_sigma": self.noise_sigma,
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "GenConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown GenConfig keys: {sorted(unknown)}")
        kwargs = dict(obj)
        if kwargs.get("class_weights") is not None:
            kwargs["class_weights"] = np.asarray(kwargs["class_weights"], dtype=np.float64)
        return cls(**kwargs)


@dataclass(frozen=True)
class PairedSample:
    x_a: np.ndarray
    x_b: np.ndarray
    label: int
    degraded_b: bool


@dataclass(frozen=True)
class Dataset:
    x_a: np.ndarray
    x_b: np.ndarray
    labels: np.ndarray
    degraded_b: np.ndarray
    split: np.ndarray  # int8 index into SPLIT_NAMES
    gen_config: GenConfig
    _by_split: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "_by_split",
            {name: np.flatnonzero(self.split == i) for i, name in enumerate(SPLIT_NAMES)},
        )

    def __len__(self) -> int:
        return self.labels.size

    @property
    def num_classes(self) -> int:
        return self.gen_config.num_classes

    def subset(self, split_name: str):
        """(x_a, x_b, labels, degraded_b) restricted to one split."""
        idx = self._by_split[split_name]
        return self.x_a[idx], self.x_b[idx], self.labels[idx], self.degraded_b[idx]

    def samples(self) -> list[PairedSample]:
        return [
            PairedSample(self.x_a[i], self.x_b[i], int(self.labels[i]), bool(self.degraded_b[i]))
            for i in range(len(self))
        ]


def class_prototypes(num_classes: int, feature_dim: int) -> np.ndarray:
    """Regular simplex vertices, unit edge, centered, padded to feature_dim."""
    base = (np.eye(num_classes) - 1.0 / num_classes) / np.sqrt(2.0)
    out = np.zeros((num_classes, feature_dim))
    out[:, :num_classes] = base
    return out


def generate(cfg: GenConfig) -> Dataset:
    """Draw a dataset per the documented counter layout; pure in cfg."""
    n, d = cfg.num_samples, cfg.feature_dim
    u_label = rng.uniforms(cfg.seed, 0, n)
    u_split = rng.uniforms(cfg.seed, n, n)
    u_junk = rng.uniforms(cfg.seed, 2 * n, n)
    words_per_view = 2 * ((n * d + 1) // 2)
    z_a = rng.normals(cfg.seed, 3 * n, n * d).reshape(n, d)
    z_b = rng.normals(cfg.seed, 3 * n + words_per_view, n * d).reshape(n, d)

    cdf = np.cumsum(cfg.class_weights)
    labels = np.minimum(
        np.searchsorted(cdf, u_label, side="right"), cfg.num_classes - 1
    ).astype(np.int64)

    split = np.full(n, 2, dtype=np.int8)
    split[u_split < _SPLIT_FRACTIONS[0] + _SPLIT_FRACTIONS[1]] = 1
    split[u_split < _SPLIT_FRACTIONS[0]] = 0

    degraded = u_junk < cfg.junk_rate_b

    proto = class_prototypes(cfg.num_classes, d)
    proto_a = (1.0 - cfg.overlap_a) * proto
    x_a = proto_a[labels] + cfg.noise_sigma * z_a
    x_b = np.where(
        degraded[:, None], 3.0 * cfg.noise_sigma * z_b, proto[labels] + cfg.noise_sigma * z_b
    )

    for arr in (x_a, x_b, labels, degraded, split):
        arr.flags.writeable = False
    return Dataset(x_a, x_b, labels, degraded, split, cfg)


def regenerate(cfg: GenConfig, seed: int) -> Dataset:
    """Same config, fresh seed."""
    return generate(replace(cfg, seed=seed))


def save_dataset(ds: Dataset, out_dir: str | Path) -> tuple[Path, Path]:
    """Write dataset.csv plus the dataset.json config sidecar; returns both paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "dataset.csv"
    d = ds.gen_config.feature_dim
    header = (
        ["split", "label", "degraded_b"]
        + [f"xa_{j}" for j in range(d)]
        + [f"xb_{j}" for j in range(d)]
    )
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(len(ds)):
            writer.writerow(
                [SPLIT_NAMES[ds.split[i]], int(ds.labels[i]), int(ds.degraded_b[i])]
                + [f"{v:.17g}" for v in ds.x_a[i]]
                + [f"{v:.17g}" for v in ds.x_b[i]]
            )
    json_path = out / "dataset.json"
    with open(json_path, "w") as fh:
        json.dump(ds.gen_config.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, json_path


def load_dataset(data_dir: str | Path) -> Dataset:
    """Read back a save_dataset directory."""
    data = Path(data_dir)
    with open(data / "dataset.json") as fh:
        cfg = GenConfig.from_json_dict(json.load(fh))
    d = cfg.feature_dim
    split, labels, degraded, x_a, x_b = [], [], [], [], []
    with open(data / "dataset.csv", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if len(header) != 3 + 2 * d:
            raise ValueError(f"dataset.csv has {len(header)} columns, expected {3 + 2 * d}")
        for row in reader:
            split.append(SPLIT_NAMES.index(row[0]))
            labels.append(int(row[1]))
            degraded.append(bool(int(row[2])))
            x_a.append([float(v) for v in row[3 : 3 + d]])
            x_b.append([float(v) for v in row[3 + d :]])
    arrays = (
        np.asarray(x_a),
        np.asarray(x_b),
        np.asarray(labels, dtype=np.int64),
        np.asarray(degraded, dtype=bool),
        np.asarray(split, dtype=np.int8),
    )
    for arr in arrays:
        arr.flags.writeable = False
    return Dataset(*arrays, cfg)
