"""Multi-seed experiment runner and report emission.

One experiment = for every seed: regenerate the dataset, train the
evidential pair end to end plus the two per-view softmax baselines, then
score the test split under every requested fusion strategy alongside the
four single-view predictors. Seeds drive both data generation and
training. Aggregation over seeds is a plain deterministic reduction of
the per-seed table, so reports are byte-identical across reruns of the
same config.

Emitted files: report.json (primary), report.csv (one row per seed and
strategy), uncertainty_hist.csv (view, bin_low, bin_high, count; counts
summed over seeds) and credible_counts.csv (view, class, threshold,
count; summed over seeds).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .datagen import GenConfig, generate
from .fusion import BASELINE_RULES, fuse_evidence_batch
from .metrics import HISTOGRAM_BINS, EvalReport, accuracy_and_macro_f1, build_eval_report
from .model import (
    TrainConfig,
    TrainedPair,
    evidence_batch,
    softmax_probs,
    train_pair,
    train_softmax_baseline,
)

STRATEGIES = ("evidential",) + BASELINE_RULES
SINGLE_VIEWS = ("view_a_softmax", "view_b_softmax", "view_a_evidential", "view_b_evidential")
UNCERTAINTY_VIEWS = ("a", "b", "fused")


class ExperimentError(RuntimeError):
    """Raised when a per-seed stage fails; names the seed and stage."""


@dataclass(frozen=True)
class ExperimentConfig:
    gen: GenConfig
    train: TrainConfig
    seeds: tuple[int, ...]
    strategies: tuple[str, ...] = STRATEGIES
    credible_threshold: float = 0.4

    def __post_init__(self):
        seeds = tuple(int(s) for s in self.seeds)
        if not seeds:
            raise ValueError("at least one seed is required")
        strategies = tuple(self.strategies)
        if not strategies:
            raise ValueError("at least one strategy is required")
        unknown = set(strategies) - set(STRATEGIES)
        if unknown:
            raise ValueError(f"unknown strategies: {sorted(unknown)}")
        if not 0.0 < self.credible_threshold <= 1.0:
            raise ValueError("credible_threshold must lie in (0, 1]")
        object.__setattr__(self, "seeds", seeds)
        object.__setattr__(self, "strategies", strategies)

    def to_json_dict(self) -> dict:
        return {
            "gen": self.gen.to_json_dict(),
            "train": self.train.to_json_dict(),
            "seeds": list(self.seeds),
            "strategies": list(self.strategies),
            "credible_threshold": self.credible_threshold,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ExperimentConfig":
        unknown = set(obj) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown ExperimentConfig keys: {sorted(unknown)}")
        if "gen" not in obj or "train" not in obj or "seeds" not in obj:
            raise ValueError("experiment config requires 'gen', 'train' and 'seeds'")
        kwargs = {
            "gen": GenConfig.from_json_dict(obj["gen"]),
            "train": TrainConfig.from_json_dict(obj["train"]),
            "seeds": tuple(obj["seeds"]),
        }
        if "strategies" in obj:
            kwargs["strategies"] = tuple(obj["strategies"])
        if "credible_threshold" in obj:
            kwargs["credible_threshold"] = float(obj["credible_threshold"])
        return cls(**kwargs)


@dataclass(frozen=True)
class SeedResult:
    seed: int
    scores: dict[str, tuple[float, float]]  # name -> (accuracy, macro_f1)
    uncertainty: dict[str, EvalReport]  # per UNCERTAINTY_VIEWS
    first_epoch_global_loss: float
    final_epoch_global_loss: float

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "scores": {
                name: {"accuracy": acc, "macro_f1": f1}
                for name, (acc, f1) in self.scores.items()
            },
            "uncertainty": {view: rep.to_json_dict() for view, rep in self.uncertainty.items()},
            "first_epoch_global_loss": self.first_epoch_global_loss,
            "final_epoch_global_loss": self.final_epoch_global_loss,
        }


@dataclass(frozen=True)
class ComparisonReport:
    config: ExperimentConfig
    per_seed: tuple[SeedResult, ...]
    summary: dict[str, dict[str, float | None]]

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.to_json_dict(),
            "strategy_summary": self.summary,
            "per_seed": [r.to_json_dict() for r in self.per_seed],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class ExperimentArtifacts:
    report: ComparisonReport
    first_pair: TrainedPair


def _mean_std(values: list[float]) -> tuple[float, float | None]:
    arr = np.asarray(values)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.size > 1 else None
    return mean, std


def evaluate_pair(ds, head_a, head_b, threshold: float) -> dict[str, EvalReport]:
    """Evidential test-split reports keyed by view ('a', 'b', 'fused')."""
    xa, xb, labels, degraded = ds.subset("test")
    if labels.size == 0:
        raise ValueError("test split is empty")
    k = ds.num_classes
    ev_a = evidence_batch(head_a, xa)
    ev_b = evidence_batch(head_b, xb)
    ev_f = fuse_evidence_batch(ev_a, ev_b)
    out = {}
    for view, ev in (("a", ev_a), ("b", ev_b), ("fused", ev_f)):
        u = k / (ev.sum(axis=1) + k)
        out[view] = build_eval_report(np.argmax(ev, axis=1), labels, u, degraded, threshold, k)
    return out


def _evaluate_seed(cfg: ExperimentConfig, seed: int) -> tuple[SeedResult, TrainedPair]:
    stage = "generate"
    try:
        ds = generate(replace(cfg.gen, seed=seed))
        stage = "train-evidential"
        pair = train_pair(ds, replace(cfg.train, seed=seed))
        stage = "train-softmax-a"
        sm_a = train_softmax_baseline(ds, replace(cfg.train, seed=seed), "a")
        stage = "train-softmax-b"
        sm_b = train_softmax_baseline(ds, replace(cfg.train, seed=seed), "b")
        stage = "evaluate"
        uncertainty = evaluate_pair(ds, pair.head_a, pair.head_b, cfg.credible_threshold)
        xa, xb, labels, _ = ds.subset("test")
        k = ds.num_classes
        p_a = softmax_probs(sm_a.head, xa)
        p_b = softmax_probs(sm_b.head, xb)

        scores = {
            "view_a_softmax": accuracy_and_macro_f1(np.argmax(p_a, axis=1), labels, k),
            "view_b_softmax": accuracy_and_macro_f1(np.argmax(p_b, axis=1), labels, k),
            "view_a_evidential": (uncertainty["a"].accuracy, uncertainty["a"].macro_f1),
            "view_b_evidential": (uncertainty["b"].accuracy, uncertainty["b"].macro_f1),
        }
        fused_rules = {
            "evidential": None,  # scored from the fused report below
            "sum": p_a + p_b,
            "product": p_a * p_b,
            "max": np.maximum(p_a, p_b),
            "min": np.minimum(p_a, p_b),
        }
        for name in cfg.strategies:
            if name == "evidential":
                scores[name] = (uncertainty["fused"].accuracy, uncertainty["fused"].macro_f1)
            else:
                scores[name] = accuracy_and_macro_f1(np.argmax(fused_rules[name], axis=1), labels, k)

        return SeedResult(
            seed=seed,
            scores=scores,
            uncertainty=uncertainty,
            first_epoch_global_loss=pair.history[0].global_loss,
            final_epoch_global_loss=pair.history[-1].global_loss,
        ), pair
    except ExperimentError:
        raise
    except Exception as exc:
        raise ExperimentError(f"seed {seed}, stage {stage}: {exc}") from exc


def run_experiment_artifacts(cfg: ExperimentConfig) -> ExperimentArtifacts:
    """Run every seed; keep the first seed's trained pair for serialization."""
    results = []
    first_pair = None
    for seed in cfg.seeds:
        result, pair = _evaluate_seed(cfg, seed)
        results.append(result)
        if first_pair is None:
            first_pair = pair
    names = list(SINGLE_VIEWS) + list(cfg.strategies)
    summary = {}
    for name in names:
        acc_mean, acc_std = _mean_std([r.scores[name][0] for r in results])
        f1_mean, f1_std = _mean_std([r.scores[name][1] for r in results])
        summary[name] = {
            "accuracy_mean": acc_mean,
            "accuracy_std": acc_std,
            "macro_f1_mean": f1_mean,
            "macro_f1_std": f1_std,
        }
    report = ComparisonReport(config=cfg, per_seed=tuple(results), summary=summary)
    return ExperimentArtifacts(report=report, first_pair=first_pair)


def run_experiment(cfg: ExperimentConfig) -> ComparisonReport:
    """Generate, train and score every seed, then aggregate."""
    return run_experiment_artifacts(cfg).report


def write_report_files(report: ComparisonReport, out_dir: str | Path) -> list[Path]:
    """Write report.json, report.csv and the two uncertainty CSV mirrors."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    path = out / "report.json"
    path.write_text(report.to_json())
    written.append(path)

    path = out / "report.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["seed", "strategy", "accuracy", "macro_f1"])
        for r in report.per_seed:
            for name, (acc, f1) in r.scores.items():
                writer.writerow([r.seed, name, f"{acc:.17g}", f"{f1:.17g}"])
    written.append(path)

    hists = {}
    credibles = {}
    for view in UNCERTAINTY_VIEWS:
        hists[view] = np.sum([r.uncertainty[view].histogram for r in report.per_seed], axis=0)
        credibles[view] = np.sum(
            [r.uncertainty[view].credible_counts for r in report.per_seed], axis=0
        )
    written += _write_uncertainty_csvs(out, hists, credibles, report.config.credible_threshold)
    return written


def write_uncertainty_files(
    reports: dict[str, EvalReport], threshold: float, out_dir: str | Path
) -> list[Path]:
    """Write the two uncertainty CSVs for a single evaluation."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    hists = {view: rep.histogram for view, rep in reports.items()}
    credibles = {view: rep.credible_counts for view, rep in reports.items()}
    return _write_uncertainty_csvs(out, hists, credibles, threshold)


def _write_uncertainty_csvs(out: Path, hists, credibles, threshold: float) -> list[Path]:
    hist_path = out / "uncertainty_hist.csv"
    with open(hist_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["view", "bin_low", "bin_high", "count"])
        for view in UNCERTAINTY_VIEWS:
            for i in range(HISTOGRAM_BINS):
                writer.writerow(
                    [
                        view,
                        f"{i / HISTOGRAM_BINS:.2f}",
                        f"{(i + 1) / HISTOGRAM_BINS:.2f}",
                        int(hists[view][i]),
                    ]
                )
    credible_path = out / "credible_counts.csv"
    with open(credible_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["view", "class", "threshold", "count"])
        for view in UNCERTAINTY_VIEWS:
            for c, count in enumerate(credibles[view]):
                writer.writerow([view, c, threshold, int(count)])
    return [hist_path, credible_path]
