"""Command-line interface.

Subcommands: datagen, train, eval, fuse, experiment, uncertainty-report.
Config files are JSON; schemas are documented in the README. Exit codes:
0 success, 2 configuration or usage error, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .datagen import GenConfig, generate, load_dataset, save_dataset
from .fusion import fuse_opinions
from .harness import (
    ExperimentConfig,
    evaluate_pair,
    run_experiment_artifacts,
    write_report_files,
    write_uncertainty_files,
)
from .model import EvidenceHead, TrainConfig, load_model, save_model, train_pair
from .opinion import Opinion


class ConfigError(ValueError):
    pass


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc


def _wrap_config(fn, *args):
    try:
        return fn(*args)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def _cmd_datagen(args) -> int:
    cfg = _wrap_config(GenConfig.from_json_dict, _load_json(args.config))
    ds = generate(cfg)
    csv_path, json_path = save_dataset(ds, args.out)
    print(f"wrote {csv_path} and {json_path}")
    return 0


def _cmd_train(args) -> int:
    obj = _load_json(args.config)
    if "train" not in obj:
        raise ConfigError("train config requires a 'train' section")
    train_cfg = _wrap_config(TrainConfig.from_json_dict, obj["train"])
    if args.data is not None:
        ds = load_dataset(args.data)
    elif "gen" in obj:
        ds = generate(_wrap_config(GenConfig.from_json_dict, obj["gen"]))
    else:
        raise ConfigError("provide --data or a 'gen' section in the config")
    pair = train_pair(ds, train_cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_model(pair.head_a, out / "model_a.json")
    save_model(pair.head_b, out / "model_b.json")
    history = [
        {
            "global_loss": rec.global_loss,
            "view_a_loss": rec.view_a_loss,
            "view_b_loss": rec.view_b_loss,
            "fused_loss": rec.fused_loss,
            "val_accuracy": rec.val_accuracy,
        }
        for rec in pair.history
    ]
    (out / "history.json").write_text(json.dumps(history, indent=2) + "\n")
    print(f"wrote {out / 'model_a.json'}, {out / 'model_b.json'} and {out / 'history.json'}")
    return 0


def _load_pair(models_dir: str) -> tuple[EvidenceHead, EvidenceHead]:
    heads = []
    for name in ("model_a.json", "model_b.json"):
        path = Path(models_dir) / name
        if not path.exists():
            raise ConfigError(f"missing model file: {path}")
        head = load_model(path)
        if not isinstance(head, EvidenceHead):
            raise ConfigError(f"{path} does not contain an evidence head")
        heads.append(head)
    return heads[0], heads[1]


def _cmd_eval(args) -> int:
    ds = load_dataset(args.data)
    head_a, head_b = _load_pair(args.models)
    reports = evaluate_pair(ds, head_a, head_b, args.threshold)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = {view: rep.to_json_dict() for view, rep in reports.items()}
    (out / "report.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    write_uncertainty_files(reports, args.threshold, out)
    print(f"wrote report.json, uncertainty_hist.csv and credible_counts.csv under {out}")
    return 0


def _cmd_fuse(args) -> int:
    o1 = _wrap_config(Opinion.from_json_dict, _load_json(args.a))
    o2 = _wrap_config(Opinion.from_json_dict, _load_json(args.b))
    fused = fuse_opinions(o1, o2)
    payload = {
        "opinion": fused.opinion.to_json_dict(),
        "evidence": fused.evidence.to_json_dict(),
        "predicted_class": fused.predicted_class,
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _cmd_experiment(args) -> int:
    cfg = _wrap_config(ExperimentConfig.from_json_dict, _load_json(args.config))
    artifacts = run_experiment_artifacts(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_report_files(artifacts.report, out)
    save_model(artifacts.first_pair.head_a, out / "model_a.json")
    save_model(artifacts.first_pair.head_b, out / "model_b.json")
    print(f"wrote report and model files under {out}")
    return 0


def _cmd_uncertainty_report(args) -> int:
    ds = load_dataset(args.data)
    head_a, head_b = _load_pair(args.models)
    reports = evaluate_pair(ds, head_a, head_b, args.threshold)
    write_uncertainty_files(reports, args.threshold, args.out)
    print(f"wrote uncertainty_hist.csv and credible_counts.csv under {args.out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evifuse",
        description="Evidential two-view fusion: synthetic data, training, evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("datagen", help="generate a paired-view dataset")
    p.add_argument("--config", required=True, help="GenConfig JSON path")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_datagen)

    p = sub.add_parser("train", help="train the evidential head pair")
    p.add_argument("--config", required=True, help="JSON with 'train' and optional 'gen' sections")
    p.add_argument("--data", help="directory from `evifuse datagen` (overrides 'gen')")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a trained pair on a dataset's test split")
    p.add_argument("--data", required=True, help="directory from `evifuse datagen`")
    p.add_argument("--models", required=True, help="directory holding model_a.json/model_b.json")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--threshold", type=float, default=0.4, help="credible-sample threshold")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("fuse", help="fuse two opinion JSON files")
    p.add_argument("--a", required=True, help="first opinion JSON path")
    p.add_argument("--b", required=True, help="second opinion JSON path")
    p.set_defaults(fn=_cmd_fuse)

    p = sub.add_parser("experiment", help="run a multi-seed comparison experiment")
    p.add_argument("--config", required=True, help="ExperimentConfig JSON path")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_experiment)

    p = sub.add_parser("uncertainty-report", help="emit uncertainty CSVs for a trained pair")
    p.add_argument("--data", required=True, help="directory from `evifuse datagen`")
    p.add_argument("--models", required=True, help="directory holding model_a.json/model_b.json")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--threshold", type=float, default=0.4, help="credible-sample threshold")
    p.set_defaults(fn=_cmd_uncertainty_report)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"evifuse: config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"evifuse: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
