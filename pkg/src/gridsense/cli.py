"""Command-line entry point: filter, train, eval, classify, topics, synth,
run-all. Exit codes: 0 ok, 1 config error, 2 data error, 3 internal error."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import pipeline
from .classify import ClassifyError
from .config import ConfigError, PipelineConfig, load_config
from .corpus import CorpusError
from .phrases import PhraseError
from .topics import TopicError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridsense",
        description="Mine electricity-infrastructure condition signals from "
        "geotagged social-media corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=(name == "run-all"), help="pipeline config file")
        p.add_argument("--input", help="override input corpus path")
        p.add_argument("--output-dir", help="override output directory")
        p.add_argument("--seed", type=int, help="override seed")
        return p

    add("filter", "keyword/bot filtering; emits filtered corpus and keyword counts")
    train = add("train", "train the classifier with the 60/20/20 protocol")
    train.add_argument("--labels", help="override labeled-data path")
    ev = add("eval", "print precision/recall/F1 for the trained model")
    ev.add_argument("--labels", help="override labeled-data path")
    cls = add("classify", "emit the positive (electricity-related) id set")
    cls.add_argument("--labels", help="override labeled-data path")
    cls.add_argument("--scores", help="external score file instead of the model")
    add("topics", "phrase modeling, top-k terms, and engagement reports")
    syn = add("synth", "generate a synthetic raw corpus + labels")
    syn.add_argument("--output", help="corpus output path")
    add("run-all", "filter -> train -> classify -> topics in one shot")
    return parser


def _load(args) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    overrides = {}
    for key in ("input", "output_dir", "seed", "labels", "scores"):
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
        cfg.validate()
    return cfg


def _run(args) -> int:
    cfg = _load(args)
    if args.command == "filter":
        stats = pipeline.stage_filter(cfg)
        print(
            f"raw={stats.n_raw} after-bot-filter={stats.n_after_bots} "
            f"matched={stats.n_matched} reduction={stats.reduction_ratio:.4%}"
        )
    elif args.command == "train":
        report = pipeline.stage_train(cfg)
        _print_report(report)
    elif args.command == "eval":
        report = pipeline.stage_train(cfg)
        _print_report(report)
    elif args.command == "classify":
        positives = pipeline.stage_classify(cfg)
        print(f"positives={len(positives)} -> {Path(cfg.output_dir) / 'positives.txt'}")
    elif args.command == "topics":
        pipeline.stage_topics(cfg)
        print(f"topic reports written to {cfg.output_dir}")
    elif args.command == "synth":
        path = pipeline.stage_synth(cfg, output=getattr(args, "output", None))
        print(f"synthetic corpus written to {path}")
    elif args.command == "run-all":
        stats = pipeline.run_all(cfg)
        print(
            f"done: raw={stats.n_raw} matched={stats.n_matched} "
            f"reduction={stats.reduction_ratio:.4%}; outputs in {cfg.output_dir}"
        )
    return EXIT_OK


def _print_report(report) -> None:
    def fmt(v):
        return "undefined" if v is None else f"{v:.4f}"

    print(
        f"TP={report.tp} FP={report.fp} FN={report.fn} TN={report.tn} "
        f"precision={fmt(report.precision)} recall={fmt(report.recall)} "
        f"f1={fmt(report.f1)}"
    )


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CorpusError, pipeline.DataError, ClassifyError, PhraseError, TopicError,
            FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
