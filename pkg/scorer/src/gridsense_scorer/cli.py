"""Command-line entry point mirroring the pipeline's naming: train, score.
Exit codes: 0 ok, 1 config error, 2 data error, 3 internal error."""

from __future__ import annotations

import argparse
import sys

from .data import DataError, write_scores
from .model import ScorerHyper, finetune, score

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridsense-scorer",
        description="Fine-tune a transformer encoder on pipeline-format labeled "
        "records and export per-record probabilities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("train", help="fine-tune on a labeled corpus; save a checkpoint")
    tr.add_argument("--corpus", required=True, help="corpus file (newline-delimited JSON)")
    tr.add_argument("--labels", required=True, help="label file (record_id, label rows)")
    tr.add_argument("--encoder", required=True, help="pretrained encoder id or local path")
    tr.add_argument("--output-dir", required=True, help="checkpoint directory to write")
    tr.add_argument("--learning-rate", type=float, default=ScorerHyper.learning_rate)
    tr.add_argument("--epochs", type=int, default=ScorerHyper.epochs)
    tr.add_argument("--batch-size", type=int, default=ScorerHyper.batch_size)
    tr.add_argument("--max-length", type=int, default=ScorerHyper.max_length)
    tr.add_argument("--seed", type=int, default=ScorerHyper.seed)

    sc = sub.add_parser("score", help="write a score file for every corpus record")
    sc.add_argument("--checkpoint", required=True, help="checkpoint directory from train")
    sc.add_argument("--corpus", required=True, help="corpus file to score")
    sc.add_argument("--output", required=True, help="score file to write")
    return parser


def _fmt(v) -> str:
    return "undefined" if v is None else f"{v:.4f}"


def _run(args) -> int:
    if args.command == "train":
        if args.epochs < 1 or args.batch_size < 1 or args.max_length < 1:
            print("config error: epochs, batch size, and max length must be >= 1",
                  file=sys.stderr)
            return EXIT_CONFIG
        if args.learning_rate <= 0:
            print("config error: learning rate must be > 0", file=sys.stderr)
            return EXIT_CONFIG
        hyper = ScorerHyper(
            learning_rate=args.learning_rate, epochs=args.epochs,
            batch_size=args.batch_size, max_length=args.max_length, seed=args.seed,
        )
        m = finetune(args.corpus, args.labels, args.encoder, args.output_dir,
                     hyper=hyper, seed=args.seed)
        print(
            f"TP={m.tp} FP={m.fp} FN={m.fn} TN={m.tn} "
            f"precision={_fmt(m.precision)} recall={_fmt(m.recall)} f1={_fmt(m.f1)}"
        )
    elif args.command == "score":
        scores = score(args.checkpoint, args.corpus)
        write_scores(scores, args.output)
        print(f"{len(scores)} scores -> {args.output}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _run(args)
    except (DataError, FileNotFoundError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
