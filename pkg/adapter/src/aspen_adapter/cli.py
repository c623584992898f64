"""Command-line entry: serve a translator plugin or fine-tune an artifact."""

from __future__ import annotations

import argparse
import sys

from .config import AdapterConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aspen-adapter",
        description="Seq2seq translator plugin speaking the line-based wire protocol.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="answer translation requests over stdio")
    source = serve.add_mutually_exclusive_group(required=True)
    source.add_argument("--model", help="model artifact directory")
    source.add_argument(
        "--passthrough", action="store_true",
        help="no model: answer every request with its own sentence",
    )
    serve.add_argument("--max-length", type=int, default=64)
    serve.add_argument("--beams", type=int, default=1, help="1 = greedy (deterministic)")
    serve.add_argument("--device", default="cpu")
    serve.add_argument("--name", default="aspen-adapter", help="handshake name")

    tune = sub.add_parser("finetune", help="train a tiny model on dataset JSONL files")
    tune.add_argument("--dataset", action="append", required=True,
                      help="dataset JSONL path (repeatable)")
    tune.add_argument("--out", required=True, help="artifact directory to write")
    tune.add_argument("--epochs", type=int, default=200)
    tune.add_argument("--batch-size", type=int, default=16)
    tune.add_argument("--lr", type=float, default=2e-5)
    tune.add_argument("--weight-decay", type=float, default=0.01)
    tune.add_argument("--patience", type=int, default=20,
                      help="early-stopping patience on the monitored loss")
    tune.add_argument("--val-fraction", type=float, default=0.1)
    tune.add_argument("--max-length", type=int, default=64)
    tune.add_argument("--seed", type=int, default=0)
    tune.add_argument("--quiet", action="store_true", help="suppress the epoch log")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        from .serve import model_translator, passthrough_translate, serve

        try:
            config = AdapterConfig(
                model=args.model, max_length=args.max_length,
                beams=args.beams, device=args.device,
            )
            if args.passthrough:
                translate = passthrough_translate
            else:
                translate = model_translator(config)
        except Exception as exc:
            print(f"error: cannot start translator: {exc}", file=sys.stderr)
            return 1
        return serve(translate, name=args.name)

    if args.command == "finetune":
        from .finetune import finetune
        from .records import DatasetFormatError

        try:
            summary = finetune(
                args.dataset, args.out,
                epochs=args.epochs, batch_size=args.batch_size,
                lr=args.lr, weight_decay=args.weight_decay,
                patience=args.patience, val_fraction=args.val_fraction,
                max_length=args.max_length, seed=args.seed,
                log=None if args.quiet else sys.stderr,
            )
        except DatasetFormatError as exc:
            print(f"error: bad dataset: {exc}", file=sys.stderr)
            return 1
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(
            f"trained {summary['epochs_run']} epoch(s) on {summary['train_records']} "
            f"record(s); best epoch {summary['best_epoch']} "
            f"(loss {summary['best_loss']:.4f}); artifact at {args.out}",
            file=sys.stderr,
        )
        return 0

    return 2


if __name__ == "__main__":
    sys.exit(main())
