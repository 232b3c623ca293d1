"""Command line: `ffp-extract extract` and `ffp-extract finetune`.

Configuration comes from one JSON config file (--config) with flag overrides.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import load_config
from .corpus import read_dailydialog, read_utterance_file
from .extract import run_extraction
from .finetune import fine_tune


def _read_dialogues(args):
    if args.data_dir is not None:
        return read_dailydialog(args.data_dir)
    if args.data is not None:
        return read_utterance_file(args.data)
    raise SystemExit("one of --data-dir (raw corpus) or --data (utterance file) is required")


def _config_from(args):
    overrides = {
        "encoder": args.encoder,
        "context_window": args.context,
        "max_length": args.max_length,
        "separator": args.separator,
    }
    if getattr(args, "batch_size", None) is not None:
        overrides["batch_size"] = args.batch_size
    if getattr(args, "max_epochs", None) is not None:
        overrides["max_epochs"] = args.max_epochs
    if getattr(args, "patience", None) is not None:
        overrides["patience"] = args.patience
    if getattr(args, "eval_batch_size", None) is not None:
        overrides["eval_batch_size"] = args.eval_batch_size
    return load_config(args.config, **overrides)


def cmd_extract(args) -> int:
    config = _config_from(args)
    dialogues = _read_dialogues(args)
    truncated = run_extraction(
        config, dialogues, args.out, checkpoint=args.checkpoint, seed=None
    )
    utterances = sum(len(d) for d in dialogues)
    print(f"wrote {utterances} embedding records -> {args.out} (truncated inputs: {truncated})")
    return 0


def cmd_finetune(args) -> int:
    config = _config_from(args)
    dialogues = _read_dialogues(args)
    seeds = (
        [int(s) for s in args.seeds.replace(",", " ").split()] if args.seeds else config.seeds
    )
    out_dir = Path(args.out_dir)
    for seed in seeds:
        run_dir = out_dir / f"seed{seed}"
        result = fine_tune(config, dialogues, run_dir, seed=seed)
        print(
            f"seed {seed}: best epoch {result.best_epoch} "
            f"(val macro-F1 {max(result.history):.4f}), stopped at {result.stopped_epoch}, "
            f"checkpoint -> {run_dir}"
        )
        if args.extract_to is not None:
            embeddings = Path(args.extract_to) / f"seed{seed}.jsonl"
            embeddings.parent.mkdir(parents=True, exist_ok=True)
            truncated = run_extraction(
                config, dialogues, embeddings, checkpoint=run_dir, seed=seed
            )
            print(f"seed {seed}: embeddings -> {embeddings} (truncated inputs: {truncated})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ffp-extract", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file (flags override it)")
        p.add_argument("--data-dir", dest="data_dir", help="raw DailyDialog directory")
        p.add_argument("--data", help="converted utterance file (JSON lines)")
        p.add_argument("--encoder", help="encoder name or checkpoint path")
        p.add_argument("--context", type=int, help="previous utterances to concatenate")
        p.add_argument("--max-length", dest="max_length", type=int)
        p.add_argument("--separator", help="context separator (default: tokenizer's)")

    p = sub.add_parser("extract", help="write one embedding record per utterance")
    common(p)
    p.add_argument("--out", required=True, help="output embedding file")
    p.add_argument("--checkpoint", help="fine-tuned encoder directory (default: --encoder)")
    p.add_argument("--eval-batch-size", dest="eval_batch_size", type=int)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("finetune", help="fine-tune the encoder, one checkpoint per seed")
    common(p)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.add_argument("--seeds", help="comma-separated seeds, e.g. 0,1,2,3,4")
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--max-epochs", dest="max_epochs", type=int)
    p.add_argument("--patience", type=int)
    p.add_argument(
        "--extract-to", dest="extract_to",
        help="also write seed{N}.jsonl embedding files into this directory",
    )
    p.set_defaults(func=cmd_finetune)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
