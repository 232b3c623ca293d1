#!/usr/bin/env python3
"""Full-scale DailyDialog recipe.

Stage 1 (this repo, CPU): convert the raw corpus to the utterance file.
Stage 2 (extractor package, GPU recommended): fine-tune the encoder and write
one embedding file per seed.
Stage 3 (this script): build fingerprint libraries from each embedding file,
sweep K on the validation split, evaluate the selected K on the test split,
and average the per-seed reports.

Example:
    python scripts/run_dailydialog.py --embeddings runs/seed*.jsonl --a 0.8 \
        --k-grid 1,5,10,25,50,100,150,200,300,400
"""

import argparse

from fuzzyfp import (
    FuzzifyParams,
    SimilarityParams,
    average_reports,
    build_library,
    evaluate,
    load_embeddings,
    select_k,
    sweep_k,
)
from fuzzyfp.cli import display_label_order


def run_one(path, ks, a):
    data = load_embeddings(path)
    train, valid, test = data.split("train"), data.split("validation"), data.split("test")
    sweep = sweep_k(train, valid, ks, a=a, params=SimilarityParams())
    best = select_k(sweep)
    library = build_library(train, FuzzifyParams(k=best, a=a))
    report = evaluate(library, test, SimilarityParams())
    print(f"{path}: best K={best} (validation), test macro-F1 = {100 * report.macro_f1:.2f}")
    for k, f1 in sweep.points:
        print(f"    K={k:<4d} validation macro-F1 = {100 * f1:.2f}")
    return report


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--embeddings", nargs="+", required=True,
                        help="embedding dataset files, one per fine-tuning seed")
    parser.add_argument("--a", type=float, default=0.8)
    parser.add_argument("--k-grid", default="1,5,10,25,50,100,150,200,300,400")
    args = parser.parse_args()

    ks = [int(k) for k in args.k_grid.split(",")]
    reports = [run_one(path, ks, args.a) for path in args.embeddings]
    if len(reports) > 1:
        avg = average_reports(reports)
        print(f"\naverage over {avg.runs} runs: macro-F1 = {100 * avg.macro_f1:.2f}")
        order = display_label_order(tuple(avg.per_class_f1))
        print("per-class F1 (x100): "
              + "  ".join(f"{label}={100 * avg.per_class_f1[label]:.2f}" for label in order))


if __name__ == "__main__":
    main()
