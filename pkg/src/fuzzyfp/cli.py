"""Command-line surface: build, classify, evaluate, sweep-k, convert, inspect, synth.

Exit codes: 0 success, 2 usage error, 3 data error, 4 parameter error.
Every command is deterministic: identical inputs and flags produce
byte-identical outputs (no timestamps inside data files).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .build import build_library
from .classify import classify_record, explain, fingerprint_record
from .data import SPLITS
from .errors import DataFormatError, EvaluationError, FuzzyFPError, ParameterError
from .evaluation import EvalReport, evaluate, sweep_k
from .fingerprint import FeatureSpace, FuzzifyParams, SimilarityParams
from .storage import (
    dailydialog_token_records,
    load_dailydialog,
    load_embeddings,
    load_library,
    load_token_dataset,
    save_embeddings,
    save_library,
    save_token_dataset,
)
from .synth import SyntheticSpec, make_separable_dataset

_EMOTION_DISPLAY_ORDER = (
    "anger",
    "disgust",
    "fear",
    "happiness",
    "sadness",
    "surprise",
    "neutral",
)

_DEFAULTS = {
    "mode": "activation",
    "a": 0.8,
    "n": 1.0,
    "seed": 0,
    "explain": False,
    "magnitude": False,
    "classes": 7,
    "dim": 768,
    "block": 40,
    "signal": 1.0,
    "noise_std": 0.1,
    "train_per_class": 100,
    "valid_per_class": 0,
    "test_per_class": 20,
}


class UsageError(Exception):
    """Bad or missing command-line arguments (exit code 2)."""


def display_label_order(labels) -> tuple[str, ...]:
    """Sorted labels, except the canonical emotion order for the 7-emotion set."""
    if set(labels) == set(_EMOTION_DISPLAY_ORDER):
        return _EMOTION_DISPLAY_ORDER
    return tuple(sorted(labels))


def _merge(args: argparse.Namespace) -> dict:
    """Layer option values: hard defaults < config file < explicit flags."""
    merged = dict(_DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path is not None:
        try:
            with open(config_path, encoding="utf-8") as fh:
                config = json.load(fh)
        except FileNotFoundError:
            raise UsageError(f"config file {config_path} does not exist") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file {config_path} is not valid JSON: {exc}") from None
        if not isinstance(config, dict):
            raise UsageError(f"config file {config_path} must hold a JSON object")
        merged.update(config)
    for key, value in vars(args).items():
        if key in ("config", "func", "command"):
            continue
        if value is not None:
            merged[key] = value
    return merged


def _require(opts: dict, *names: str) -> None:
    for name in names:
        if opts.get(name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for this command")


def _input_path(opts: dict, name: str) -> Path:
    path = Path(opts[name])
    if not path.exists():
        raise DataFormatError(f"--{name.replace('_', '-')} path {path} does not exist")
    return path


def _output_path(opts: dict, name: str) -> Path | None:
    """Check an output location up front, before any data is loaded."""
    if opts.get(name) is None:
        return None
    path = Path(opts[name])
    parent = path.parent if str(path.parent) else Path(".")
    if not parent.is_dir():
        raise DataFormatError(f"--{name.replace('_', '-')} directory {parent} does not exist")
    if path.is_dir():
        raise DataFormatError(f"--{name.replace('_', '-')} path {path} is a directory")
    return path


def _load_dataset(path: Path, mode: str):
    if mode == FeatureSpace.TOKEN.value:
        return load_token_dataset(path)
    return load_embeddings(path)


def _split_of(dataset, split: str, path: Path):
    part = dataset.split(split)
    if len(part) == 0:
        raise EvaluationError(f"{path} holds no records with split={split!r}")
    return part


def _write_json(payload: dict, path: Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")


def _fmt_pct(f1: float) -> str:
    return f"{100.0 * f1:6.2f}"


def _report_payload(report: EvalReport) -> dict:
    return {
        "k": report.k,
        "a": report.a,
        "n": report.n,
        "macro_f1": report.macro_f1,
        "per_class_f1": report.per_class_f1,
        "confusion": {
            "labels": list(report.confusion.labels),
            "counts": [list(row) for row in report.confusion.counts],
        },
    }


def _print_report(report: EvalReport) -> None:
    order = display_label_order(report.confusion.labels)
    print("per-class F1 (x100):")
    print("  " + "  ".join(f"{label:>10s}" for label in order))
    print("  " + "  ".join(f"{_fmt_pct(report.per_class_f1[label]):>10s}" for label in order))
    print(f"macro-F1: {_fmt_pct(report.macro_f1).strip()}  (k={report.k} a={report.a} n={report.n})")


def cmd_build(opts: dict) -> int:
    _require(opts, "train", "library", "k")
    params = FuzzifyParams(k=int(opts["k"]), a=float(opts["a"]))
    library_path = _output_path(opts, "library")
    train_path = _input_path(opts, "train")
    dataset = _load_dataset(train_path, opts["mode"])
    train = _split_of(dataset, "train", train_path)
    library = build_library(train, params, use_magnitude=bool(opts["magnitude"]))
    save_library(library, library_path)
    print(
        f"built {library.feature_space.value} library: {len(library)} classes, "
        f"k={params.k}, a={params.a} -> {library_path}"
    )
    return 0


def _explanation_payload(expl) -> dict:
    return {
        "no_evidence": expl.no_evidence,
        "totals": expl.totals,
        "shared": {
            label: [[row.element, row.mu_instance, row.mu_class, row.contribution] for row in rows]
            for label, rows in expl.per_class.items()
        },
    }


def _render_explanation(expl, order) -> str:
    lines = []
    for label in order:
        rows = expl.per_class[label]
        if not rows:
            continue
        evidence = " ".join(
            f"{row.element}(min({row.mu_instance:g},{row.mu_class:g})={row.contribution:g})"
            for row in rows
        )
        lines.append(f"    {label}: total={expl.totals[label]:g}  {evidence}")
    if not lines:
        lines.append("    no shared elements with any class")
    return "\n".join(lines)


def cmd_classify(opts: dict) -> int:
    _require(opts, "library", "test")
    out_path = _output_path(opts, "out")
    library = load_library(_input_path(opts, "library"))
    test_path = _input_path(opts, "test")
    dataset = _load_dataset(test_path, library.feature_space.value)
    sim = SimilarityParams(n=float(opts["n"]))
    want_explain = bool(opts["explain"])
    order = display_label_order(library.labels())
    out_rows = []
    for record in dataset.records:
        result = classify_record(record, library, sim)
        print(f"{record.id}\t{result.predicted}\t{result.scores[result.predicted]:g}")
        row = {
            "id": record.id,
            "split": record.split,
            "gold": record.label,
            "predicted": result.predicted,
            "scores": result.scores,
        }
        if want_explain:
            expl = explain(fingerprint_record(record, library), library, sim)
            row["explanation"] = _explanation_payload(expl)
            print(_render_explanation(expl, order))
        out_rows.append(row)
    if out_path is not None:
        with out_path.open("w", encoding="utf-8") as fh:
            for row in out_rows:
                fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")
        print(f"wrote {len(out_rows)} predictions -> {out_path}")
    return 0


def cmd_evaluate(opts: dict) -> int:
    _require(opts, "library", "test")
    out_path = _output_path(opts, "out")
    library = load_library(_input_path(opts, "library"))
    test_path = _input_path(opts, "test")
    dataset = _load_dataset(test_path, library.feature_space.value)
    test = _split_of(dataset, "test", test_path)
    report = evaluate(library, test, SimilarityParams(n=float(opts["n"])))
    _print_report(report)
    if out_path is not None:
        _write_json(_report_payload(report), out_path)
        print(f"wrote report -> {out_path}")
    return 0


def _parse_k_grid(raw) -> list[int]:
    if isinstance(raw, (list, tuple)):
        values = list(raw)
    else:
        values = [part for part in str(raw).replace(",", " ").split() if part]
    try:
        ks = [int(v) for v in values]
    except ValueError:
        raise UsageError(f"--k-grid must be a list of integers, got {raw!r}") from None
    if not ks:
        raise UsageError("--k-grid must name at least one K")
    return ks


def cmd_sweep_k(opts: dict) -> int:
    _require(opts, "train", "k_grid")
    if opts.get("valid") is None and opts.get("test") is None:
        raise UsageError("sweep-k needs --valid (validation split) or --test (test split)")
    ks = _parse_k_grid(opts["k_grid"])
    out_path = _output_path(opts, "out")
    train_path = _input_path(opts, "train")
    train = _split_of(_load_dataset(train_path, opts["mode"]), "train", train_path)
    if opts.get("valid") is not None:
        eval_path = _input_path(opts, "valid")
        eval_part = _split_of(_load_dataset(eval_path, opts["mode"]), "validation", eval_path)
    else:
        eval_path = _input_path(opts, "test")
        eval_part = _split_of(_load_dataset(eval_path, opts["mode"]), "test", eval_path)
    report = sweep_k(
        train,
        eval_part,
        ks,
        a=float(opts["a"]),
        params=SimilarityParams(n=float(opts["n"])),
        use_magnitude=bool(opts["magnitude"]),
    )
    print("   K  macro-F1 (x100)")
    for k, f1 in report.points:
        marker = "  <- best" if k == report.best_k else ""
        print(f"{k:4d}  {_fmt_pct(f1)}{marker}")
    if out_path is not None:
        payload = {
            "a": float(opts["a"]),
            "n": float(opts["n"]),
            "points": [[k, f1] for k, f1 in report.points],
            "best_k": report.best_k,
        }
        _write_json(payload, out_path)
        print(f"wrote sweep -> {out_path}")
    return 0


def cmd_convert(opts: dict) -> int:
    _require(opts, "data_dir", "out")
    out_path = _output_path(opts, "out")
    splits = load_dailydialog(_input_path(opts, "data_dir"))
    dataset = dailydialog_token_records(splits)
    save_token_dataset(dataset, out_path)
    per_split = {name: len(dataset.split(name)) for name in SPLITS}
    summary = ", ".join(f"{name}={count}" for name, count in per_split.items() if count)
    print(f"converted {len(dataset)} utterances ({summary}) -> {out_path}")
    return 0


def cmd_inspect(opts: dict) -> int:
    _require(opts, "library")
    library = load_library(_input_path(opts, "library"))
    print(
        f"feature_space={library.feature_space.value} dimension={library.dimension} "
        f"k={library.params.k} a={library.params.a} classes={len(library)}"
    )
    for label in display_label_order(library.labels()):
        entries = " ".join(f"({e},{mu:g})" for e, mu in library[label].entries)
        print(f"FFP[{label}] = {entries}")
    return 0


def cmd_synth(opts: dict) -> int:
    _require(opts, "out")
    out_path = _output_path(opts, "out")
    spec = SyntheticSpec(
        classes=int(opts["classes"]),
        dimension=int(opts["dim"]),
        block=int(opts["block"]),
        signal=float(opts["signal"]),
        noise_std=float(opts["noise_std"]),
        train_per_class=int(opts["train_per_class"]),
        validation_per_class=int(opts["valid_per_class"]),
        test_per_class=int(opts["test_per_class"]),
        seed=int(opts["seed"]),
    )
    dataset = make_separable_dataset(spec)
    save_embeddings(dataset, out_path)
    print(
        f"wrote {len(dataset)} records ({spec.classes} classes, D={spec.dimension}, "
        f"seed={spec.seed}) -> {out_path}"
    )
    return 0


def _add_params(p, *, with_k=True):
    if with_k:
        p.add_argument("--k", type=int, help="fingerprint size K")
    p.add_argument("--a", type=float, help="membership slope in [0,1] (default 0.8)")
    p.add_argument("--n", type=float, help="similarity normalization constant (default 1.0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzyfp",
        description="Fuzzy-fingerprint classification toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file with option defaults (flags win)")
        p.add_argument(
            "--mode",
            choices=[space.value for space in FeatureSpace],
            help="feature space (default activation)",
        )
        p.set_defaults(func=func)
        return p

    p = command("build", cmd_build, "build a fingerprint library from training records")
    _add_params(p)
    p.add_argument("--train", help="dataset file; its train-split records are used")
    p.add_argument("--library", help="output library file")
    p.add_argument(
        "--magnitude",
        action=argparse.BooleanOptionalAction,
        help="rank coordinates by |accumulated value| instead of signed value",
    )

    p = command("classify", cmd_classify, "classify every record in a dataset file")
    _add_params(p, with_k=False)
    p.add_argument("--library", help="library file to classify against")
    p.add_argument("--test", help="dataset file with the instances to classify")
    p.add_argument("--out", help="write per-instance predictions as JSON lines")
    p.add_argument(
        "--explain",
        action=argparse.BooleanOptionalAction,
        help="emit per-element evidence for each classification",
    )

    p = command("evaluate", cmd_evaluate, "score a library on a test split")
    _add_params(p, with_k=False)
    p.add_argument("--library", help="library file")
    p.add_argument("--test", help="dataset file; its test-split records are used")
    p.add_argument("--out", help="write the evaluation report as JSON")

    p = command("sweep-k", cmd_sweep_k, "evaluate a grid of fingerprint sizes")
    _add_params(p, with_k=False)
    p.add_argument("--train", help="dataset file; its train-split records are used")
    p.add_argument("--valid", help="dataset file; its validation-split records are used")
    p.add_argument("--test", help="fallback eval file when --valid is absent (test split)")
    p.add_argument("--k-grid", dest="k_grid", help="comma-separated K values, e.g. 1,5,10,25,50")
    p.add_argument("--out", help="write the sweep report as JSON")
    p.add_argument(
        "--magnitude",
        action=argparse.BooleanOptionalAction,
        help="rank coordinates by |accumulated value| instead of signed value",
    )

    p = command("convert", cmd_convert, "convert raw DailyDialog splits to a dataset file")
    p.add_argument("--data-dir", dest="data_dir", help="directory with the raw split files")
    p.add_argument("--out", help="output dataset file (text records)")

    p = command("inspect", cmd_inspect, "print a library's fingerprints")
    p.add_argument("--library", help="library file")

    p = command("synth", cmd_synth, "generate the seeded block-separable dataset")
    p.add_argument("--out", help="output embedding dataset file")
    p.add_argument("--seed", type=int, help="generator seed (default 0)")
    p.add_argument("--classes", type=int, help="number of classes (default 7)")
    p.add_argument("--dim", type=int, help="vector dimension (default 768)")
    p.add_argument("--block", type=int, help="active coordinates per class (default 40)")
    p.add_argument("--signal", type=float, help="mean activation on the class block (default 1.0)")
    p.add_argument("--noise-std", dest="noise_std", type=float, help="noise std (default 0.1)")
    p.add_argument("--train-per-class", dest="train_per_class", type=int)
    p.add_argument("--valid-per-class", dest="valid_per_class", type=int)
    p.add_argument("--test-per-class", dest="test_per_class", type=int)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        opts = _merge(args)
        return args.func(opts)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 4
    except FuzzyFPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except BrokenPipeError:
        return 0  # downstream pipe closed early (e.g. | head)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
