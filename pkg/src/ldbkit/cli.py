"""Command-line harness.

Subcommands: gen (write synthetic datasets), train (build and serialize a
classifier), classify (apply a serialized classifier), experiment (full
multi-realization benchmark from a config file), dump-filters (print QMF
taps).  Usage errors exit 2; data and config errors exit 1 with a
diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import os
import sys

from .classify import EnsembleSpec, dump_predictions, make_one_vs_rest, score_dataset
from .datagen import RngSpec, gen_experiment
from .dataset import Dataset, export_csv, load_dataset, read_csv, save_dataset
from .dcsa import DcsaParams, training_trace
from .errors import LdbError
from .experiment import (
    MEASURE_TAG_BY_NUMBER,
    emit_csv,
    emit_text,
    load_config,
    run_experiment,
)
from .measures import MeasureKind
from .wavelets import DictionarySpec, build_filter

_MEASURE_TOKENS = {f"lambda{n}": tag for n, tag in MEASURE_TAG_BY_NUMBER.items()}


def _read_dataset(path: str) -> Dataset:
    return read_csv(path) if path.endswith(".csv") else load_dataset(path)


def _write_dataset(ds: Dataset, path: str) -> None:
    if path.endswith(".csv"):
        export_csv(ds, path)
    else:
        save_dataset(ds, path)


def _cmd_gen(args) -> int:
    train, test = gen_experiment(args.example, args.realization,
                                 RngSpec(args.seed),
                                 args.train_per_class, args.test_per_class,
                                 args.offset)
    _write_dataset(train, args.out_train)
    _write_dataset(test, args.out_test)
    print(f"wrote {args.out_train} ({len(train)} signals) and "
          f"{args.out_test} ({len(test)} signals)")
    return 0


def _cmd_train(args) -> int:
    data = _read_dataset(args.data)
    params = DcsaParams(
        K=args.K, delta=args.delta, eta=args.eta, mu=args.mu, nu=args.nu,
        mode=args.mode,
        measure=MeasureKind(tag=_MEASURE_TOKENS[args.measure],
                            regularizer=args.regularizer),
        delta_cap=args.delta_cap)
    spec = make_one_vs_rest(data, DictionarySpec(taps=args.taps,
                                                 depth=args.depth), params)
    with open(args.out, "w") as fh:
        fh.write(spec.to_json())
    if args.trace:
        for member in spec.members:
            tag = ("two-class" if member.positive_label is None
                   else f"class {member.positive_label} vs rest")
            print(f"== member: {tag} ==")
            print(training_trace(member.oracle).render())
    print(f"wrote {args.out} ({len(spec.members)} member oracle(s))")
    return 0


def _cmd_classify(args) -> int:
    with open(args.model) as fh:
        spec = EnsembleSpec.from_json(fh.read())
    data = _read_dataset(args.data)
    lines = dump_predictions(spec, data.signals)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        print(f"wrote {args.out} ({len(lines)} predictions)")
    else:
        for line in lines:
            print(line)
    if args.score:
        print(score_dataset(spec, data).summary())
    return 0


def _cmd_experiment(args) -> int:
    config = load_config(args.config)
    progress = (None if args.quiet
                else lambda msg: print(msg, file=sys.stderr))
    table = run_experiment(config, progress=progress)
    text = emit_text(table)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        txt_path = os.path.join(args.out, "report.txt")
        csv_path = os.path.join(args.out, "report.csv")
        with open(txt_path, "w") as fh:
            fh.write(text)
        with open(csv_path, "w") as fh:
            fh.write(emit_csv(table))
        print(f"wrote {txt_path} and {csv_path}", file=sys.stderr)
    print(text, end="")
    return 0


def _cmd_dump_filters(args) -> int:
    qmf = build_filter("coiflet", args.taps)
    print(f"family {qmf.family}, {qmf.taps} taps")
    print("low_pass: " + " ".join(repr(float(v)) for v in qmf.low_pass))
    print("high_pass: " + " ".join(repr(float(v)) for v in qmf.high_pass))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldbkit",
        description="Discriminant wavelet-packet bases with dyadic cluster "
                    "oracles: data generation, training, classification, "
                    "and benchmark tables.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write one realization of a synthetic "
                                     "example as train/test dataset files")
    gen.add_argument("--example", required=True, choices=("ex1", "ex2", "ex3"))
    gen.add_argument("--realization", type=int, default=0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--train-per-class", type=int, default=100)
    gen.add_argument("--test-per-class", type=int, default=1000)
    gen.add_argument("--offset", type=float, default=0.0,
                     help="sampling grid phase offset (radians)")
    gen.add_argument("--out-train", required=True)
    gen.add_argument("--out-test", required=True)
    gen.set_defaults(func=_cmd_gen)

    train = sub.add_parser("train", help="train a classifier on a dataset "
                                         "file and serialize it")
    train.add_argument("--data", required=True)
    train.add_argument("--measure", required=True,
                       choices=sorted(_MEASURE_TOKENS))
    train.add_argument("--mode", required=True, choices=("ldb", "mldb"))
    train.add_argument("--taps", type=int, default=18)
    train.add_argument("--depth", type=int, default=None)
    train.add_argument("--K", type=int, default=5)
    train.add_argument("--delta", type=float, default=0.01)
    train.add_argument("--eta", type=float, default=0.05)
    train.add_argument("--mu", type=float, default=0.10)
    train.add_argument("--nu", type=float, default=0.05)
    train.add_argument("--delta-cap", dest="delta_cap", type=float, default=0.5)
    train.add_argument("--regularizer", type=float, default=1e-12)
    train.add_argument("--trace", action="store_true",
                       help="print per-cluster training traces")
    train.add_argument("--out", required=True)
    train.set_defaults(func=_cmd_train)

    classify = sub.add_parser("classify", help="apply a serialized classifier "
                                               "to a dataset file")
    classify.add_argument("--model", required=True)
    classify.add_argument("--data", required=True)
    classify.add_argument("--out", default=None,
                          help="prediction dump path (default: stdout)")
    classify.add_argument("--score", action="store_true",
                          help="also print rate/error against the labels")
    classify.set_defaults(func=_cmd_classify)

    exp = sub.add_parser("experiment", help="run a config-driven benchmark "
                                            "and emit text + csv tables")
    exp.add_argument("--config", required=True)
    exp.add_argument("--out", default=None, help="output directory")
    exp.add_argument("--quiet", action="store_true")
    exp.set_defaults(func=_cmd_experiment)

    dump = sub.add_parser("dump-filters", help="print QMF filter taps")
    dump.add_argument("--taps", type=int, default=18)
    dump.set_defaults(func=_cmd_dump_filters)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LdbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
