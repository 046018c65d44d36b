#  cli.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

"""The `physprop` command line interface.

Exit codes are 0 on success, 1 for usage errors and invalid settings, 2 for
missing or malformed data and 3 if a metric is not finite.
"""

import argparse
import json
import logging
import sys
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .benchmark import benchmark
from .dataset import RunConfig, SPLITS, cmd_generate
from .errors import DataError, NumericFailure
from .evaluate import ESTIMATORS, TASKS, cmd_evaluate, cmd_train_gru, \
    cmd_report
from .gru import TrainConfig, LOSSES, HIDDEN_SIZE
from .scene import PROPERTIES

logger = logging.getLogger("physprop")
console = Console(stderr=True)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """Argument parser that exits with code 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "{}: error: {}\n".format(self.prog, message))


def split_sizes(text):
    """Parse "train,test-1,test-2" record counts."""
    try:
        sizes = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("expected three integers")
    if len(sizes) != len(SPLITS):
        raise argparse.ArgumentTypeError("expected three integers")
    return dict(zip(SPLITS, sizes))


def build_parser():
    parser = _Parser(prog="physprop", description=(
        "Generate synthetic physics videos and score property estimators "
        "on them."))
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log per-record details")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a dataset")
    gen.add_argument("--property", choices=PROPERTIES)
    gen.add_argument("--split-sizes", type=split_sizes,
                     default=split_sizes("200,100,100"),
                     help="records for train,test-1,test-2")
    gen.add_argument("--noise-sigma", type=float, default=1.0,
                     help="pixel noise of the observations")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default="data", help="dataset directory")
    gen.add_argument("--group-size", type=int, default=4,
                     help="videos sharing one viewpoint")
    gen.add_argument("--pairs", type=int, default=200,
                     help="relative pairs per test split")
    gen.add_argument("--manifest",
                     help="regenerate the dataset described by a manifest")

    ev = sub.add_parser("evaluate", help="evaluate an estimator")
    ev.add_argument("dataset", help="dataset directory")
    ev.add_argument("--estimator", choices=tuple(ESTIMATORS), required=True)
    ev.add_argument("--task", choices=TASKS, default="relative")
    ev.add_argument("--frames", type=int,
                    help="subsample every video to this many frames")
    ev.add_argument("--checkpoint", help="GRU checkpoint to use")
    ev.add_argument("--out", help="report directory")

    tr = sub.add_parser("train-gru", help="train the GRU elasticity readout")
    tr.add_argument("dataset", help="dataset directory")
    tr.add_argument("--lr", type=float, default=1e-3)
    tr.add_argument("--batch-size", type=int, default=128)
    tr.add_argument("--epochs", type=int, default=100)
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--loss", choices=tuple(LOSSES), default="L1")
    tr.add_argument("--hidden-size", type=int, default=HIDDEN_SIZE)
    tr.add_argument("--frames", type=int,
                    help="subsample every video to this many frames")
    tr.add_argument("--checkpoint", help="where to write the parameters")

    rep = sub.add_parser("report", help="tabulate the reports of a directory")
    rep.add_argument("directory")

    bench = sub.add_parser("benchmark", help="run all oracles end to end")
    bench.add_argument("--out", help="keep datasets and reports here")
    bench.add_argument("--noise-sigma", type=float, default=0.0)
    bench.add_argument("--seed", type=int, default=0)
    return parser


def _generate(args):
    if args.manifest:
        with open(args.manifest, encoding="utf-8") as handle:
            try:
                manifest = json.load(handle)
            except json.JSONDecodeError as err:
                raise DataError("malformed manifest: {}".format(err))
        config = RunConfig.from_manifest(manifest, args.out)
    elif args.property is None:
        raise ValueError("--property is required without --manifest")
    else:
        config = RunConfig(property=args.property,
                           split_sizes=args.split_sizes,
                           noise_sigma=args.noise_sigma, seed=args.seed,
                           out=args.out, group_size=args.group_size,
                           pairs_per_split=args.pairs)
    cmd_generate(config)
    console.print("Wrote {} dataset to {}.".format(config.property,
                                                  config.out))


def _evaluate(args):
    for report in cmd_evaluate(args.dataset, args.estimator, args.task,
                               checkpoint=args.checkpoint,
                               frames=args.frames, out=args.out):
        console.print("{}: {} = {:.4f} ({} samples, {} failures, "
                      "{:.1%})".format(report.split, report.metric,
                                       report.value, report.sample_count,
                                       report.failures, report.failure_rate))


def _train(args):
    config = TrainConfig(learning_rate=args.lr, batch_size=args.batch_size,
                         epochs=args.epochs, seed=args.seed, loss=args.loss,
                         hidden_size=args.hidden_size)
    trainer = cmd_train_gru(args.dataset, config, checkpoint=args.checkpoint,
                            frames=args.frames)
    console.print("Final {} loss {:.6g}.".format(config.loss,
                                                 trainer.history[-1]))


def _report(args):
    frame = cmd_report(args.directory)
    table = Table(title="Estimator results")
    for column in frame.columns:
        table.add_column(str(column))
    for row in frame.itertuples(index=False):
        table.add_row(*("{:.4f}".format(v) if isinstance(v, float) else str(v)
                        for v in row))
    Console().print(table)


def _benchmark(args):
    benchmark(out=args.out, noise_sigma=args.noise_sigma, seed=args.seed)


COMMANDS = {
    "generate": _generate,
    "evaluate": _evaluate,
    "train-gru": _train,
    "report": _report,
    "benchmark": _benchmark,
}


def main(argv=None):
    """Run the command line interface and return the exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(message)s", datefmt="[%X]",
        handlers=[RichHandler(console=console)])
    try:
        COMMANDS[args.command](args)
    except NumericFailure as err:
        logger.error("numeric failure: %s", err)
        return EXIT_NUMERIC
    except (DataError, OSError) as err:
        logger.error("%s", err)
        return EXIT_DATA
    except ValueError as err:
        logger.error("invalid settings: %s", err)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
