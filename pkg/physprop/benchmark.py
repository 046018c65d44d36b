#  benchmark.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

"""Benchmark the oracles by generating and evaluating desk-scale datasets."""

import os
from tempfile import TemporaryDirectory
from time import time_ns
from rich import print as rprint

from .dataset import RunConfig, cmd_generate
from .evaluate import cmd_evaluate, TASKS

ORACLES = {
    "elasticity": "ratio-oracle",
    "viscosity": "slope-oracle",
    "friction": "parabola-oracle",
}
BENCHMARK_SIZES = {"train": 1, "test-1": 100, "test-2": 100}


def _timed(label, fn, *args, **kwargs):
    rprint("Running {}...".format(label), end=" ")
    start = time_ns()
    result = fn(*args, **kwargs)
    elapsed = time_ns() - start
    rprint(f"[green]:heavy_check_mark: [{1e-9 * elapsed:.3g} s]")
    return result


def benchmark(out=None, noise_sigma=0.0, seed=0, properties=tuple(ORACLES),
              split_sizes=None):
    """Generate test splits for each property and evaluate its oracle.

    Args:
        out (Optional[str]): Directory for the datasets and reports. A
            temporary directory is used and removed if None.
        noise_sigma (Optional[float]): Pixel noise of the observations.
        seed (Optional[int]): Run seed.
        properties (Optional[tuple]): The properties to benchmark.
        split_sizes (Optional[dict]): Records per split. Only one training
            record is generated by default since oracles need no training.

    Returns:
        dict: Maps (property, task) to the list of `EvalReport` per split.
    """
    sizes = split_sizes or BENCHMARK_SIZES
    with TemporaryDirectory() as tmp:
        root = out or tmp
        results = {}
        for prop in properties:
            rprint(f"Running [green]setup[/green] for `{prop}`.")
            directory = os.path.join(root, prop)
            config = RunConfig(property=prop, split_sizes=sizes,
                               noise_sigma=noise_sigma, seed=seed,
                               out=directory)
            _timed("{} generation".format(prop), cmd_generate, config)
            for task in TASKS:
                reports = _timed("{} {} evaluation".format(ORACLES[prop], task),
                                 cmd_evaluate, directory, ORACLES[prop], task)
                for report in reports:
                    rprint(f"  {report.split}: {report.metric} = "
                           f"{report.value:.4f} ({report.sample_count} "
                           f"samples, {report.failures} failures, "
                           f"{report.failure_rate:.1%})")
                results[(prop, task)] = reports
    return results
