#  evaluate.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

"""Run estimators over dataset splits and write reports.

Estimators that fail on a record (no bounce found, too few frames, ...)
are logged and counted in the report, together with the fraction of the
split they make up. Failed records are left out of the metric, relative
pairs are only drawn among the records that succeeded. A split where more
than `FAILURE_WARNING` of the records fail is flagged with a warning.
"""

from concurrent.futures import ThreadPoolExecutor
import glob
import json
import logging
import os
import pandas as pd

from .dataset import (SPLIT_CODE, load_manifest, read_records,
                      SCHEMA_VERSION, check_schema)
from .errors import (EstimationError, FrameRangeError, DataError,
                     DegenerateConfigurationError, PointAtInfinityError,
                     EstimatorMismatchError, InsufficientSamplesError)
from .gru import GruTrainer, load_checkpoint, save_checkpoint
from .metrics import EvalReport, build_relative_pairs, evaluate_pairs
from .observe import subsample_frames
from .oracle import (normalize_trajectory, estimate_elasticity_ratio,
                     estimate_elasticity_gru, estimate_viscosity,
                     estimate_friction, relative_score)
from .util import derive_seed, thread_count, atomic_write

logger = logging.getLogger(__name__)

ESTIMATORS = {
    "ratio-oracle": "elasticity",
    "gru": "elasticity",
    "slope-oracle": "viscosity",
    "parabola-oracle": "friction",
}
TASKS = ("relative", "absolute")
TEST_SPLITS = ("test-1", "test-2")
CHECKPOINT = "gru.json"
TRAINING_CURVE = "gru-training.csv"
PAIR_KEY = 3
FAILURE_WARNING = 0.1      # failure rate above which a split is flagged

# errors that only disqualify a single record
RECORD_FAILURES = (EstimationError, FrameRangeError,
                   DegenerateConfigurationError, PointAtInfinityError)


def observations(record, frames=None):
    """Get a record's observations, optionally cut to `frames` frames."""
    obs = record.observations
    return obs if frames is None else subsample_frames(obs, frames)


def trajectory(record, frames=None):
    """Normalized ball trajectory of an elasticity record."""
    obs = observations(record, frames)
    return normalize_trajectory(obs.heights, obs.times,
                                noise_sigma=obs.noise_sigma)


def predict(record, estimator, model=None, frames=None):
    """Run one estimator on one record.

    Args:
        record (DatasetRecord): The record.
        estimator (str): A key of `ESTIMATORS`.
        model (Optional[GruParams]): Parameters for the "gru" estimator.
        frames (Optional[int]): Subsample the video to this many frames.

    Returns:
        Estimate: The prediction.
    """
    if estimator == "ratio-oracle":
        return estimate_elasticity_ratio(trajectory(record, frames))
    elif estimator == "gru":
        return estimate_elasticity_gru(trajectory(record, frames), model)
    obs = observations(record, frames)
    if estimator == "slope-oracle":
        return estimate_viscosity(obs.areas, obs.times)
    elif estimator == "parabola-oracle":
        scene = record.scene
        return estimate_friction(obs.corners, obs.times, scene.cube_size,
                                 scene.gravity)
    raise ValueError("unknown estimator " + repr(estimator))


def _try_predict(record, estimator, model, frames):
    try:
        return predict(record, estimator, model, frames)
    except RECORD_FAILURES as err:
        logger.warning("%s failed on %s: %s", estimator, record.record_id,
                       err)
        return None


def evaluate_split(records, estimator, task, model=None, frames=None,
                   n_pairs=None, seed=0):
    """Evaluate an estimator on the records of one split.

    Args:
        records (list): The split's `DatasetRecord` objects.
        estimator (str): A key of `ESTIMATORS`.
        task (str): "relative" or "absolute".
        model (Optional[GruParams]): Parameters for the "gru" estimator.
        frames (Optional[int]): Subsample videos to this many frames.
        n_pairs (Optional[int]): Relative pairs to draw, all if None.
        seed (Optional[int]): Seed of the pair draw.

    Returns:
        EvalReport: The metric with its raw pairs.

    Raises:
        DataError: If fewer than two records could be estimated.
    """
    if task not in TASKS:
        raise ValueError("unknown task " + repr(task))
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        estimates = list(pool.map(
            lambda r: _try_predict(r, estimator, model, frames), records))
    ok = [(r, e) for r, e in zip(records, estimates) if e is not None]
    failures = len(records) - len(ok)
    if len(ok) < 2:
        raise DataError("{} produced fewer than two estimates".format(
            estimator))

    if task == "absolute":
        pairs = [(e.value, r.ground_truth) for r, e in ok]
    else:
        groups = {}
        for r, _ in ok:
            groups.setdefault(r.group, []).append((r.record_id,
                                                   r.ground_truth))
        by_id = {r.record_id: e for r, e in ok}
        try:
            drawn = build_relative_pairs(groups, n_pairs, seed)
        except InsufficientSamplesError as err:
            raise DataError(str(err))
        pairs = [(relative_score(by_id[a], by_id[b]), label)
                 for a, b, label in drawn]
    split = records[0].split
    value = evaluate_pairs(task, pairs)
    report = EvalReport(records[0].property, split, estimator, task, value,
                        len(pairs), failures, pairs,
                        record_count=len(records))
    logger.info("%s %s on %s: %.4f (%d samples, %d failures, %.1f%%)",
                estimator, task, split, value, len(pairs), failures,
                100.0 * report.failure_rate)
    if report.failure_rate > FAILURE_WARNING:
        logger.warning("%s failed on %.1f%% of %s, the metric only covers "
                       "the remaining records", estimator,
                       100.0 * report.failure_rate, split)
    return report


def report_name(report):
    return "report-{}-{}-{}.json".format(report.estimator, report.task,
                                         report.split)


def pairs_name(report):
    return "pairs-{}-{}-{}.csv".format(report.estimator, report.task,
                                       report.split)


def write_report(report, directory):
    """Write a report and its raw pairs into `directory`."""
    doc = dict(report.to_dict(), schema_version=SCHEMA_VERSION)
    atomic_write(os.path.join(directory, report_name(report)),
                 json.dumps(doc, sort_keys=True, indent=2) + "\n")
    atomic_write(os.path.join(directory, pairs_name(report)),
                 report.pairs_frame().to_csv(index=False))


def cmd_evaluate(directory, estimator, task, checkpoint=None, frames=None,
                 out=None, splits=TEST_SPLITS):
    """Evaluate an estimator on the test splits of a dataset.

    Args:
        directory (str): The dataset directory.
        estimator (str): A key of `ESTIMATORS`.
        task (str): "relative" or "absolute".
        checkpoint (Optional[str]): GRU checkpoint, `gru.json` in the
            dataset directory by default.
        frames (Optional[int]): Subsample videos to this many frames.
        out (Optional[str]): Where reports go, the dataset directory by
            default.
        splits (Optional[tuple]): The splits to evaluate.

    Returns:
        list: One `EvalReport` per split.

    Raises:
        EstimatorMismatchError: If the estimator does not fit the dataset.
    """
    if estimator not in ESTIMATORS:
        raise ValueError("unknown estimator {!r}, use one of {}".format(
            estimator, ", ".join(ESTIMATORS)))
    manifest = load_manifest(directory)
    if ESTIMATORS[estimator] != manifest["property"]:
        raise EstimatorMismatchError("{} estimates {}, the dataset holds "
                                     "{}".format(estimator,
                                                 ESTIMATORS[estimator],
                                                 manifest["property"]))
    model = None
    if estimator == "gru":
        path = checkpoint or os.path.join(directory, CHECKPOINT)
        if not os.path.exists(path):
            raise DataError("no GRU checkpoint at {}, run train-gru "
                            "first".format(path))
        model = load_checkpoint(path)
    out = out or directory
    os.makedirs(out, exist_ok=True)

    reports = []
    for split in splits:
        records = read_records(directory, split, manifest)
        seed = derive_seed(manifest["seed"], SPLIT_CODE[split], PAIR_KEY)
        report = evaluate_split(records, estimator, task, model, frames,
                                manifest["pairs_per_split"], seed)
        write_report(report, out)
        reports.append(report)
    return reports


def cmd_train_gru(directory, config, checkpoint=None, frames=None):
    """Train the GRU elasticity readout on the training split.

    Only the manifest and the training split are read.

    Args:
        directory (str): The dataset directory.
        config (TrainConfig): The training settings.
        checkpoint (Optional[str]): Output path, `gru.json` in the dataset
            directory by default. The training curve is written next to it.
        frames (Optional[int]): Subsample videos to this many frames.

    Returns:
        GruTrainer: The trainer holding the parameters and loss history.
    """
    manifest = load_manifest(directory)
    if manifest["property"] != "elasticity":
        raise EstimatorMismatchError("the GRU readout is trained on "
                                     "elasticity datasets only")
    sequences, targets = [], []
    for record in read_records(directory, "train", manifest):
        try:
            sequences.append(trajectory(record, frames))
        except RECORD_FAILURES as err:
            logger.warning("skipping %s: %s", record.record_id, err)
            continue
        targets.append(record.ground_truth)
    trainer = GruTrainer(config)
    trainer.fit(sequences, targets)

    path = checkpoint or os.path.join(directory, CHECKPOINT)
    save_checkpoint(trainer.params, path)
    curve = pd.DataFrame({"epoch": range(len(trainer.history)),
                          "loss": trainer.history})
    atomic_write(os.path.join(os.path.dirname(os.path.abspath(path)),
                              TRAINING_CURVE), curve.to_csv(index=False))
    logger.info("trained GRU on %d sequences, final %s loss %.6g",
                len(sequences), config.loss, trainer.history[-1])
    return trainer


def cmd_report(directory):
    """Collect the report files of a directory into one table.

    Rows are (property, estimator, task, metric), columns the splits. The
    table is also written to `table.csv`.

    Returns:
        pandas.DataFrame: The table.

    Raises:
        DataError: If there are no reports.
    """
    rows = []
    for path in sorted(glob.glob(os.path.join(directory, "report-*.json"))):
        with open(path, encoding="utf-8") as handle:
            try:
                doc = json.load(handle)
            except json.JSONDecodeError as err:
                raise DataError("malformed report {}: {}".format(path, err))
        check_schema(doc, path)
        rows.append(doc)
    if not rows:
        raise DataError("no reports in " + directory)
    frame = pd.DataFrame(rows)
    table = frame.pivot_table(index=["property", "estimator", "task",
                                     "metric"],
                              columns="split", values="value",
                              aggfunc="first").reset_index()
    table.columns.name = None
    atomic_write(os.path.join(directory, "table.csv"),
                 table.to_csv(index=False))
    return table
