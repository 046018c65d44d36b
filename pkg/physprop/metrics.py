#  metrics.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

"""Evaluation metrics.

Relative comparisons are scored with the ROC AUC of the decision scores,
absolute predictions with the Pearson correlation to the ground truth. The
Pearson coefficient ignores any positive affine map of the predictions, so
uncalibrated estimators (like the viscosity oracle) can be compared
directly.
"""

from dataclasses import dataclass, field
import numpy as np
import pandas as pd
from scipy.stats import rankdata, pearsonr

from .errors import (SingleClassError, ZeroVarianceError,
                     InsufficientSamplesError, ShapeMismatchError,
                     NumericFailure)
from .util import make_rng

METRICS = {"relative": "roc_auc", "absolute": "pearson"}


def roc_auc(scores, labels):
    """Area under the ROC curve.

    Computed as the Mann-Whitney U statistic on midranks, so a positive
    tied with a negative counts 1/2.

    Args:
        scores (array-like): Decision scores, larger means more positive.
        labels (array-like): Binary labels.

    Returns:
        float: The probability that a random positive outscores a random
            negative.

    Raises:
        SingleClassError: If only one class is present.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels).astype(bool)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ShapeMismatchError("need one label per score")
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassError("need positive and negative labels")
    ranks = rankdata(scores)
    u = ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def pearson(pred, gt, log=False):
    """Pearson correlation between predictions and ground truth.

    Args:
        pred (array-like): Predictions.
        gt (array-like): Ground truth values.
        log (Optional[bool]): Correlate the logarithms instead. Both series
            must then be positive.

    Returns:
        float: The coefficient in [-1, 1].

    Raises:
        ZeroVarianceError: If either series is constant.
    """
    pred = np.asarray(pred, dtype=float)
    gt = np.asarray(gt, dtype=float)
    if pred.shape != gt.shape or pred.ndim != 1:
        raise ShapeMismatchError("need one prediction per ground truth value")
    if len(pred) < 2:
        raise InsufficientSamplesError("need at least two samples")
    if log:
        if np.any(pred <= 0) or np.any(gt <= 0):
            raise ValueError("log correlation needs positive values")
        pred, gt = np.log(pred), np.log(gt)
    if np.ptp(pred) == 0 or np.ptp(gt) == 0:
        raise ZeroVarianceError("correlation input has no variance")
    r = pearsonr(pred, gt)[0]
    return float(np.clip(r, -1.0, 1.0))


def build_relative_pairs(groups, n_pairs=None, seed=0):
    """Draw labeled ordered pairs within viewpoint groups.

    Every ordered pair (a, b), a != b, of members of the same group is a
    candidate. Members of different groups are never paired.

    Args:
        groups (dict): Maps a group key to a list of (member key, true value)
            tuples.
        n_pairs (Optional[int]): How many candidates to keep, all if None or
            if fewer exist.
        seed (Optional[int]): Seed of the subsampling.

    Returns:
        list: (first key, second key, label) tuples with label 1 iff the
            first member's value is larger, in candidate order.

    Raises:
        InsufficientSamplesError: If no group has two members.
    """
    candidates = []
    for key in sorted(groups):
        members = groups[key]
        for i, (a, va) in enumerate(members):
            for j, (b, vb) in enumerate(members):
                if i != j:
                    candidates.append((a, b, int(va > vb)))
    if not candidates:
        raise InsufficientSamplesError("relative pairs need a group with "
                                       "two members")
    if n_pairs is None or n_pairs >= len(candidates):
        return candidates
    keep = make_rng(seed).choice(len(candidates), size=n_pairs, replace=False)
    return [candidates[k] for k in np.sort(keep)]


@dataclass
class EvalReport(object):
    """Result of one estimator on one split.

    Attributes:
        property (str): The property evaluated.
        split (str): The split id.
        estimator (str): The estimator name.
        task (str): "relative" or "absolute".
        value (float): ROC AUC for relative, Pearson for absolute.
        sample_count (int): Pairs or records that entered the metric.
        failures (int): Records the estimator failed on.
        pairs (list): (score, label) or (prediction, ground truth) tuples.
        record_count (int): Records in the split, 0 if unknown.
    """

    property: str
    split: str
    estimator: str
    task: str
    value: float
    sample_count: int
    failures: int = 0
    pairs: list = field(default_factory=list)
    record_count: int = 0

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise NumericFailure("{} is not finite".format(self.metric))
        if self.sample_count < 2:
            raise InsufficientSamplesError("a report needs two samples")

    @property
    def metric(self):
        return METRICS[self.task]

    @property
    def failure_rate(self):
        """Fraction of the split's records the estimator failed on."""
        if self.record_count == 0:
            return 0.0
        return self.failures / self.record_count

    def to_dict(self):
        return {"estimator": self.estimator, "failures": self.failures,
                "failure_rate": self.failure_rate, "metric": self.metric,
                "property": self.property, "record_count": self.record_count,
                "sample_count": self.sample_count, "split": self.split,
                "task": self.task, "value": self.value}

    def pairs_frame(self):
        """Get the raw pairs as a data frame ready for scatter plots."""
        columns = ["score", "label"] if self.task == "relative" else \
            ["prediction", "ground_truth"]
        return pd.DataFrame(self.pairs, columns=columns)


def evaluate_pairs(task, pairs):
    """Compute the metric of a task from its raw pairs.

    Returns:
        float: The ROC AUC of (score, label) pairs for "relative", the
            Pearson correlation of (prediction, ground truth) pairs for
            "absolute".
    """
    if len(pairs) < 2:
        raise InsufficientSamplesError("need at least two pairs")
    first, second = (np.array(col, dtype=float) for col in zip(*pairs))
    if task == "relative":
        return roc_auc(first, second)
    elif task == "absolute":
        return pearson(first, second)
    raise ValueError("unknown task " + repr(task))
