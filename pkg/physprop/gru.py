#  gru.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

"""A single-layer GRU regressor for normalized bounce trajectories.

The cell uses the update convention

    z = sigmoid(W_z x + U_z h + b_z)
    r = sigmoid(W_r x + U_r h + b_r)
    c = tanh(W_h x + U_h (r * h) + b_h)
    h' = (1 - z) * h + z * c

starting from h = 0, and the prediction is sigmoid(w_out . h_T + b_out).
Forward and backward passes work on right-padded batches with a step mask,
so sequences of different lengths can share a batch.
"""

from dataclasses import dataclass
import json
import logging
import numpy as np
from scipy.special import expit

from .errors import (EmptySequenceError, EmptyDatasetError,
                     ShapeMismatchError, DataError, SchemaVersionError)
from .util import make_rng, atomic_write

logger = logging.getLogger(__name__)

HIDDEN_SIZE = 32
FORMAT_VERSION = 1
LOSS_EPS = 1e-12
PARAM_NAMES = ("W_z", "U_z", "b_z", "W_r", "U_r", "b_r",
               "W_h", "U_h", "b_h", "w_out", "b_out")


def _shapes(hidden):
    H = hidden
    return {"W_z": (H,), "U_z": (H, H), "b_z": (H,),
            "W_r": (H,), "U_r": (H, H), "b_r": (H,),
            "W_h": (H,), "U_h": (H, H), "b_h": (H,),
            "w_out": (H,), "b_out": (1,)}


@dataclass(frozen=True, eq=False)
class GruParams(object):
    """Weights of the GRU and its output head.

    The input is one scalar per step, so the input weights W_z, W_r and W_h
    are vectors of length H. Recurrent weights are (H, H).
    """

    W_z: np.ndarray
    U_z: np.ndarray
    b_z: np.ndarray
    W_r: np.ndarray
    U_r: np.ndarray
    b_r: np.ndarray
    W_h: np.ndarray
    U_h: np.ndarray
    b_h: np.ndarray
    w_out: np.ndarray
    b_out: np.ndarray

    def __post_init__(self):
        hidden = np.shape(self.W_z)[0] if np.ndim(self.W_z) == 1 else -1
        if hidden < 1:
            raise ShapeMismatchError("W_z must be a nonempty vector")
        for name, shape in _shapes(hidden).items():
            value = np.array(getattr(self, name), dtype=np.float64)
            if value.shape != shape:
                raise ShapeMismatchError("{} has shape {}, expected {}".format(
                    name, value.shape, shape))
            if not np.all(np.isfinite(value)):
                raise ValueError(name + " contains non-finite values")
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def hidden_size(self):
        return len(self.W_z)

    def arrays(self):
        """Get the parameters as a name to array dictionary."""
        return {name: getattr(self, name) for name in PARAM_NAMES}

    @classmethod
    def init(cls, hidden_size=HIDDEN_SIZE, seed=0):
        """Draw initial parameters.

        Gate weights are uniform in +-1/sqrt(H), biases are zero. The output
        head starts at zero, so an untrained model predicts 0.5.
        """
        rng = make_rng(seed)
        bound = 1.0 / np.sqrt(hidden_size)
        values = {}
        for name, shape in _shapes(hidden_size).items():
            if name[0] in "WU":
                values[name] = rng.uniform(-bound, bound, shape)
            else:
                values[name] = np.zeros(shape)
        return cls(**values)

    @classmethod
    def zeros(cls, hidden_size=HIDDEN_SIZE):
        return cls(**{name: np.zeros(shape) for name, shape
                      in _shapes(hidden_size).items()})

    def step(self, grads, learning_rate):
        """Get the parameters after one gradient descent step."""
        return GruParams(**{name: value - learning_rate * grads[name]
                            for name, value in self.arrays().items()})

    def to_dict(self):
        return {name: value.tolist() for name, value in self.arrays().items()}

    @classmethod
    def from_dict(cls, data):
        return cls(**{name: np.asarray(data[name], dtype=np.float64)
                      for name in PARAM_NAMES})


def pad_batch(sequences):
    """Right-pad scalar sequences into a batch.

    Returns:
        tuple: The (B, T) values and the (B, T) step mask.
    """
    sequences = [np.asarray(s, dtype=np.float64).ravel() for s in sequences]
    if not sequences:
        raise EmptyDatasetError("empty batch")
    lengths = [len(s) for s in sequences]
    if min(lengths) < 1:
        raise EmptySequenceError("sequences need at least one sample")
    x = np.zeros((len(sequences), max(lengths)))
    mask = np.zeros_like(x)
    for i, s in enumerate(sequences):
        x[i, :len(s)] = s
        mask[i, :len(s)] = 1.0
    return x, mask


def forward_batch(params, x, mask):
    """Run the GRU over a padded batch.

    Args:
        params (GruParams): The weights.
        x (numpy.ndarray): (B, T) inputs.
        mask (numpy.ndarray): (B, T) with 1 for real steps and 0 for
            padding. Padding must follow the real steps.

    Returns:
        tuple: The (B,) predictions and the cache for `backward_batch`.
    """
    B, T = x.shape
    h = np.zeros((B, params.hidden_size))
    steps = []
    for t in range(T):
        xt = x[:, t:t + 1]
        z = expit(xt * params.W_z + h @ params.U_z.T + params.b_z)
        r = expit(xt * params.W_r + h @ params.U_r.T + params.b_r)
        c = np.tanh(xt * params.W_h + (r * h) @ params.U_h.T + params.b_h)
        m = mask[:, t:t + 1]
        steps.append((xt, h, z, r, c, m))
        h = m * ((1.0 - z) * h + z * c) + (1.0 - m) * h
    pred = expit(h @ params.w_out + params.b_out[0])
    cache = {"hidden_size": params.hidden_size, "steps": steps, "h": h,
             "pred": pred}
    return pred, cache


def backward_batch(params, cache, loss_grad):
    """Backpropagate a loss gradient through time.

    Args:
        params (GruParams): The weights the cache was computed with.
        cache (dict): The cache returned by `forward_batch`.
        loss_grad (array-like): dLoss/dprediction, one value per sequence.

    Returns:
        dict: The gradient for every parameter name.

    Raises:
        ShapeMismatchError: If the cache or `loss_grad` do not fit.
    """
    if cache["hidden_size"] != params.hidden_size:
        raise ShapeMismatchError("cache was computed with another hidden size")
    pred, h_last = cache["pred"], cache["h"]
    g = np.asarray(loss_grad, dtype=np.float64).reshape(-1)
    if g.shape != pred.shape:
        raise ShapeMismatchError("loss gradient has {} entries for {} "
                                 "predictions".format(g.size, pred.size))
    grads = {name: np.zeros_like(value)
             for name, value in params.arrays().items()}

    d_logit = g * pred * (1.0 - pred)
    grads["w_out"] = h_last.T @ d_logit
    grads["b_out"] = np.array([d_logit.sum()])
    dh = d_logit[:, None] * params.w_out[None, :]

    for xt, h, z, r, c, m in reversed(cache["steps"]):
        dh_new = m * dh
        dh_prev = (1.0 - m) * dh + dh_new * (1.0 - z)
        da_h = dh_new * z * (1.0 - c ** 2)
        da_z = dh_new * (c - h) * z * (1.0 - z)
        d_rh = da_h @ params.U_h
        da_r = d_rh * h * r * (1.0 - r)
        dh_prev += d_rh * r + da_z @ params.U_z + da_r @ params.U_r

        for gate, da, hin in (("z", da_z, h), ("r", da_r, h),
                              ("h", da_h, r * h)):
            grads["W_" + gate] += (da * xt).sum(axis=0)
            grads["U_" + gate] += da.T @ hin
            grads["b_" + gate] += da.sum(axis=0)
        dh = dh_prev
    return grads


def gru_forward(params, sequence):
    """Predict from one scalar sequence.

    Args:
        params (GruParams): The weights.
        sequence (array-like): At least one sample.

    Returns:
        tuple: The prediction in (0, 1) and the cache for `gru_backward`.

    Raises:
        EmptySequenceError: If the sequence has no samples.
    """
    x, mask = pad_batch([sequence])
    pred, cache = forward_batch(params, x, mask)
    return float(pred[0]), cache


def gru_backward(params, cache, loss_grad):
    """Gradients of a scalar loss given dLoss/dprediction for one sequence."""
    return backward_batch(params, cache, np.atleast_1d(loss_grad))


def _l1(pred, target):
    return np.abs(pred - target), np.sign(pred - target)


def _log_l1(pred, target):
    p = np.maximum(pred, LOSS_EPS)
    diff = np.log(p) - np.log(np.maximum(target, LOSS_EPS))
    return np.abs(diff), np.sign(diff) / p


def _bce(pred, target):
    p = np.clip(pred, LOSS_EPS, 1.0 - LOSS_EPS)
    loss = -(target * np.log(p) + (1.0 - target) * np.log(1.0 - p))
    return loss, (p - target) / (p * (1.0 - p))


LOSSES = {"L1": _l1, "LogL1": _log_l1, "BCE": _bce}


def loss_and_grad(kind, pred, target):
    """Mean loss over a batch and its gradient per prediction."""
    values, grads = LOSSES[kind](np.asarray(pred), np.asarray(target))
    return float(values.mean()), grads / len(values)


@dataclass(frozen=True)
class TrainConfig(object):
    """Settings for `train`.

    Attributes:
        learning_rate (float): SGD step size.
        batch_size (int): Sequences per step.
        epochs (int): Passes over the dataset.
        seed (int): Seeds initialization and the batch permutations.
        loss (str): One of "L1", "LogL1" or "BCE".
        hidden_size (int): Width H of the hidden state.
    """

    learning_rate: float = 1e-3
    batch_size: int = 128
    epochs: int = 100
    seed: int = 0
    loss: str = "L1"
    hidden_size: int = HIDDEN_SIZE

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if self.epochs < 0:
            raise ValueError("epochs must not be negative")
        if self.hidden_size < 1:
            raise ValueError("hidden_size must be at least 1")
        if self.loss not in LOSSES:
            raise ValueError("unknown loss {!r}, use one of {}".format(
                self.loss, ", ".join(LOSSES)))


def _as_sequence(item):
    # trajectories are fed through their key-point aligned resampling
    readout = getattr(item, "readout", None)
    values = readout() if callable(readout) else item
    return np.asarray(values, dtype=np.float64)


class GruTrainer(object):
    """Mini-batch SGD on (trajectory, target) pairs.

    The loss over the whole dataset is recorded once before training and
    after every epoch in `history`.

    Args:
        config (TrainConfig): The training settings.
        params (Optional[GruParams]): Parameters to start from. Drawn from
            `config.seed` if None.
    """

    def __init__(self, config, params=None):
        self.config = config
        self.rng = make_rng(config.seed)
        self.params = params if params is not None else \
            GruParams.init(config.hidden_size, seed=config.seed)
        self.history = []

    def loss(self, x, mask, targets):
        pred, _ = forward_batch(self.params, x, mask)
        return loss_and_grad(self.config.loss, pred, targets)[0]

    def fit(self, sequences, targets):
        """Train on the given sequences.

        Args:
            sequences (list): Scalar series or `NormalizedTrajectory`
                objects.
            targets (array-like): One target per sequence.

        Returns:
            GruParams: The final parameters.

        Raises:
            EmptyDatasetError: If there is nothing to train on.
        """
        sequences = [_as_sequence(s) for s in sequences]
        targets = np.asarray(targets, dtype=np.float64)
        if len(sequences) == 0:
            raise EmptyDatasetError("no training sequences")
        if len(targets) != len(sequences):
            raise ShapeMismatchError("need one target per sequence")
        x, mask = pad_batch(sequences)
        cfg = self.config
        self.history.append(self.loss(x, mask, targets))
        for epoch in range(cfg.epochs):
            order = self.rng.permutation(len(sequences))
            for start in range(0, len(order), cfg.batch_size):
                idx = order[start:start + cfg.batch_size]
                # trim padding shared by the whole batch
                T = int(mask[idx].sum(axis=1).max())
                pred, cache = forward_batch(self.params, x[idx, :T],
                                            mask[idx, :T])
                _, grad = loss_and_grad(cfg.loss, pred, targets[idx])
                grads = backward_batch(self.params, cache, grad)
                self.params = self.params.step(grads, cfg.learning_rate)
            self.history.append(self.loss(x, mask, targets))
            logger.debug("epoch %d: %s loss %.6g", epoch + 1, cfg.loss,
                         self.history[-1])
        return self.params


def train(config, dataset):
    """Train a GRU on (trajectory, target) pairs.

    Args:
        config (TrainConfig): The training settings.
        dataset (list): Pairs of a scalar series (or `NormalizedTrajectory`)
            and its target.

    Returns:
        GruParams: The trained parameters. Equal seeds give equal results.
    """
    if len(dataset) == 0:
        raise EmptyDatasetError("no training pairs")
    sequences, targets = zip(*dataset)
    return GruTrainer(config).fit(sequences, targets)


def save_checkpoint(params, path):
    """Write parameters as a versioned JSON document."""
    doc = {"format_version": FORMAT_VERSION,
           "hidden_size": params.hidden_size,
           "params": params.to_dict()}
    atomic_write(path, json.dumps(doc, sort_keys=True) + "\n")


def load_checkpoint(path):
    """Read parameters written by `save_checkpoint`.

    Raises:
        SchemaVersionError: If the format version is not supported.
        DataError: If the document is malformed.
    """
    with open(path, encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as err:
            raise DataError("{} is not a checkpoint: {}".format(path, err))
    if doc.get("format_version") != FORMAT_VERSION:
        raise SchemaVersionError("unsupported checkpoint version {!r}".format(
            doc.get("format_version")))
    try:
        params = GruParams.from_dict(doc["params"])
    except (KeyError, TypeError, ValueError) as err:
        raise DataError("malformed checkpoint {}: {}".format(path, err))
    if params.hidden_size != doc.get("hidden_size"):
        raise DataError("checkpoint hidden size does not match its weights")
    return params
