#  oracle.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

"""Oracle estimators for elasticity, viscosity and friction.

The oracles read exactly the cue that carries each property:

- elasticity from the ratio of bounce height to drop height of the ball's
  image trajectory, e = sqrt(h_bounce / h_drop),
- viscosity from the growth rate k of the liquid's normalized image area,
  mu ~ 1 / k,
- friction from the deceleration a of the cube in a bird's eye view of the
  ground plane, mu_k = a / g.

Relative comparisons of two videos use score = sigmoid(log(e1 / e2)).
"""

from dataclasses import dataclass
import logging
import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import expit

from .camera import estimate_homography, apply_homography
from .errors import (NoBounceDetectedError, InsufficientSamplesError,
                     NonPositiveSlopeError, WrongCurvatureError,
                     NonPositiveEstimateError, NonFiniteEstimateError,
                     ModelNotTrainedError)
from .scene import GRAVITY

logger = logging.getLogger(__name__)

SMOOTH_WINDOW = 3
NOISE_FLOOR = 3.0           # in units of the pixel noise sigma
CONTACT_THRESHOLD = 0.01    # relative area growth marking liquid contact
MIN_POST_CONTACT = 5
MIN_MOVING_FRAMES = 5
MIN_REST_FRAMES = 5
STOP_SEARCH = 10            # candidate stop times per frame period
STOP_TOL = 1e-12            # seconds
CURVATURE_TOL = 1e-9
SNAP_TOL = 1e-9             # seconds
REFINE_PASSES = 3
READOUT_POINTS = 16         # GRU input samples per trajectory segment


@dataclass(frozen=True)
class Estimate(object):
    """A property value predicted by one estimator.

    Attributes:
        value (float): The prediction in property units (viscosity up to
            a common scale).
        kind (str): The property.
        estimator (str): Which estimator produced the value.
    """

    value: float
    kind: str
    estimator: str

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        if not np.isfinite(self.value):
            raise NonFiniteEstimateError("estimate is not finite")

    def __float__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class NormalizedTrajectory(object):
    """A ball height series rescaled so contact is 0 and the drop is 1.

    Attributes:
        values (numpy.ndarray): The normalized heights.
        times (numpy.ndarray): The sample times.
        drop_idx (int): Index of the release sample.
        contact_idx (int): Index of the first ground contact.
        peak_idx (int): Index of the apex of the first bounce.
        refined (bool): Whether contact and apex were located below the
            frame period and spliced into the series.
    """

    values: np.ndarray
    times: np.ndarray
    drop_idx: int
    contact_idx: int
    peak_idx: int
    refined: bool = False

    def __post_init__(self):
        if not 0 <= self.drop_idx < self.contact_idx < self.peak_idx:
            raise NoBounceDetectedError("key points out of order")
        if self.peak_idx >= len(self.values):
            raise NoBounceDetectedError("peak index out of range")

    @property
    def peak_value(self):
        return float(self.values[self.peak_idx])

    def readout(self, points=READOUT_POINTS):
        """Resample the series for the GRU readout.

        `points` samples are taken at equal time steps from the drop up to
        the contact and as many from the contact to the apex, by linear
        interpolation. Every trajectory thus gives a sequence of the same
        length that starts at 1, passes 0 at the contact and ends on the
        apex.

        Returns:
            numpy.ndarray: The (2 * points,) input sequence.
        """
        t = self.times
        fall = np.linspace(t[self.drop_idx], t[self.contact_idx], points,
                           endpoint=False)
        rise = np.linspace(t[self.contact_idx], t[self.peak_idx], points)
        return np.interp(np.concatenate([fall, rise]), t, self.values)


def smooth(y, window=SMOOTH_WINDOW):
    """Centered moving average that repeats the edge values."""
    y = np.asarray(y, dtype=float)
    if window <= 1:
        return y.copy()
    pad = window // 2
    padded = np.pad(y, pad, mode="edge")
    return np.convolve(padded, np.ones(window) / window, mode="valid")


def _first_contact(s, floor):
    """Internal function finding the first ground contact in a smoothed
    height series.

    A contact is a local minimum below the start that is followed by a rise
    of more than `floor` before the series drops under it again.

    Returns:
        tuple: (contact index, end of the bounce) or None.
    """
    n = len(s)
    i = 1
    while i < n - 1:
        if s[i] < s[i - 1] and s[i] <= s[i + 1] and s[i] < s[0] - floor:
            below = np.nonzero(s[i + 1:] < s[i])[0]
            end = i + 1 + below[0] if len(below) else n
            if s[i + 1:end].max() > s[i] + floor:
                return i, end
            i = end
        else:
            i += 1
    return None


def _snap(y, idx, fn):
    lo, hi = max(idx - 1, 0), min(idx + 2, len(y))
    return lo + int(fn(y[lo:hi]))


def _refine(y, t, ci, pi):
    """Internal function locating contact and apex below the frame period.

    The free fall before contact and the flight after it are parabolas in
    time with the same curvature (exactly so in a fronto-parallel view).
    The descent fit gives that curvature, the flight is then fit with it
    held fixed, which needs only two samples. Both frame sets are updated
    from the fitted contact time until they stop changing, so a contact
    index that noise moved by a frame does not leak flight samples into
    the descent.

    Returns:
        tuple: (drop level, contact time, contact level, apex time, apex
            level) or None if the series does not support the fit.
    """
    if ci < 3:
        return None
    descent = np.arange(ci)
    flight = np.arange(ci + 1, max(pi, ci + 2) + 1)
    if flight[-1] >= len(y):
        return None
    for _ in range(REFINE_PASSES):
        a, b_d, c_d = np.polyfit(t[descent], y[descent], 2)
        if not a < 0:
            return None
        for _ in range(3):
            b_a, c_a = np.polyfit(t[flight], y[flight] - a * t[flight] ** 2,
                                  1)
            if b_a == b_d:
                return None
            t_c = (c_a - c_d) / (b_d - b_a)
            t_2 = -b_a / a - t_c
            frames = np.nonzero((t > t_c + SNAP_TOL) &
                                (t < t_2 - SNAP_TOL))[0]
            if len(frames) < 2 or np.array_equal(frames, flight):
                break
            flight = frames
        before = np.nonzero(t < t_c - SNAP_TOL)[0]
        if len(before) < 3 or np.array_equal(before, descent):
            break
        descent = before
    t_v = -b_a / (2.0 * a)
    y_c = a * t_c ** 2 + b_a * t_c + c_a
    y_p = c_a - b_a ** 2 / (4.0 * a)
    y_d = a * t[0] ** 2 + b_d * t[0] + c_d
    if not (t[0] < t_c < t_v and y_p > y_c and y_d > y_c):
        return None
    if abs(t_c - t[ci]) > 2.0 * (t[ci] - t[ci - 1]):
        return None
    return y_d, t_c, y_c, t_v, y_p


def _splice(values, times, t_new, v_new):
    """Internal function inserting a sample, or overwriting a coincident one.

    Returns:
        tuple: (values, times, index of the sample)
    """
    k = int(np.searchsorted(times, t_new))
    for j in (k - 1, k):
        if 0 <= j < len(times) and abs(times[j] - t_new) < SNAP_TOL:
            values = values.copy()
            values[j] = v_new
            return values, times, j
    return np.insert(values, k, v_new), np.insert(times, k, t_new), k


def normalize_trajectory(y_series, times=None, noise_sigma=0.0, refine=True,
                         fps=60.0):
    """Normalize a ball's image height series.

    Key points are detected on a moving average of the series (window 3;
    noiseless series are used as they are) and snapped to the raw extremum
    next to them: the drop is the first frame, the contact is the first
    local minimum after the initial descent, the peak is the highest point
    of the first bounce. Heights are then rescaled so that contact maps to
    0 and the drop to 1.

    With `refine`, the contact instant and the apex are located between
    frames by fitting the free-flight parabolas, and the refined samples
    are spliced into the series at their own times.

    Args:
        y_series (array-like): Image heights (pixels, growing upwards).
        times (Optional[array-like]): Sample times; frames at `fps` if None.
        noise_sigma (Optional[float]): Pixel noise of the series. A bounce
            has to rise more than 3 sigma to count.
        refine (Optional[bool]): Locate contact and apex below the frame
            period. False gives the raw heuristic peak detector.
        fps (Optional[float]): Frame rate used when `times` is None.

    Returns:
        NormalizedTrajectory: The normalized series with its key points.

    Raises:
        NoBounceDetectedError: If no ascent follows the first descent.
    """
    y = np.asarray(y_series, dtype=float)
    t = np.arange(len(y)) / fps if times is None else \
        np.asarray(times, dtype=float)
    if len(y) < 3 or len(t) != len(y):
        raise NoBounceDetectedError("need at least three samples")
    floor = NOISE_FLOOR * noise_sigma
    window = SMOOTH_WINDOW if noise_sigma > 0 else 1
    found = _first_contact(smooth(y, window), floor)
    if found is None:
        raise NoBounceDetectedError("no ascent after the first contact")
    ci, end = found
    ci = _snap(y, ci, np.argmin)
    pi = ci + 1 + int(np.argmax(y[ci + 1:max(end, ci + 2)]))
    if ci == 0 or pi >= len(y):
        raise NoBounceDetectedError("no ascent after the first contact")

    levels = _refine(y, t, ci, pi) if refine else None
    if levels is None:
        if refine:
            logger.debug("bounce too short for sub-frame refinement")
        y_d, y_c = y[0], y[ci]
        if not y_d - y_c > floor:
            raise NoBounceDetectedError("series does not descend")
        values = (y - y_c) / (y_d - y_c)
        return NormalizedTrajectory(values, t, 0, ci, pi, refined=False)

    y_d, t_c, y_c, t_v, y_p = levels
    values = (y - y_c) / (y_d - y_c)
    values[0] = 1.0
    values, t, ci = _splice(values, t, t_c, 0.0)
    values, t, pi = _splice(values, t, t_v, (y_p - y_c) / (y_d - y_c))
    return NormalizedTrajectory(values, t, 0, ci, pi, refined=True)


def estimate_elasticity_ratio(traj):
    """Elasticity from the normalized bounce height, e = sqrt(h_bounce).

    The drop height is 1 after normalization.
    """
    peak = traj.peak_value
    if not peak > 0:
        raise NoBounceDetectedError("bounce apex is not above contact")
    return Estimate(np.sqrt(peak), "elasticity", "ratio-oracle")


def estimate_elasticity_gru(traj, model):
    """Elasticity regressed by a GRU from the normalized series.

    The GRU reads the key-point aligned resampling of `traj.readout`.

    Args:
        traj (NormalizedTrajectory): The normalized trajectory.
        model (GruParams): Trained parameters.

    Returns:
        Estimate: A value in (0, 1).

    Raises:
        ModelNotTrainedError: If `model` is None.
    """
    from .gru import gru_forward
    if model is None:
        raise ModelNotTrainedError("no GRU parameters given")
    pred, _ = gru_forward(model, traj.readout())
    return Estimate(pred, "elasticity", "gru")


def estimate_viscosity(areas, times, threshold=CONTACT_THRESHOLD,
                       exponent=1.0):
    """Viscosity from the growth rate of the liquid's image area.

    Contact is the first frame whose area exceeds the first frame's by
    `threshold`. Areas are normalized by the area the liquid has when it
    first touches the plate, the column cross-section, taken as the median
    area of the frames before contact. The slope k of the normalized area
    over the frames from contact on is fit by least squares and the
    viscosity is 1 / k^exponent.

    Args:
        areas (array-like): Image areas per frame.
        times (array-like): Frame times.
        threshold (Optional[float]): Relative growth marking contact.
        exponent (Optional[float]): Exponent of the growth rate.

    Returns:
        Estimate: The viscosity up to a common scale.

    Raises:
        NonPositiveSlopeError: If the area does not grow.
        InsufficientSamplesError: If fewer than 5 frames follow contact.
    """
    areas = np.asarray(areas, dtype=float)
    times = np.asarray(times, dtype=float)
    if len(areas) != len(times) or len(areas) < 2:
        raise InsufficientSamplesError("need matching areas and times")
    grown = areas > areas[0] * (1.0 + threshold)
    if not grown.any():
        raise NonPositiveSlopeError("liquid area never grows")
    contact = int(np.argmax(grown))
    if len(areas) - contact < MIN_POST_CONTACT:
        raise InsufficientSamplesError(
            "need {} frames after contact, got {}".format(
                MIN_POST_CONTACT, len(areas) - contact))
    normalized = areas / np.median(areas[:contact])
    k = np.polyfit(times[contact:], normalized[contact:], 1)[0]
    if not k > 0:
        raise NonPositiveSlopeError("normalized area slope {:g}".format(k))
    return Estimate(1.0 / k ** exponent, "viscosity", "slope-oracle")


UNIT_SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def _stop_fit(t, X, t_stop):
    """Internal function fitting decelerated motion that ends at rest.

    For every candidate stop time t_s the model
    X(t) = X_s - A max(t_s - t, 0)^2 is linear in X_s and A and is solved
    by least squares.

    Args:
        t (numpy.ndarray): (N,) frame times.
        X (numpy.ndarray): (N, 2) positions.
        t_stop (numpy.ndarray): (K,) candidate stop times, each after t[0].

    Returns:
        tuple: The (K,) squared errors and the (K, 2) vectors A.
    """
    b = np.clip(np.subtract.outer(t_stop, t), 0.0, None) ** 2
    bc = b - b.mean(axis=1, keepdims=True)
    Xc = X - X.mean(axis=0)
    slope = (bc @ Xc) / (bc ** 2).sum(axis=1)[:, None]
    resid = Xc[None, :, :] - bc[:, :, None] * slope[:, None, :]
    return (resid ** 2).sum(axis=(1, 2)), -slope


def _find_stop(t, X):
    """Internal function locating the stop time of a sliding object.

    Candidates are scanned on a grid of `STOP_SEARCH` points per frame
    period and the best one is refined by a bounded scalar search.

    Returns:
        tuple: (stop time, squared error, A)
    """
    grid = np.linspace(t[1], t[-1], STOP_SEARCH * (len(t) - 2) + 1)
    sse, _ = _stop_fit(t, X, grid)
    k = int(np.argmin(sse))
    t_stop, best = float(grid[k]), float(sse[k])
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    if hi > lo:
        res = minimize_scalar(
            lambda s: float(_stop_fit(t, X, np.array([s]))[0][0]),
            bounds=(lo, hi), method="bounded", options={"xatol": STOP_TOL})
        if res.fun < best:
            t_stop = float(res.x)
    sse, A = _stop_fit(t, X, np.array([t_stop]))
    return t_stop, float(sse[0]), A[0]


def _parabola_error(t, X):
    V = np.vander(t - t[0], 3)
    coef = np.linalg.lstsq(V, X, rcond=None)[0]
    return float(((V @ coef - X) ** 2).sum())


def _friction_from_parabola(t, x, g, estimator):
    alpha, beta, _ = np.polyfit(t - t[0], x, 2)
    if abs(alpha) <= CURVATURE_TOL:
        raise WrongCurvatureError("no measurable deceleration")
    if np.sign(alpha) == np.sign(beta):
        raise WrongCurvatureError("object accelerates along its motion")
    return Estimate(2.0 * abs(alpha) / g, "friction", estimator)


def _fit_slide(t, X, g, estimator):
    """Internal function estimating friction from a planar track.

    Two models compete by squared error: a free parabola over the whole
    clip for objects that never stop, and deceleration up to a stop time
    followed by rest. The rest frames take part in the second fit, so the
    stop is found without a velocity threshold.

    Returns:
        tuple: The `Estimate` and the stop time, None without a stop.
    """
    if len(t) < MIN_MOVING_FRAMES:
        raise InsufficientSamplesError("need {} frames, got {}".format(
            MIN_MOVING_FRAMES, len(t)))
    if not np.ptp(X, axis=0).max() > 0:
        raise InsufficientSamplesError("the object does not move")
    t_stop, stop_error, A = _find_stop(t, X)
    if _parabola_error(t, X) < stop_error:
        axis = int(np.argmax(np.abs(X[-1] - X[0])))
        return _friction_from_parabola(t, X[:, axis], g, estimator), None
    moving = int(np.count_nonzero(t < t_stop))
    if moving < MIN_MOVING_FRAMES:
        raise InsufficientSamplesError(
            "need {} frames before the object stops, got {}".format(
                MIN_MOVING_FRAMES, moving))
    accel = float(np.linalg.norm(A))
    if accel <= CURVATURE_TOL:
        raise WrongCurvatureError("no measurable deceleration")
    return Estimate(2.0 * accel / g, "friction", estimator), t_stop


def rectify_corners(corners, cube_size, reference=None):
    """Map corner tracks to a bird's eye view of the cube's top face.

    One homography takes the reference corners to an axis-aligned square
    of side `cube_size` and is applied to every frame.

    Args:
        corners (array-like): (N, 4, 2) corner pixels.
        cube_size (float): Edge length of the cube in meters.
        reference (Optional[array-like]): (4, 2) corners of the square,
            the first frame if None.

    Returns:
        numpy.ndarray: The (N, 4, 2) rectified corners in meters.
    """
    corners = np.asarray(corners, dtype=float)
    if reference is None:
        reference = corners[0]
    H = estimate_homography(reference, cube_size * UNIT_SQUARE)
    return apply_homography(H, corners)


def estimate_friction(corners, times, cube_size, g=GRAVITY):
    """Friction coefficient from the rectified deceleration of a cube.

    The centroid of the rectified top corners follows
    X = X_s - A (t_s - t)^2 until the stop time t_s and rests afterwards,
    so mu_k = 2 |A| / g. Clips that end before the cube stops are fit with
    a free parabola instead.

    The first rectification uses the first frame's corners. If the cube
    then rests for at least 5 frames, the fit is repeated with the
    homography of the mean resting corners, which averages the pixel
    noise of the reference square.

    Args:
        corners (array-like): (N, 4, 2) top corner pixels per frame.
        times (array-like): Frame times.
        cube_size (float): Edge length of the cube in meters.
        g (Optional[float]): Gravity.

    Returns:
        Estimate: The kinetic friction coefficient.

    Raises:
        DegenerateConfigurationError: If the first frame's corners are
            degenerate.
        InsufficientSamplesError: If the cube stops within 5 frames.
        WrongCurvatureError: If the fit does not decelerate.
    """
    corners = np.asarray(corners, dtype=float)
    times = np.asarray(times, dtype=float)
    centers = rectify_corners(corners, cube_size).mean(axis=1)
    est, t_stop = _fit_slide(times, centers, g, "parabola-oracle")
    if t_stop is not None:
        resting = times >= t_stop
        if np.count_nonzero(resting) >= MIN_REST_FRAMES:
            reference = corners[resting].mean(axis=0)
            centers = rectify_corners(corners, cube_size,
                                      reference).mean(axis=1)
            est, _ = _fit_slide(times, centers, g, "parabola-oracle")
    return est


def estimate_friction_naive(corners, times, cube_size, g=GRAVITY):
    """Friction coefficient fit directly in the image.

    Uses the mean corner position and a single pixel-per-meter scale from
    the first frame's edge lengths, ignoring perspective. Only meant as a
    comparison for `estimate_friction`.
    """
    corners = np.asarray(corners, dtype=float)
    times = np.asarray(times, dtype=float)
    edges = np.linalg.norm(np.roll(corners[0], -1, axis=0) - corners[0],
                           axis=1)
    scale = edges.mean() / cube_size
    centers = corners.mean(axis=1) / scale
    return _fit_slide(times, centers, g, "naive-parabola")[0]


def relative_score(e1, e2):
    """Decision score that the first video has the larger property value.

    score = sigmoid(log(e1 / e2)), so the score exceeds 0.5 exactly when
    e1 > e2 and swapping the arguments gives 1 - score.

    Args:
        e1 (Estimate or float): Estimate for the first video.
        e2 (Estimate or float): Estimate for the second video.

    Returns:
        float: The score in (0, 1).
    """
    e1, e2 = float(e1), float(e2)
    if not (e1 > 0 and e2 > 0):
        raise NonPositiveEstimateError("relative scores need positive "
                                       "estimates")
    return float(expit(np.log(e1) - np.log(e2)))
