#  observe.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

"""Turn world tracks into the image measurements the oracles consume.

The measurements are what a segmentation of each frame would give: the
ball centroid, the liquid's image area and the cube's top corners. Image
heights grow upwards, i.e. y = image height - v.
"""

from dataclasses import dataclass
import numpy as np

from .camera import project, depth, local_area_scale
from .errors import BehindCameraError, FrameRangeError
from .util import make_rng

AREA_NOISE = 0.002     # relative area noise per pixel of noise_sigma


def _frozen(a):
    if a is None:
        return None
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ObservationSequence(object):
    """Per-frame image measurements of one video.

    Attributes:
        kind (str): The property of the source track.
        times (numpy.ndarray): Frame times in seconds.
        centroids (numpy.ndarray): (N, 2) ball centroid pixels for
            elasticity, the impact point for viscosity, otherwise None.
        areas (numpy.ndarray): (N,) liquid image areas in square pixels.
        corners (numpy.ndarray): (N, 4, 2) cube corner pixels.
        noise_sigma (float): Pixel noise the sequence was rendered with.
    """

    kind: str
    times: np.ndarray
    centroids: np.ndarray = None
    areas: np.ndarray = None
    corners: np.ndarray = None
    noise_sigma: float = 0.0

    def __post_init__(self):
        for name in ("times", "centroids", "areas", "corners"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        for name in ("centroids", "areas", "corners"):
            value = getattr(self, name)
            if value is not None and len(value) != len(self.times):
                raise ValueError(name + " do not match the frame times")

    @property
    def frame_count(self):
        return len(self.times)

    @property
    def heights(self):
        """The image height series of the ball centroid."""
        return self.centroids[:, 1]

    def take(self, indices):
        """Get the sequence restricted to the given frame indices."""
        def cut(a):
            return None if a is None else a[indices]
        return ObservationSequence(self.kind, cut(self.times),
                                   cut(self.centroids), cut(self.areas),
                                   cut(self.corners), self.noise_sigma)

    def to_dict(self):
        out = {"kind": self.kind, "noise_sigma": float(self.noise_sigma),
               "times": self.times.tolist()}
        for name in ("centroids", "areas", "corners"):
            value = getattr(self, name)
            out[name] = None if value is None else value.tolist()
        return out

    @classmethod
    def from_dict(cls, data):
        return cls(data["kind"], data["times"], data.get("centroids"),
                   data.get("areas"), data.get("corners"),
                   data.get("noise_sigma", 0.0))


def _flip(camera, pixels):
    out = np.array(pixels, dtype=float)
    out[..., 1] = camera.height - out[..., 1]
    return out


def _tracked_points(track):
    """Internal function giving the (N, K, 3) points that must stay visible."""
    if track.kind == "friction":
        return track.corners
    return track.centroids[:, None, :]


def clip_to_view(track, camera):
    """Cut a track where its object leaves the image.

    The clip ends before the first frame in which a tracked point is behind
    the camera or outside the image bounds.

    Args:
        track (WorldTrack): The track to clip.
        camera (PinholeCamera): The camera filming it.

    Returns:
        WorldTrack: The visible head of the track.

    Raises:
        BehindCameraError: If fewer than two frames are visible.
    """
    pts = _tracked_points(track)
    ahead = np.all(depth(camera, pts) > 0, axis=1)
    n = len(track) if ahead.all() else int(np.argmin(ahead))
    if n >= 2:
        inside = np.all(camera.in_image(project(camera, pts[:n])), axis=1)
        if not inside.all():
            n = int(np.argmin(inside))
    if n < 2:
        raise BehindCameraError("object is not visible in the first frames")
    return track if n == len(track) else track.head(n)


def render_observations(track, camera, noise_sigma=0.0, seed=0):
    """Measure a world track through a camera.

    Gaussian noise with standard deviation `noise_sigma` is added to every
    pixel coordinate. Liquid areas get multiplicative noise with relative
    standard deviation `AREA_NOISE * noise_sigma`.

    Args:
        track (WorldTrack): The ground truth.
        camera (PinholeCamera): The camera.
        noise_sigma (Optional[float]): Pixel noise, 0 for exact projections.
        seed (Optional[int]): Seed for the noise.

    Returns:
        ObservationSequence: One measurement per track sample.

    Raises:
        BehindCameraError: If any measured point lies behind the camera.
    """
    if noise_sigma < 0:
        raise ValueError("noise_sigma must not be negative")
    rng = make_rng(seed) if noise_sigma > 0 else None
    centroids = areas = corners = None

    if track.kind == "elasticity":
        centroids = _flip(camera, project(camera, track.centroids))
        if rng is not None:
            centroids += rng.normal(0.0, noise_sigma, centroids.shape)
    elif track.kind == "viscosity":
        impact = np.array(track.footprint[0, :2].tolist() + [0.0])
        centroids = _flip(camera, project(camera, np.repeat(
            impact[None], len(track), axis=0)))
        areas = track.areas * local_area_scale(camera, impact)
        if rng is not None:
            areas = areas * (1.0 + rng.normal(0.0, AREA_NOISE * noise_sigma,
                                              areas.shape))
    elif track.kind == "friction":
        corners = _flip(camera, project(camera, track.corners))
        if rng is not None:
            corners += rng.normal(0.0, noise_sigma, corners.shape)
    else:
        raise ValueError("unknown track kind " + repr(track.kind))

    return ObservationSequence(track.kind, track.times, centroids, areas,
                               corners, noise_sigma)


def subsample_indices(count, n):
    """Uniformly spaced frame indices including the first and the last.

    Index k is floor(k (count - 1) / (n - 1) + 1/2), so halves round up.
    For 60 frames and n = 16 this gives 0, 4, 8, 12, 16, 20, 24, 28, 31,
    35, 39, 43, 47, 51, 55, 59.
    """
    if not 2 <= n <= count:
        raise FrameRangeError("need 2 <= n <= {}, got {}".format(count, n))
    k = np.arange(n)
    return np.floor(k * (count - 1) / (n - 1) + 0.5).astype(int)


def subsample_frames(seq, n):
    """Keep `n` uniformly spaced frames of a sequence.

    Args:
        seq (ObservationSequence): The sequence.
        n (int): The number of frames to keep, 2 <= n <= seq.frame_count.

    Returns:
        ObservationSequence: The subsampled sequence.

    Raises:
        FrameRangeError: If `n` is out of range.
    """
    return seq.take(subsample_indices(seq.frame_count, n))
