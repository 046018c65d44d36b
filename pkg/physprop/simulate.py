#  simulate.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

"""Closed-form physics for the three scenarios.

Every scenario has an exact piecewise-analytic solution, so tracks are
evaluated directly at the frame times instead of being integrated. This
keeps integrator error out of any estimator comparison.
"""

from dataclasses import dataclass, field
import numpy as np

FPS = 60.0
DURATION = {"elasticity": 2.5, "viscosity": 1.5, "friction": 2.0}
MAX_BOUNCES = 10000
MIN_SPREAD_SAMPLES = 10
REST_SPEED = 1e-9  # rebound speeds below this fraction of the impact speed end the bounce series


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class WorldTrack(object):
    """Time-stamped ground truth in world coordinates (meters).

    Only the payload of the track's scenario is set, the others are None.

    Attributes:
        kind (str): The property the track belongs to.
        times (numpy.ndarray): Strictly increasing sample times in seconds.
        centroids (numpy.ndarray): (N, 3) ball or cube centroids.
        footprint (numpy.ndarray): (N, 3) liquid disc center, radius, area
            for each frame as (center_x, center_y, radius) with the area in
            `areas`.
        areas (numpy.ndarray): (N,) liquid footprint area.
        corners (numpy.ndarray): (N, 4, 3) top-surface corners of the cube.
        velocities (numpy.ndarray): (N,) cube speed along the motion axis.
        events (dict): Analytic event data such as impact or stop times.
    """

    kind: str
    times: np.ndarray
    centroids: np.ndarray = None
    footprint: np.ndarray = None
    areas: np.ndarray = None
    corners: np.ndarray = None
    velocities: np.ndarray = None
    events: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("times", "centroids", "footprint", "areas", "corners",
                     "velocities"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, _frozen(value))
        if len(self.times) < 2:
            raise ValueError("a track needs at least two samples")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("track times must be strictly increasing")
        for name in ("centroids", "areas", "corners"):
            value = getattr(self, name)
            if value is not None:
                if len(value) != len(self.times):
                    raise ValueError(name + " do not match the sample times")
                if not np.all(np.isfinite(value)):
                    raise ValueError(name + " contain non-finite values")

    def __len__(self):
        return len(self.times)

    def head(self, n):
        """Get a track holding only the first `n` samples."""
        def cut(a):
            return None if a is None else a[:n]
        return WorldTrack(self.kind, cut(self.times), cut(self.centroids),
                          cut(self.footprint), cut(self.areas),
                          cut(self.corners), cut(self.velocities),
                          dict(self.events))


def frame_times(duration, fps):
    """Sample times k / fps covering [0, duration]."""
    if not duration > 0:
        raise ValueError("duration must be positive")
    if not fps > 0:
        raise ValueError("fps must be positive")
    n = int(np.floor(duration * fps + 1e-9)) + 1
    return np.arange(max(n, 2)) / fps


def simulate_bounce(scene, duration=DURATION["elasticity"], fps=FPS):
    """Drop a ball from rest and let it bounce.

    The ball falls freely from `scene.drop_height`. Each impact multiplies
    the speed by the restitution e, so bounce n peaks at e^(2n) times the
    drop height. Bounces end once the rebound speed becomes negligible.

    Args:
        scene (ElasticityScene): The scene to simulate.
        duration (Optional[float]): Clip length in seconds.
        fps (Optional[float]): Frame rate in Hz.

    Returns:
        WorldTrack: Ball centroids with events `impact_times`,
            `apex_times` and `apex_heights` (heights of the ball's lowest
            point above ground).
    """
    t = frame_times(duration, fps)
    e, h0, g = scene.restitution, scene.drop_height, scene.gravity
    t_fall = np.sqrt(2.0 * h0 / g)
    v_impact = g * t_fall

    impacts = [t_fall]
    speeds = [e * v_impact]
    while (len(impacts) < MAX_BOUNCES and impacts[-1] < t[-1]
           and speeds[-1] > REST_SPEED * v_impact):
        impacts.append(impacts[-1] + 2.0 * speeds[-1] / g)
        speeds.append(e * speeds[-1])
    impacts = np.array(impacts)
    speeds = np.array(speeds)
    n = np.arange(1, len(impacts) + 1)
    apex_times = impacts + speeds / g
    apex_heights = e ** (2 * n) * h0

    gap = h0 - 0.5 * g * t ** 2
    seg = np.searchsorted(impacts, t, side="right") - 1
    bouncing = seg >= 0
    dt = t[bouncing] - impacts[seg[bouncing]]
    v = speeds[seg[bouncing]]
    gap[bouncing] = v * dt - 0.5 * g * dt ** 2
    if speeds[-1] <= REST_SPEED * v_impact:
        gap[t >= impacts[-1]] = 0.0
    gap = np.maximum(gap, 0.0)

    centroids = np.zeros((len(t), 3))
    centroids[:, 2] = scene.ball_radius + gap
    events = {"impact_times": impacts.tolist(),
              "apex_times": apex_times.tolist(),
              "apex_heights": apex_heights.tolist()}
    return WorldTrack("elasticity", t, centroids=centroids, events=events)


def simulate_spread(scene, duration=DURATION["viscosity"], fps=FPS):
    """Drop a liquid column and let it spread on the plate.

    Before contact the footprint is the column cross-section
    A0 = π r². After contact at t_c the area grows linearly with slope
    c / μ around the impact point.

    Args:
        scene (ViscosityScene): The scene to simulate.
        duration (Optional[float]): Clip length in seconds.
        fps (Optional[float]): Frame rate in Hz.

    Returns:
        WorldTrack: Footprint discs with event `contact_time`.
    """
    t = frame_times(duration, fps)
    t_c = np.sqrt(2.0 * scene.drop_height / scene.gravity)
    if np.sum(t > t_c) < MIN_SPREAD_SAMPLES:
        raise ValueError("duration must cover at least {} samples after "
                         "contact".format(MIN_SPREAD_SAMPLES))
    a0 = np.pi * scene.column_radius ** 2
    slope = scene.spread_constant / scene.viscosity
    areas = a0 + slope * np.maximum(t - t_c, 0.0)

    footprint = np.zeros((len(t), 3))
    footprint[:, 2] = np.sqrt(areas / np.pi)
    centroids = np.zeros((len(t), 3))
    return WorldTrack("viscosity", t, centroids=centroids,
                      footprint=footprint, areas=areas,
                      events={"contact_time": float(t_c),
                              "slope": float(slope)})


CORNER_SIGNS = np.array([[-1, -1], [1, -1], [1, 1], [-1, 1]], dtype=float)


def simulate_slide(scene, duration=DURATION["friction"], fps=FPS):
    """Push a cube and let kinetic friction stop it.

    Along the motion axis x(t) = x0 + v0 t - μ_k g t² / 2 until
    t_stop = v0 / (μ_k g), after which the cube rests.

    Args:
        scene (FrictionScene): The scene to simulate.
        duration (Optional[float]): Clip length in seconds.
        fps (Optional[float]): Frame rate in Hz.

    Returns:
        WorldTrack: Cube centroids, top corners and speeds with event
            `stop_time`.
    """
    t = frame_times(duration, fps)
    decel = scene.friction * scene.gravity
    t_stop = scene.speed / decel
    moving = t < t_stop
    travel = np.full(len(t), scene.speed ** 2 / (2.0 * decel))
    travel[moving] = scene.speed * t[moving] - 0.5 * decel * t[moving] ** 2
    speed = np.zeros(len(t))
    speed[moving] = scene.speed - decel * t[moving]

    axis = 0 if scene.axis == "x" else 1
    half = 0.5 * scene.cube_size
    centroids = np.zeros((len(t), 3))
    centroids[:, 0] = scene.x0
    centroids[:, 1] = scene.y0
    centroids[:, axis] += travel
    centroids[:, 2] = half
    corners = np.repeat(centroids[:, None, :], 4, axis=1)
    corners[:, :, :2] += half * CORNER_SIGNS
    corners[:, :, 2] = scene.cube_size
    return WorldTrack("friction", t, centroids=centroids, corners=corners,
                      velocities=speed, events={"stop_time": float(t_stop)})


SIMULATORS = {
    "elasticity": simulate_bounce,
    "viscosity": simulate_spread,
    "friction": simulate_slide,
}


def simulate(scene, duration=None, fps=FPS):
    """Simulate any scene with the default clip length of its scenario."""
    if duration is None:
        duration = DURATION[scene.kind]
    return SIMULATORS[scene.kind](scene, duration, fps)
