#  scene.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

"""Scene parameters for the bounce, spread and slide scenarios.

A scene fully describes one synthetic video: the physical property under
study plus the nuisance parameters (camera pose, initial conditions, colour)
an estimator has to be invariant to. Nuisance parameters are drawn from one
of two domains. Domain "A1" generates the training and the first test split,
domain "A2" is shifted and generates the second test split.
"""

from dataclasses import dataclass, asdict, replace
import numpy as np

from .errors import InvalidSceneError
from .util import make_rng

GRAVITY = 9.81
PROPERTIES = ("elasticity", "viscosity", "friction")
DOMAINS = ("A1", "A2")

BALL_RADIUS = 0.1
COLUMN_RADIUS = 0.05
COLUMN_HEIGHT = 0.1
COLUMN_DROP = 0.056
CUBE_SIZE = 0.1
VISCOSITY_RANGE = (5e-5, 1e-2)
# keeps the footprint of the thinnest liquid inside a 0.3 m plate over 1.5 s
SPREAD_CONSTANT = 9.5e-6

# Camera and colour ranges per domain. Scalars are fixed values, pairs are
# sampled uniformly. Colour entries are (r, g, b).
CAMERA_RANGES = {
    "A1": {"radius": 1.5, "height": (0.5, 1.5), "azimuth": (0.0, 0.5 * np.pi),
           "x_l": (-0.1, 0.1), "y_l": (-0.1, 0.1)},
    "A2": {"radius": 1.5, "height": (0.25, 0.5),
           "azimuth": (0.5 * np.pi, 2.0 * np.pi),
           "x_l": (0.1, 0.2), "y_l": (-0.2, -0.1)},
}
LOOK_AT_Z = {
    "elasticity": {"A1": (0.05, 0.27), "A2": (-0.05, 0.05)},
    "viscosity": {"A1": (0.05, 0.27), "A2": (-0.05, 0.05)},
    "friction": {"A1": (-0.1, 0.12), "A2": (-0.14, -0.1)},
}
COLOR_RANGES = {
    "elasticity": {"A1": ((0, 1), (0, 1), 0), "A2": (0, 0, (0, 1))},
    "viscosity": {"A1": ((0, 1), (0, 1), 0), "A2": (0, 0, (0, 1))},
    "friction": {"A1": ((0, 1), (0, 1), 0), "A2": ((0, 1), (0, 1), (0, 1))},
}
DROP_HEIGHT = {"A1": (0.25, 0.4), "A2": (0.4, 0.5)}
SLIDE_START = {
    "A1": {"x0": (-0.1, 0.1), "y0": (-0.1, 0.1), "speed": (0.6, 1.0)},
    "A2": {"x0": (-0.15, -0.1), "y0": (0.1, 0.15), "speed": (1.0, 1.2)},
}


def _draw(rng, bounds):
    """Internal function drawing from a fixed value or an open range."""
    if isinstance(bounds, tuple):
        lo, hi = bounds
        value = rng.uniform(lo, hi)
        while value <= lo:
            value = rng.uniform(lo, hi)
        return float(value)
    return float(bounds)


@dataclass(frozen=True)
class CameraPose(object):
    """Where the camera sits and what it looks at.

    The camera position is (R cos α, R sin α, h) with gravity along -z.

    Args:
        radius (float): Distance R from the z axis in meters.
        height (float): Height h of the camera in meters.
        azimuth (float): Angle α from the +x direction in radians.
        look_at (tuple): The point (x_l, y_l, z_l) the camera looks at.
    """

    radius: float
    height: float
    azimuth: float
    look_at: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "look_at",
                           tuple(float(v) for v in self.look_at))
        if not self.radius > 0:
            raise InvalidSceneError("camera radius must be positive")
        if len(self.look_at) != 3:
            raise InvalidSceneError("look_at must be a 3D point")

    @property
    def position(self):
        return np.array([self.radius * np.cos(self.azimuth),
                         self.radius * np.sin(self.azimuth),
                         self.height])


@dataclass(frozen=True)
class ElasticityScene(object):
    """A ball dropped from rest that bounces on the ground.

    `drop_height` is the gap between the ball's lowest point and the ground
    at release, so the centroid starts at `drop_height + ball_radius`.
    """

    restitution: float
    drop_height: float
    camera: CameraPose
    ball_radius: float = BALL_RADIUS
    gravity: float = GRAVITY
    color: tuple = (0.5, 0.5, 0.0)

    kind = "elasticity"

    def __post_init__(self):
        if not 0 < self.restitution < 1:
            raise InvalidSceneError("restitution must lie in (0, 1)")
        if not self.drop_height > 0:
            raise InvalidSceneError("drop height must be positive")
        if not self.ball_radius > 0:
            raise InvalidSceneError("ball radius must be positive")
        if not self.gravity > 0:
            raise InvalidSceneError("gravity must be positive")

    @property
    def value(self):
        return self.restitution


@dataclass(frozen=True)
class ViscosityScene(object):
    """A liquid column that drops onto a plate and spreads."""

    viscosity: float
    camera: CameraPose
    column_radius: float = COLUMN_RADIUS
    column_height: float = COLUMN_HEIGHT
    drop_height: float = COLUMN_DROP
    spread_constant: float = SPREAD_CONSTANT
    gravity: float = GRAVITY
    color: tuple = (0.5, 0.5, 0.0)

    kind = "viscosity"

    def __post_init__(self):
        if not self.viscosity > 0:
            raise InvalidSceneError("viscosity must be positive")
        if not self.column_radius > 0:
            raise InvalidSceneError("column radius must be positive")
        if not self.spread_constant > 0:
            raise InvalidSceneError("spread constant must be positive")
        if self.drop_height < 0:
            raise InvalidSceneError("drop height must not be negative")

    @property
    def value(self):
        return self.viscosity


@dataclass(frozen=True)
class FrictionScene(object):
    """A cube pushed along the x or y axis that slides to a halt."""

    friction: float
    x0: float
    y0: float
    speed: float
    axis: str
    camera: CameraPose
    cube_size: float = CUBE_SIZE
    gravity: float = GRAVITY
    color: tuple = (0.5, 0.5, 0.0)

    kind = "friction"

    def __post_init__(self):
        if not self.friction > 0:
            raise InvalidSceneError("friction coefficient must be positive")
        if not self.speed > 0:
            raise InvalidSceneError("initial speed must be positive")
        if not self.cube_size > 0:
            raise InvalidSceneError("cube size must be positive")
        if self.axis not in ("x", "y"):
            raise InvalidSceneError("motion axis must be 'x' or 'y'")

    @property
    def value(self):
        return self.friction


SCENE_TYPES = {
    "elasticity": ElasticityScene,
    "viscosity": ViscosityScene,
    "friction": FrictionScene,
}


def _check(prop, domain):
    if prop not in PROPERTIES:
        raise ValueError("unknown property " + repr(prop))
    if domain not in DOMAINS:
        raise ValueError("unknown domain " + repr(domain))


def _camera(rng, prop, domain):
    ranges = CAMERA_RANGES[domain]
    return CameraPose(
        radius=_draw(rng, ranges["radius"]),
        height=_draw(rng, ranges["height"]),
        azimuth=_draw(rng, ranges["azimuth"]),
        look_at=(_draw(rng, ranges["x_l"]), _draw(rng, ranges["y_l"]),
                 _draw(rng, LOOK_AT_Z[prop][domain])))


def sample_camera(prop, domain, seed):
    """Draw a camera pose on its own.

    Used to place several videos under one shared viewpoint.

    Args:
        prop (str): The property the camera ranges are taken for.
        domain (str): "A1" or "A2".
        seed (int): Any 64 bit integer.

    Returns:
        CameraPose: The sampled pose.
    """
    _check(prop, domain)
    return _camera(make_rng(seed), prop, domain)


def sample_scene(prop, domain, seed):
    """Draw a random scene for a property from a nuisance domain.

    Every parameter is drawn uniformly from its range for the domain.
    Equal arguments always give equal scenes.

    Args:
        prop (str): One of "elasticity", "viscosity" or "friction".
        domain (str): "A1" or "A2".
        seed (int): Any 64 bit integer.

    Returns:
        One of `ElasticityScene`, `ViscosityScene` or `FrictionScene`.
    """
    _check(prop, domain)
    rng = make_rng(seed)
    camera = _camera(rng, prop, domain)
    color = tuple(_draw(rng, c) for c in COLOR_RANGES[prop][domain])
    if prop == "elasticity":
        return ElasticityScene(
            restitution=_draw(rng, (0.0, 1.0)),
            drop_height=_draw(rng, DROP_HEIGHT[domain]),
            camera=camera, color=color)
    elif prop == "viscosity":
        return ViscosityScene(viscosity=_draw(rng, VISCOSITY_RANGE),
                              camera=camera, color=color)
    start = SLIDE_START[domain]
    x0 = _draw(rng, start["x0"])
    y0 = _draw(rng, start["y0"])
    speed = _draw(rng, start["speed"])
    axis = "x" if rng.random() < 0.5 else "y"
    return FrictionScene(friction=_draw(rng, (0.0, 0.2)), x0=x0, y0=y0,
                         speed=speed, axis=axis, camera=camera, color=color)


def with_camera(scene, camera):
    """Return a copy of `scene` seen from another camera."""
    return replace(scene, camera=camera)


def scene_to_dict(scene):
    """Serialize a scene into plain JSON types."""
    out = asdict(scene)
    out["property"] = scene.kind
    out["color"] = list(scene.color)
    out["camera"]["look_at"] = list(scene.camera.look_at)
    return out


def scene_from_dict(data):
    """Build a scene from the output of `scene_to_dict`."""
    data = dict(data)
    prop = data.pop("property")
    if prop not in SCENE_TYPES:
        raise ValueError("unknown property " + repr(prop))
    data["camera"] = CameraPose(**data["camera"])
    data["color"] = tuple(data["color"])
    return SCENE_TYPES[prop](**data)
