#  util.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

import os
import tempfile
import numpy as np

MASK64 = (1 << 64) - 1
THREADS_ENV = "PHYSPROP_THREADS"


def make_rng(seed):
    """Internal function giving the generator used for all sampling.

    Seeds are reduced to unsigned 64 bit so negative values are accepted.
    The bit generator is numpy's PCG64 and is fixed for a release.
    """
    return np.random.Generator(np.random.PCG64(int(seed) & MASK64))


def derive_seed(*keys):
    """Derive a child seed from a parent seed and integer keys.

    Args:
        *keys (int): The parent seed followed by any number of integer keys,
            e.g. split and record index.

    Returns:
        int: An unsigned 64 bit seed that only depends on `keys`.
    """
    entropy = [int(k) & MASK64 for k in keys]
    state = np.random.SeedSequence(entropy).generate_state(1, np.uint64)
    return int(state[0])


def thread_count():
    """Get the number of workers allowed by `PHYSPROP_THREADS`."""
    default = os.cpu_count() or 1
    value = os.environ.get(THREADS_ENV)
    if not value:
        return default
    try:
        n = int(value)
    except ValueError:
        raise ValueError("{} must be an integer, got {!r}".format(
            THREADS_ENV, value))
    return max(1, n)


def atomic_write(path, text):
    """Write `text` to `path` via a temporary file and a rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as out:
            out.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def example_scene(prop):
    """Gets a canonical noise-free scene.

    Returns a hand-picked scene for a property with a fronto-parallel camera,
    useful for tests and for trying out the estimators.

    Args:
        prop (str): One of "elasticity", "viscosity" or "friction".

    Returns:
        A scene object of the matching type.
    """
    from .scene import (CameraPose, ElasticityScene, ViscosityScene,
                        FrictionScene)
    camera = CameraPose(radius=1.5, height=0.25, azimuth=0.3,
                        look_at=(0.0, 0.0, 0.25))
    if prop == "elasticity":
        return ElasticityScene(restitution=0.5, drop_height=0.3,
                               camera=camera)
    elif prop == "viscosity":
        return ViscosityScene(viscosity=1e-3, camera=camera)
    elif prop == "friction":
        camera = CameraPose(radius=1.5, height=1.0, azimuth=0.8,
                            look_at=(0.0, 0.0, 0.0))
        return FrictionScene(friction=0.1, x0=0.0, y0=0.0, speed=0.8,
                             axis="x", camera=camera)
    raise ValueError("unknown property " + repr(prop))
