#  dataset.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

"""Generation, storage and loading of synthetic datasets.

A dataset directory holds a `manifest.json` and one `<split>.jsonl` file per
split with one record per line. The training split and the first test
split are drawn from nuisance domain A1, the second test split from the
shifted domain A2. Records come in viewpoint groups of `group_size` videos
that share one camera, relative pairs are only formed inside a group.

Every random draw is seeded from the run seed, the split and the record
index, so a dataset is reproduced byte for byte from its manifest.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import json
import logging
import os

from .camera import PinholeCamera, FOCAL, IMAGE_SIZE
from .errors import DataError, SchemaVersionError, EmptyDatasetError
from .observe import ObservationSequence, clip_to_view, render_observations
from .scene import (PROPERTIES, sample_camera, sample_scene, with_camera,
                    scene_to_dict, scene_from_dict)
from .simulate import DURATION, FPS, simulate
from .util import derive_seed, thread_count, atomic_write

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MANIFEST = "manifest.json"
SPLITS = ("train", "test-1", "test-2")
SPLIT_DOMAIN = {"train": "A1", "test-1": "A1", "test-2": "A2"}
SPLIT_CODE = {"train": 0, "test-1": 1, "test-2": 2}
DEFAULT_SIZES = {"train": 200, "test-1": 100, "test-2": 100}

# keys appended to the seed path of a record
SCENE_KEY, CAMERA_KEY, NOISE_KEY = 0, 1, 2


def _default_sizes():
    return dict(DEFAULT_SIZES)


@dataclass(frozen=True)
class RunConfig(object):
    """Everything needed to generate a dataset.

    Attributes:
        property (str): "elasticity", "viscosity" or "friction".
        split_sizes (dict): Records per split.
        noise_sigma (float): Pixel noise of the observations.
        seed (int): Run seed.
        out (str): Output directory.
        fps (float): Frame rate.
        duration (float): Clip length, the scenario default if None.
        group_size (int): Videos sharing a viewpoint.
        pairs_per_split (int): Relative pairs evaluated per split.
    """

    property: str
    split_sizes: dict = field(default_factory=_default_sizes)
    noise_sigma: float = 1.0
    seed: int = 0
    out: str = "data"
    fps: float = FPS
    duration: float = None
    group_size: int = 4
    pairs_per_split: int = 200

    def __post_init__(self):
        if self.property not in PROPERTIES:
            raise ValueError("unknown property {!r}, use one of {}".format(
                self.property, ", ".join(PROPERTIES)))
        sizes = {split: int(self.split_sizes.get(split, 0))
                 for split in SPLITS}
        if min(sizes.values()) < 1:
            raise ValueError("every split needs at least one record")
        object.__setattr__(self, "split_sizes", sizes)
        if self.duration is None:
            object.__setattr__(self, "duration", DURATION[self.property])
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must not be negative")
        if not self.fps > 0:
            raise ValueError("fps must be positive")
        if self.group_size < 2:
            raise ValueError("group_size must be at least 2")
        if self.pairs_per_split < 1:
            raise ValueError("pairs_per_split must be at least 1")

    def manifest(self):
        """Get the manifest describing datasets made with this config."""
        return {
            "schema_version": SCHEMA_VERSION,
            "property": self.property,
            "seed": self.seed,
            "split_sizes": dict(self.split_sizes),
            "noise_sigma": self.noise_sigma,
            "fps": self.fps,
            "duration": self.duration,
            "group_size": self.group_size,
            "pairs_per_split": self.pairs_per_split,
            "intrinsics": {"focal": FOCAL, "cx": IMAGE_SIZE / 2.0,
                           "cy": IMAGE_SIZE / 2.0, "width": IMAGE_SIZE,
                           "height": IMAGE_SIZE},
            "files": {split: split + ".jsonl" for split in SPLITS},
        }

    @classmethod
    def from_manifest(cls, manifest, out):
        check_schema(manifest, "manifest")
        return cls(property=manifest["property"],
                   split_sizes=manifest["split_sizes"],
                   noise_sigma=manifest["noise_sigma"],
                   seed=manifest["seed"], out=out, fps=manifest["fps"],
                   duration=manifest["duration"],
                   group_size=manifest["group_size"],
                   pairs_per_split=manifest["pairs_per_split"])


@dataclass(frozen=True, eq=False)
class DatasetRecord(object):
    """One synthetic video: its scene, measurements and ground truth."""

    record_id: str
    property: str
    split: str
    group: int
    seed: int
    scene: object
    observations: ObservationSequence
    ground_truth: float

    def to_dict(self):
        return {"schema_version": SCHEMA_VERSION,
                "record_id": self.record_id, "property": self.property,
                "split": self.split, "group": self.group, "seed": self.seed,
                "scene": scene_to_dict(self.scene),
                "observations": self.observations.to_dict(),
                "ground_truth": self.ground_truth}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        check_schema(data, "record")
        return cls(data["record_id"], data["property"], data["split"],
                   data["group"], data["seed"], scene_from_dict(data["scene"]),
                   ObservationSequence.from_dict(data["observations"]),
                   data["ground_truth"])


def check_schema(data, what):
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError("{} has schema version {!r}, expected "
                                 "{}".format(what, version, SCHEMA_VERSION))


def make_record(config, split, index):
    """Generate one record of a split.

    Args:
        config (RunConfig): The run settings.
        split (str): The split id.
        index (int): Position of the record in its split.

    Returns:
        DatasetRecord: The simulated and observed video.
    """
    code = SPLIT_CODE[split]
    domain = SPLIT_DOMAIN[split]
    group = index // config.group_size
    seed = derive_seed(config.seed, code, index)
    pose = sample_camera(config.property, domain,
                         derive_seed(config.seed, code, group, CAMERA_KEY))
    scene = with_camera(sample_scene(config.property, domain,
                                     derive_seed(seed, SCENE_KEY)), pose)
    camera = PinholeCamera(pose)
    track = clip_to_view(simulate(scene, config.duration, config.fps), camera)
    obs = render_observations(track, camera, config.noise_sigma,
                              seed=derive_seed(seed, NOISE_KEY))
    return DatasetRecord(
        record_id="{}-{}-{:05d}".format(config.property, split, index),
        property=config.property, split=split, group=group, seed=seed,
        scene=scene, observations=obs, ground_truth=scene.value)


def generate_split(config, split):
    """Generate all records of a split, in index order."""
    size = config.split_sizes[split]
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        records = list(pool.map(lambda i: make_record(config, split, i),
                                range(size)))
    logger.info("generated %d %s records for %s", len(records), split,
                config.property)
    return records


def write_records(path, records):
    atomic_write(path, "".join(r.to_json() + "\n" for r in records))


def cmd_generate(config):
    """Generate a dataset directory.

    Args:
        config (RunConfig): The run settings.

    Returns:
        dict: The manifest that was written.
    """
    os.makedirs(config.out, exist_ok=True)
    manifest = config.manifest()
    for split in SPLITS:
        records = generate_split(config, split)
        write_records(os.path.join(config.out, manifest["files"][split]),
                      records)
    atomic_write(os.path.join(config.out, MANIFEST),
                 json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return manifest


def load_manifest(directory):
    """Read and check the manifest of a dataset directory.

    Raises:
        DataError: If the manifest is missing or malformed.
        SchemaVersionError: If it has an unsupported schema version.
    """
    path = os.path.join(directory, MANIFEST)
    try:
        with open(path, encoding="utf-8") as handle:
            manifest = json.load(handle)
    except FileNotFoundError:
        raise DataError("no dataset manifest in " + directory)
    except json.JSONDecodeError as err:
        raise DataError("malformed manifest {}: {}".format(path, err))
    check_schema(manifest, "manifest")
    return manifest


def read_records(directory, split, manifest=None):
    """Read all records of a split.

    Raises:
        DataError: If the split file is missing or a line is malformed.
        EmptyDatasetError: If the split holds no records.
    """
    if manifest is None:
        manifest = load_manifest(directory)
    if split not in manifest["files"]:
        raise DataError("unknown split " + repr(split))
    path = os.path.join(directory, manifest["files"][split])
    records = []
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                if not line.strip():
                    continue
                try:
                    records.append(DatasetRecord.from_dict(json.loads(line)))
                except (json.JSONDecodeError, KeyError, TypeError,
                        ValueError) as err:
                    raise DataError("{}:{}: {}".format(path, lineno, err))
    except FileNotFoundError:
        raise DataError("missing split file " + path)
    if not records:
        raise EmptyDatasetError("split {} holds no records".format(split))
    return records
