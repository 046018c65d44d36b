#  __init__.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

from .scene import (CameraPose, ElasticityScene, ViscosityScene,
                    FrictionScene, sample_scene, sample_camera)
from .simulate import WorldTrack, simulate
from .camera import (PinholeCamera, Homography, project, estimate_homography,
                     apply_homography, plane_homography)
from .observe import (ObservationSequence, render_observations, clip_to_view,
                      subsample_frames)
from .oracle import (Estimate, NormalizedTrajectory, normalize_trajectory,
                     estimate_elasticity_ratio, estimate_elasticity_gru,
                     estimate_viscosity, estimate_friction, relative_score)
from .gru import GruParams, TrainConfig, gru_forward, gru_backward, train
from .metrics import EvalReport, roc_auc, pearson, build_relative_pairs
from .dataset import RunConfig, DatasetRecord
from .benchmark import benchmark
from .util import example_scene

__all__ = (
    "CameraPose",
    "ElasticityScene",
    "ViscosityScene",
    "FrictionScene",
    "sample_scene",
    "sample_camera",
    "WorldTrack",
    "simulate",
    "PinholeCamera",
    "Homography",
    "project",
    "estimate_homography",
    "apply_homography",
    "plane_homography",
    "ObservationSequence",
    "render_observations",
    "clip_to_view",
    "subsample_frames",
    "Estimate",
    "NormalizedTrajectory",
    "normalize_trajectory",
    "estimate_elasticity_ratio",
    "estimate_elasticity_gru",
    "estimate_viscosity",
    "estimate_friction",
    "relative_score",
    "GruParams",
    "TrainConfig",
    "gru_forward",
    "gru_backward",
    "train",
    "EvalReport",
    "roc_auc",
    "pearson",
    "build_relative_pairs",
    "RunConfig",
    "DatasetRecord",
    "benchmark",
    "example_scene",
)

__version__ = "0.1.0"
