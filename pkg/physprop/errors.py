#  errors.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

"""Exceptions raised by physprop.

All errors derive from `PhysPropError`. Errors about bad input values also
derive from `ValueError` so they can be caught the usual way.
"""


class PhysPropError(Exception):
    """Base class for all physprop errors."""


class InvalidSceneError(PhysPropError, ValueError):
    """A scene or camera violates its parameter constraints."""


class BehindCameraError(PhysPropError, ValueError):
    """A point has non-positive depth in the camera frame."""


class DegenerateConfigurationError(PhysPropError, ValueError):
    """Three of the four homography correspondences are collinear."""


class PointAtInfinityError(PhysPropError, ValueError):
    """A homography maps a point to the line at infinity."""


class FrameRangeError(PhysPropError, ValueError):
    """A requested frame count is outside the available range."""


class EstimationError(PhysPropError, ValueError):
    """An oracle could not produce an estimate for an observation."""


class NoBounceDetectedError(EstimationError):
    """The height series shows no ascent after the first contact."""


class InsufficientSamplesError(EstimationError):
    """Too few usable samples for a fit or a pairing."""


class NonPositiveSlopeError(EstimationError):
    """The normalized area does not grow after contact."""


class WrongCurvatureError(EstimationError):
    """The fitted parabola accelerates along the direction of motion."""


class NonPositiveEstimateError(EstimationError):
    """A relative score was requested for a non-positive estimate."""


class NonFiniteEstimateError(EstimationError):
    """An estimator produced an infinite or NaN value."""


class ModelNotTrainedError(EstimationError):
    """A GRU estimate was requested without trained parameters."""


class ShapeMismatchError(PhysPropError, ValueError):
    """Array shapes do not match the GRU parameters or cache."""


class EmptySequenceError(PhysPropError, ValueError):
    """A recurrent model was given a sequence without samples."""


class SingleClassError(PhysPropError, ValueError):
    """ROC AUC needs both positive and negative labels."""


class ZeroVarianceError(PhysPropError, ValueError):
    """A correlation input has no variance."""


class DataError(PhysPropError):
    """Dataset files are missing, malformed or inconsistent."""


class EmptyDatasetError(DataError, ValueError):
    """A dataset, split or batch contains no records."""


class SchemaVersionError(DataError):
    """A file was written with an unsupported schema version."""


class EstimatorMismatchError(DataError):
    """The estimator does not apply to the dataset's property."""


class NumericFailure(PhysPropError, ArithmeticError):
    """A metric evaluated to a non-finite value."""
