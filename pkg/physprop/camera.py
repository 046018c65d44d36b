#  camera.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

"""Pinhole projection and planar homographies.

Image coordinates follow the usual raster convention here (u to the right,
v downwards). `observe` flips v so that image heights grow upwards.
"""

from dataclasses import dataclass
from itertools import combinations
import numpy as np

from .errors import (BehindCameraError, DegenerateConfigurationError,
                     PointAtInfinityError, InvalidSceneError)
from .scene import CameraPose

IMAGE_SIZE = 512
FOCAL = 512.0       # pixels, about 53 degrees field of view
COLLINEAR_TOL = 1e-9
INFINITY_TOL = 1e-12


@dataclass(frozen=True)
class PinholeCamera(object):
    """A pinhole camera looking from `pose.position` towards `pose.look_at`.

    The camera's up direction is world +z projected onto the image plane.
    Intrinsics are shared by all scenes.
    """

    pose: CameraPose
    focal: float = FOCAL
    cx: float = IMAGE_SIZE / 2.0
    cy: float = IMAGE_SIZE / 2.0
    width: int = IMAGE_SIZE
    height: int = IMAGE_SIZE

    def __post_init__(self):
        if not self.focal > 0:
            raise InvalidSceneError("focal length must be positive")
        # fails early for degenerate poses
        self.rotation

    @property
    def center(self):
        return self.pose.position

    @property
    def rotation(self):
        """World-to-camera rotation with rows right, down and forward."""
        forward = np.asarray(self.pose.look_at) - self.center
        norm = np.linalg.norm(forward)
        if norm < 1e-12:
            raise InvalidSceneError("camera looks at its own position")
        forward = forward / norm
        right = np.cross(forward, [0.0, 0.0, 1.0])
        if np.linalg.norm(right) < 1e-9:
            raise InvalidSceneError("camera must not look straight along z")
        right = right / np.linalg.norm(right)
        down = np.cross(forward, right)
        return np.vstack([right, down, forward])

    @property
    def intrinsics(self):
        return np.array([[self.focal, 0.0, self.cx],
                         [0.0, self.focal, self.cy],
                         [0.0, 0.0, 1.0]])

    def in_image(self, pixels):
        """Check which pixels fall inside the image bounds."""
        pixels = np.asarray(pixels, dtype=float)
        return ((pixels[..., 0] >= 0) & (pixels[..., 0] <= self.width) &
                (pixels[..., 1] >= 0) & (pixels[..., 1] <= self.height))


def depth(camera, points):
    """Depth of world points along the optical axis."""
    points = np.asarray(points, dtype=float)
    return (points - camera.center) @ camera.rotation[2]


def project(camera, points):
    """Project world points to pixels.

    Args:
        camera (PinholeCamera): The camera.
        points (array-like): A single 3D point or an (..., 3) array in meters.

    Returns:
        numpy.ndarray: Pixel coordinates (u, v) with the shape of `points`
            minus the last axis plus 2.

    Raises:
        BehindCameraError: If any point has non-positive depth.
    """
    points = np.asarray(points, dtype=float)
    cam = (points - camera.center) @ camera.rotation.T
    z = cam[..., 2]
    if np.any(z <= 0):
        raise BehindCameraError("point behind the camera")
    u = camera.focal * cam[..., 0] / z + camera.cx
    v = camera.focal * cam[..., 1] / z + camera.cy
    return np.stack([u, v], axis=-1)


@dataclass(frozen=True, eq=False)
class Homography(object):
    """A projective map between planes, defined up to scale.

    The matrix is scaled so that its bottom-right entry is 1 whenever that
    entry is nonzero, and to unit Frobenius norm otherwise.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise ValueError("a homography is a 3x3 matrix")
        scale = np.abs(m).max()
        if scale == 0 or abs(np.linalg.det(m / scale)) < 1e-14:
            raise DegenerateConfigurationError("singular homography")
        if abs(m[2, 2]) > 1e-12 * scale:
            m = m / m[2, 2]
        else:
            m = m / np.linalg.norm(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other):
        return Homography(self.matrix @ other.matrix)

    def inverse(self):
        return Homography(np.linalg.inv(self.matrix))


def apply_homography(H, points):
    """Map 2D points through a homography.

    Args:
        H (Homography or numpy.ndarray): The map.
        points (array-like): A single 2D point or an (..., 2) array.

    Returns:
        numpy.ndarray: The mapped points, same shape as `points`.

    Raises:
        PointAtInfinityError: If a point maps to the line at infinity.
    """
    m = H.matrix if isinstance(H, Homography) else np.asarray(H, dtype=float)
    points = np.asarray(points, dtype=float)
    x, y = points[..., 0], points[..., 1]
    w = m[2, 0] * x + m[2, 1] * y + m[2, 2]
    size = np.abs(m[2]).sum() * (1.0 + np.abs(points).max())
    if np.any(np.abs(w) <= INFINITY_TOL * size):
        raise PointAtInfinityError("point maps to infinity")
    u = (m[0, 0] * x + m[0, 1] * y + m[0, 2]) / w
    v = (m[1, 0] * x + m[1, 1] * y + m[1, 2]) / w
    return np.stack([u, v], axis=-1)


def _check_general_position(pts, name):
    scale = max(np.linalg.norm(a - b) for a, b in combinations(pts, 2))
    if scale == 0:
        raise DegenerateConfigurationError(name + " points coincide")
    for a, b, c in combinations(pts, 3):
        ab, ac = b - a, c - a
        area = abs(ab[0] * ac[1] - ab[1] * ac[0])
        if area <= COLLINEAR_TOL * scale ** 2:
            raise DegenerateConfigurationError(
                "three {} points are collinear".format(name))


def _normalize_points(pts):
    """Internal function moving the centroid to the origin and scaling the
    mean distance from it to sqrt(2).
    """
    mean = pts.mean(axis=0)
    dist = np.linalg.norm(pts - mean, axis=1).mean()
    s = np.sqrt(2.0) / dist
    T = np.array([[s, 0.0, -s * mean[0]],
                  [0.0, s, -s * mean[1]],
                  [0.0, 0.0, 1.0]])
    return (pts - mean) * s, T


def estimate_homography(src, dst):
    """Estimate the homography mapping four points onto four others.

    Solves the 8x9 direct linear transform system on normalized
    coordinates and undoes the normalization afterwards.

    Args:
        src (array-like): Four source points as a (4, 2) array.
        dst (array-like): The four matching destination points.

    Returns:
        Homography: H with H src_i proportional to dst_i.

    Raises:
        DegenerateConfigurationError: If three points of either set are
            collinear.
    """
    src = np.asarray(src, dtype=float)
    dst = np.asarray(dst, dtype=float)
    if src.shape != (4, 2) or dst.shape != (4, 2):
        raise ValueError("need exactly four 2D correspondences")
    _check_general_position(src, "source")
    _check_general_position(dst, "destination")

    src_n, T_src = _normalize_points(src)
    dst_n, T_dst = _normalize_points(dst)
    A = np.zeros((8, 9))
    for i, ((x, y), (xp, yp)) in enumerate(zip(src_n, dst_n)):
        A[2 * i] = [0, 0, 0, -x, -y, -1, yp * x, yp * y, yp]
        A[2 * i + 1] = [x, y, 1, 0, 0, 0, -xp * x, -xp * y, -xp]
    _, _, vt = np.linalg.svd(A)
    H_n = vt[-1].reshape(3, 3)
    return Homography(np.linalg.inv(T_dst) @ H_n @ T_src)


def _plane_matrix(camera, z):
    R = camera.rotation
    t = R @ (np.array([0.0, 0.0, z]) - camera.center)
    return camera.intrinsics @ np.column_stack([R[:, 0], R[:, 1], t])


def plane_homography(camera, z=0.0):
    """The homography from the horizontal plane at height `z` to pixels."""
    return Homography(_plane_matrix(camera, z))


def local_area_scale(camera, point):
    """Area magnification of the ground plane at a ground point.

    This is the absolute Jacobian determinant of the plane-to-image map at
    `point`, i.e. the local affine approximation of the view.

    Args:
        camera (PinholeCamera): The camera.
        point (array-like): A point (x, y) or (x, y, z) on the plane z = 0
            or at the height given by its third coordinate.

    Returns:
        float: Square pixels per square meter.
    """
    point = np.asarray(point, dtype=float)
    z = point[2] if len(point) == 3 else 0.0
    m = _plane_matrix(camera, z)
    p = m @ np.array([point[0], point[1], 1.0])
    if p[2] <= 0:
        raise BehindCameraError("point behind the camera")
    J = np.empty((2, 2))
    for row in range(2):
        for col in range(2):
            J[row, col] = (m[row, col] * p[2] - p[row] * m[2, col]) / p[2] ** 2
    return float(abs(np.linalg.det(J)))
