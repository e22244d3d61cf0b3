"""
Direct Linear Transform
Closed-form pose from six or more radar-pixel correspondences.
"""

import logging
from typing import Sequence, Tuple

import numpy as np

from shared.errors import DegenerateConfigurationError, InsufficientDataError
from shared.models import MIN_SAMPLE, CameraIntrinsics, Correspondence, ExtrinsicPose

from ..geometry import nearest_rotation
from .objective import correspondence_arrays

logger = logging.getLogger(__name__)

# Relative singular value below which the point cloud counts as collinear/coplanar
POINT_SPREAD_TOLERANCE = 1e-9
# Second-smallest singular value of the design matrix relative to the largest
NULL_SPACE_TOLERANCE = 1e-10
# Smallest/second-smallest singular value ratio that makes the null space ambiguous
NULL_SPACE_GAP = 0.99


def _normalize_2d(xy: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Homogeneous points centered at the origin with mean distance sqrt(2)."""
    centroid = xy.mean(axis=0)
    mean_dist = np.linalg.norm(xy - centroid, axis=1).mean()
    scale = np.sqrt(2.0) / mean_dist if mean_dist > 0 else 1.0
    T = np.array([[scale, 0.0, -scale * centroid[0]],
                  [0.0, scale, -scale * centroid[1]],
                  [0.0, 0.0, 1.0]])
    return np.column_stack([xy, np.ones(len(xy))]) @ T.T, T


def _normalize_3d(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Homogeneous points centered at the origin with mean distance sqrt(3)."""
    centroid = points.mean(axis=0)
    mean_dist = np.linalg.norm(points - centroid, axis=1).mean()
    scale = np.sqrt(3.0) / mean_dist if mean_dist > 0 else 1.0
    U = np.eye(4)
    U[:3, :3] *= scale
    U[:3, 3] = -scale * centroid
    return np.column_stack([points, np.ones(len(points))]) @ U.T, U


def _check_point_spread(points: np.ndarray) -> None:
    sv = np.linalg.svd(points - points.mean(axis=0), compute_uv=False)
    if sv[0] == 0.0 or sv[1] / sv[0] < POINT_SPREAD_TOLERANCE:
        raise DegenerateConfigurationError("Radar points are coincident or collinear")
    if sv[2] / sv[0] < POINT_SPREAD_TOLERANCE:
        raise DegenerateConfigurationError("Radar points are coplanar")


def dlt_from_arrays(points: np.ndarray, pixels: np.ndarray, K: CameraIntrinsics) -> ExtrinsicPose:
    """dlt_pose on (N, 3) radar points and (N, 2) pixels."""
    n = len(points)
    if n < MIN_SAMPLE:
        raise InsufficientDataError(
            f"DLT needs at least {MIN_SAMPLE} correspondences, got {n}", count=n, required=MIN_SAMPLE
        )
    _check_point_spread(points)

    # Work in normalized image coordinates so the solution is [R|T] up to scale
    rays = np.column_stack([pixels, np.ones(n)]) @ K.inverse.T
    x_n, T2 = _normalize_2d(rays[:, :2] / rays[:, 2:3])
    X_n, T3 = _normalize_3d(points)

    A = np.zeros((2 * n, 12))
    A[0::2, 0:4] = X_n
    A[0::2, 8:12] = -x_n[:, 0:1] * X_n
    A[1::2, 4:8] = X_n
    A[1::2, 8:12] = -x_n[:, 1:2] * X_n

    _, s, Vt = np.linalg.svd(A, full_matrices=False)
    if s[-2] <= NULL_SPACE_TOLERANCE * s[0] or s[-1] > NULL_SPACE_GAP * s[-2]:
        raise DegenerateConfigurationError(
            f"DLT system has no unique solution (singular values {s[-2]:.3e}, {s[-1]:.3e})"
        )

    P = np.linalg.inv(T2) @ Vt[-1].reshape(3, 4) @ T3
    homogeneous = np.column_stack([points, np.ones(n)])
    w = homogeneous @ P[2]
    if np.count_nonzero(w > 0) < np.count_nonzero(w < 0):
        P = -P

    scale = float(np.linalg.svd(P[:, :3], compute_uv=False).mean())
    R = nearest_rotation(P[:, :3] / scale)
    return ExtrinsicPose(R, P[:, 3] / scale)


def dlt_pose(corrs: Sequence[Correspondence], K: CameraIntrinsics) -> ExtrinsicPose:
    """
    Closed-form pose estimate from at least six correspondences.

    Args:
        corrs: Correspondences with non-coplanar radar points
        K: Camera intrinsics

    Returns:
        Pose with the majority of points in front of the camera

    Raises:
        InsufficientDataError: Fewer than 6 correspondences
        DegenerateConfigurationError: Coplanar/collinear points or ambiguous null space
    """
    points, pixels = correspondence_arrays(corrs)
    return dlt_from_arrays(points, pixels, K)
