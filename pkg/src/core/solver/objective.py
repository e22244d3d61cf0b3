"""
Reprojection Objective
Stacked reprojection residuals and their analytic Jacobian with respect to
the 6-vector pose (axis-angle of R followed by T).
"""

from typing import Sequence, Tuple

import numpy as np

from shared.errors import InvalidArgumentError, InvalidLinearizationError
from shared.models import CameraIntrinsics, Correspondence, ExtrinsicPose

from ..geometry import axis_angle_to_matrix, project_points, right_jacobian
from ..geometry.projection import MIN_DEPTH

# Residual assigned to both coordinates of a point at or behind the camera plane
BEHIND_CAMERA_RESIDUAL = 1e6


def correspondence_arrays(corrs: Sequence[Correspondence]) -> Tuple[np.ndarray, np.ndarray]:
    """(N, 3) radar points and (N, 2) observed pixels."""
    points = np.array([c.radar.as_array() for c in corrs], dtype=np.float64).reshape(-1, 3)
    pixels = np.array([c.pixel.as_array() for c in corrs], dtype=np.float64).reshape(-1, 2)
    return points, pixels


def residuals_from_arrays(pose: ExtrinsicPose, K: CameraIntrinsics, points: np.ndarray,
                          pixels: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Residuals (projected - observed) interleaved as u0, v0, u1, v1, ...

    Returns:
        (residuals, depths); points with depth <= MIN_DEPTH get the sentinel residual
    """
    projected, depth = project_points(K, pose, points)
    diff = projected - pixels
    diff[~(depth > MIN_DEPTH)] = BEHIND_CAMERA_RESIDUAL
    return diff.reshape(-1), depth


def residuals(pose: ExtrinsicPose, K: CameraIntrinsics, corrs: Sequence[Correspondence]) -> np.ndarray:
    """
    Reprojection residuals stacked in input order, 2 per correspondence (pixels).

    Points behind the camera contribute (1e6, 1e6) instead of failing.
    """
    points, pixels = correspondence_arrays(corrs)
    return residuals_from_arrays(pose, K, points, pixels)[0]


def jacobian_from_arrays(pose6: np.ndarray, K: CameraIntrinsics, points: np.ndarray) -> np.ndarray:
    x = np.asarray(pose6, dtype=np.float64).reshape(-1)
    if x.shape != (6,) or not np.all(np.isfinite(x)):
        raise InvalidArgumentError(f"Pose vector must be 6 finite values, got {x.tolist()}")
    r, T = x[:3], x[3:]
    R = axis_angle_to_matrix(r)
    cam = points @ R.T + T
    X, Y, Z = cam[:, 0], cam[:, 1], cam[:, 2]
    if np.any(Z <= 0):
        raise InvalidLinearizationError(
            f"{int(np.count_nonzero(Z <= 0))} points have non-positive depth at the linearization pose"
        )

    # d(R p)/dr = -R [p]x J_r(r)
    n = len(points)
    p_cross = np.zeros((n, 3, 3))
    p_cross[:, 0, 1], p_cross[:, 0, 2] = -points[:, 2], points[:, 1]
    p_cross[:, 1, 0], p_cross[:, 1, 2] = points[:, 2], -points[:, 0]
    p_cross[:, 2, 0], p_cross[:, 2, 1] = -points[:, 1], points[:, 0]
    dc_dr = -np.einsum('ij,njk,kl->nil', R, p_cross, right_jacobian(r))

    du_dc = np.column_stack([K.fx / Z, K.skew / Z, -(K.fx * X + K.skew * Y) / Z ** 2])
    dv_dc = np.column_stack([np.zeros(n), K.fy / Z, -K.fy * Y / Z ** 2])

    J = np.empty((2 * n, 6))
    J[0::2, :3] = np.einsum('nj,njk->nk', du_dc, dc_dr)
    J[0::2, 3:] = du_dc
    J[1::2, :3] = np.einsum('nj,njk->nk', dv_dc, dc_dr)
    J[1::2, 3:] = dv_dc
    return J


def jacobian(pose6: np.ndarray, K: CameraIntrinsics, corrs: Sequence[Correspondence]) -> np.ndarray:
    """
    Analytic 2N x 6 Jacobian of residuals() with respect to (axis-angle, T).

    Raises:
        InvalidLinearizationError: Some point has non-positive depth at pose6
    """
    points, _ = correspondence_arrays(corrs)
    return jacobian_from_arrays(pose6, K, points)
