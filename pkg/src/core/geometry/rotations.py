"""
Rotation Parameterizations
Rodrigues conversions between axis-angle vectors and rotation matrices,
the SO(3) right Jacobian used by the pose solver, and orthonormalization.
"""

from typing import Union

import numpy as np

from shared.errors import DegenerateMatrixError, InvalidArgumentError
from shared.models import AxisAngle, ExtrinsicPose

SMALL_ANGLE = 1e-8
# Below this sin(angle) near pi the axis is taken from the symmetric part of R
NEAR_PI_SIN = 1e-3
ORTHONORMAL_TOLERANCE = 1e-6
MAX_CONDITION = 1e12

RotationVector = Union[AxisAngle, np.ndarray]


def _rotation_vector(r: RotationVector) -> np.ndarray:
    vec = r.r if isinstance(r, AxisAngle) else np.asarray(r, dtype=np.float64).reshape(-1)
    if vec.shape != (3,):
        raise InvalidArgumentError(f"Axis-angle must have 3 components, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise InvalidArgumentError(f"Axis-angle must be finite, got {vec.tolist()}")
    return vec


def skew(v: np.ndarray) -> np.ndarray:
    """Cross-product matrix: skew(a) @ b == cross(a, b)."""
    x, y, z = v
    return np.array([
        [0.0, -z, y],
        [z, 0.0, -x],
        [-y, x, 0.0]
    ])


def vee(S: np.ndarray) -> np.ndarray:
    """Inverse of skew for the antisymmetric part of S."""
    return 0.5 * np.array([S[2, 1] - S[1, 2], S[0, 2] - S[2, 0], S[1, 0] - S[0, 1]])


def axis_angle_to_matrix(r: RotationVector) -> np.ndarray:
    """
    Rodrigues formula.

    Args:
        r: Rotation vector (any finite 3-vector, or an AxisAngle)

    Returns:
        3x3 rotation matrix
    """
    vec = _rotation_vector(r)
    theta = float(np.linalg.norm(vec))
    K = skew(vec)
    if theta < SMALL_ANGLE:
        return np.eye(3) + K + 0.5 * (K @ K)
    return (np.eye(3)
            + (np.sin(theta) / theta) * K
            + ((1.0 - np.cos(theta)) / theta ** 2) * (K @ K))


def matrix_to_axis_angle(R: np.ndarray) -> AxisAngle:
    """
    Canonical rotation vector of R with angle in [0, pi].

    Raises:
        InvalidArgumentError: R is not a rotation within 1e-6
    """
    M = np.asarray(R, dtype=np.float64)
    if M.shape != (3, 3) or not np.all(np.isfinite(M)):
        raise InvalidArgumentError(f"Expected a finite 3x3 matrix, got shape {M.shape}")
    defect = max(np.max(np.abs(M @ M.T - np.eye(3))), abs(np.linalg.det(M) - 1.0))
    if defect > ORTHONORMAL_TOLERANCE:
        raise InvalidArgumentError(f"Matrix is not a rotation (invariant violated by {defect:.3e})")

    w = vee(M)  # sin(theta) * axis
    sin_theta = float(np.linalg.norm(w))
    cos_theta = float(np.clip((np.trace(M) - 1.0) / 2.0, -1.0, 1.0))
    theta = float(np.arctan2(sin_theta, cos_theta))

    if theta < SMALL_ANGLE:
        return AxisAngle(w)

    if cos_theta < 0.0 and sin_theta < NEAR_PI_SIN:
        # axis * axis^T = (sym(R) - cos I) / (1 - cos)
        B = (0.5 * (M + M.T) - cos_theta * np.eye(3)) / (1.0 - cos_theta)
        i = int(np.argmax(np.diag(B)))
        axis = B[:, i] / np.sqrt(B[i, i])
        if sin_theta > 0.0:
            if np.dot(axis, w) < 0.0:
                axis = -axis
        elif axis[np.flatnonzero(np.abs(axis) > 1e-12)[0]] < 0.0:
            axis = -axis
        return AxisAngle(theta * axis / np.linalg.norm(axis))

    return AxisAngle(w * (theta / sin_theta))


def right_jacobian(r: np.ndarray) -> np.ndarray:
    """
    Right Jacobian of SO(3): R(r + d) ~ R(r) Exp(J_r(r) d).
    """
    vec = _rotation_vector(r)
    theta = float(np.linalg.norm(vec))
    K = skew(vec)
    if theta < 1e-4:
        t2 = theta ** 2
        return np.eye(3) - (0.5 - t2 / 24.0) * K + (1.0 / 6.0 - t2 / 120.0) * (K @ K)
    return (np.eye(3)
            - ((1.0 - np.cos(theta)) / theta ** 2) * K
            + ((theta - np.sin(theta)) / theta ** 3) * (K @ K))


def nearest_rotation(M: np.ndarray) -> np.ndarray:
    """
    Closest rotation to M in Frobenius norm (orthogonal polar factor, det +1).

    Raises:
        DegenerateMatrixError: M is rank deficient (condition estimate above 1e12)
    """
    A = np.asarray(M, dtype=np.float64)
    if A.shape != (3, 3) or not np.all(np.isfinite(A)):
        raise InvalidArgumentError(f"Expected a finite 3x3 matrix, got shape {A.shape}")
    U, s, Vt = np.linalg.svd(A)
    if s[-1] <= 0.0 or s[0] / s[-1] > MAX_CONDITION:
        raise DegenerateMatrixError(f"Matrix is rank deficient (singular values {s.tolist()})")
    R = U @ Vt
    if np.linalg.det(R) < 0.0:
        U[:, -1] = -U[:, -1]
        R = U @ Vt
    return R


def pose_to_vector(pose: ExtrinsicPose) -> np.ndarray:
    """6-vector chart of a pose: axis-angle of R followed by T."""
    return np.concatenate([matrix_to_axis_angle(pose.rotation).r, pose.translation])


def pose_from_vector(x: np.ndarray) -> ExtrinsicPose:
    vec = np.asarray(x, dtype=np.float64).reshape(-1)
    if vec.shape != (6,):
        raise InvalidArgumentError(f"Pose vector must have 6 components, got shape {vec.shape}")
    return ExtrinsicPose(axis_angle_to_matrix(vec[:3]), vec[3:])


def rotation_angle(R: np.ndarray) -> float:
    """Geodesic angle of a rotation matrix, radians."""
    return matrix_to_axis_angle(R).angle
