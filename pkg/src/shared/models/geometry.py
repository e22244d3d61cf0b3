"""
Geometry Models
Camera intrinsics, extrinsic pose and point types of the pinhole projection model.

Frames:
- Radar: x right, y forward (boresight), z up.
- Camera: x right, y down, z forward (optical axis).
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Sequence

import numpy as np

from ..errors import InvalidArgumentError

ROTATION_TOLERANCE = 1e-9


def _as_vector3(value: Any, name: str) -> np.ndarray:
    arr = np.array(value, dtype=np.float64).reshape(-1)
    if arr.shape != (3,):
        raise InvalidArgumentError(f"{name} must have 3 components, got shape {np.shape(value)}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} must be finite, got {arr.tolist()}")
    return arr


def rotation_defect(rotation: np.ndarray) -> float:
    """Largest violation of the rotation invariants (orthonormality and det = +1)."""
    R = np.asarray(rotation, dtype=np.float64)
    orth = np.max(np.abs(R @ R.T - np.eye(3)))
    return float(max(orth, abs(np.linalg.det(R) - 1.0)))


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole intrinsics K in pixels."""
    fx: float
    fy: float
    cx: float
    cy: float
    skew: float = 0.0

    def __post_init__(self):
        values = (self.fx, self.fy, self.cx, self.cy, self.skew)
        if not all(np.isfinite(v) for v in values):
            raise InvalidArgumentError(f"Intrinsics must be finite, got {values}")
        if self.fx <= 0 or self.fy <= 0:
            raise InvalidArgumentError(f"Focal lengths must be positive, got fx={self.fx}, fy={self.fy}")

    @property
    def matrix(self) -> np.ndarray:
        """Camera intrinsic matrix."""
        return np.array([
            [self.fx, self.skew, self.cx],
            [0.0, self.fy, self.cy],
            [0.0, 0.0, 1.0]
        ], dtype=np.float64)

    @property
    def inverse(self) -> np.ndarray:
        """Closed-form inverse of the upper-triangular K."""
        fx, fy, cx, cy, s = self.fx, self.fy, self.cx, self.cy, self.skew
        return np.array([
            [1.0 / fx, -s / (fx * fy), (s * cy - cx * fy) / (fx * fy)],
            [0.0, 1.0 / fy, -cy / fy],
            [0.0, 0.0, 1.0]
        ], dtype=np.float64)

    @classmethod
    def from_matrix(cls, K: Sequence[Sequence[float]]) -> "CameraIntrinsics":
        M = np.asarray(K, dtype=np.float64)
        if M.shape != (3, 3) or not np.allclose(M[2], [0.0, 0.0, 1.0]) or M[1, 0] != 0.0:
            raise InvalidArgumentError("K must be upper-triangular with bottom row (0, 0, 1)")
        return cls(fx=float(M[0, 0]), fy=float(M[1, 1]), cx=float(M[0, 2]),
                   cy=float(M[1, 2]), skew=float(M[0, 1]))

    def to_dict(self) -> Dict[str, float]:
        return {'fx': self.fx, 'fy': self.fy, 'cx': self.cx, 'cy': self.cy, 'skew': self.skew}


@dataclass(frozen=True, eq=False)
class ExtrinsicPose:
    """
    Rigid transform from the radar frame into the camera frame: c = R p + T.

    Attributes:
        rotation: 3x3 orthonormal matrix with det +1
        translation: 3-vector in meters
    """
    rotation: np.ndarray
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        R = np.asarray(self.rotation, dtype=np.float64)
        if R.shape != (3, 3) or not np.all(np.isfinite(R)):
            raise InvalidArgumentError(f"Rotation must be a finite 3x3 matrix, got shape {R.shape}")
        defect = rotation_defect(R)
        if defect > ROTATION_TOLERANCE:
            raise InvalidArgumentError(f"Rotation violates orthonormality/det=+1 by {defect:.3e}")
        T = _as_vector3(self.translation, "translation")
        R = R.copy()
        R.flags.writeable = False
        T.flags.writeable = False
        object.__setattr__(self, 'rotation', R)
        object.__setattr__(self, 'translation', T)

    @classmethod
    def identity(cls) -> "ExtrinsicPose":
        return cls(np.eye(3), np.zeros(3))

    @property
    def matrix(self) -> np.ndarray:
        """The 3x4 extrinsic matrix [R|T]."""
        return np.hstack([self.rotation, self.translation.reshape(3, 1)])

    def transform(self, points: np.ndarray) -> np.ndarray:
        """Map (N, 3) radar-frame points into the camera frame."""
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        return pts @ self.rotation.T + self.translation

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtrinsicPose):
            return NotImplemented
        return (np.array_equal(self.rotation, other.rotation)
                and np.array_equal(self.translation, other.translation))

    def __hash__(self) -> int:
        return hash((self.rotation.tobytes(), self.translation.tobytes()))


@dataclass(frozen=True)
class RadarPoint:
    """Point in the radar Cartesian frame, meters."""
    x: float
    y: float
    z: float

    def __post_init__(self):
        _as_vector3((self.x, self.y, self.z), "radar point")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=np.float64)


@dataclass(frozen=True)
class PixelPoint:
    """Continuous pixel coordinates; may lie outside the image."""
    u: float
    v: float

    def __post_init__(self):
        if not (np.isfinite(self.u) and np.isfinite(self.v)):
            raise InvalidArgumentError(f"Pixel must be finite, got ({self.u}, {self.v})")

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v], dtype=np.float64)


@dataclass(frozen=True, eq=False)
class AxisAngle:
    """Canonical rotation vector: direction is the axis, magnitude the angle in [0, pi]."""
    r: np.ndarray

    def __post_init__(self):
        r = _as_vector3(self.r, "axis-angle")
        if np.linalg.norm(r) >= np.pi + 1e-6:
            raise InvalidArgumentError(f"Axis-angle magnitude {np.linalg.norm(r):.6f} exceeds pi")
        r.flags.writeable = False
        object.__setattr__(self, 'r', r)

    @property
    def angle(self) -> float:
        return float(np.linalg.norm(self.r))

    @property
    def axis(self) -> np.ndarray:
        angle = self.angle
        if angle == 0.0:
            return np.array([1.0, 0.0, 0.0])
        return self.r / angle

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AxisAngle):
            return NotImplemented
        return np.array_equal(self.r, other.r)

    def __hash__(self) -> int:
        return hash(self.r.tobytes())
