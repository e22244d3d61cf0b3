"""
Pinhole Projection
Projection of radar points into pixel coordinates, s * P_p = K [R|T] P_r,
and the radar polar/Cartesian conversions.
"""

from typing import Tuple

import numpy as np

from shared.errors import InvalidArgumentError, PointAtCameraPlaneError
from shared.models import CameraIntrinsics, ExtrinsicPose, PixelPoint, RadarPoint

MIN_DEPTH = 1e-9


def transform_points(pose: ExtrinsicPose, points: np.ndarray) -> np.ndarray:
    """Radar-frame points (N, 3) expressed in the camera frame: R p + T."""
    return pose.transform(points)


def project_points(K: CameraIntrinsics, pose: ExtrinsicPose, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Vectorised projection that never raises on depth.

    Args:
        K: Camera intrinsics
        pose: Radar-to-camera pose
        points: (N, 3) radar-frame points

    Returns:
        (pixels, depths): (N, 2) pixels and (N,) camera-frame depths. Pixels of
        points with |depth| < 1e-9 are NaN.
    """
    cam = transform_points(pose, points)
    depth = cam[:, 2]
    on_plane = np.abs(depth) < MIN_DEPTH
    safe = np.where(on_plane, 1.0, depth)
    u = (K.fx * cam[:, 0] + K.skew * cam[:, 1]) / safe + K.cx
    v = K.fy * cam[:, 1] / safe + K.cy
    pixels = np.column_stack([u, v])
    pixels[on_plane] = np.nan
    return pixels, depth


def project(K: CameraIntrinsics, pose: ExtrinsicPose, p: RadarPoint) -> Tuple[PixelPoint, float]:
    """
    Project one radar point.

    Returns:
        (pixel, depth). Points behind the camera are returned with negative
        depth; callers decide whether to reject them.

    Raises:
        PointAtCameraPlaneError: |depth| < 1e-9
    """
    pixels, depth = project_points(K, pose, p.as_array().reshape(1, 3))
    s = float(depth[0])
    if abs(s) < MIN_DEPTH:
        raise PointAtCameraPlaneError(f"Point {p} lies on the camera plane (depth {s:.3e})")
    return PixelPoint(float(pixels[0, 0]), float(pixels[0, 1])), s


def back_project(K: CameraIntrinsics, pixel: PixelPoint, depth: float) -> np.ndarray:
    """Camera-frame point K^-1 (s * [u, v, 1]) for a pixel at the given depth."""
    return K.inverse @ (depth * np.array([pixel.u, pixel.v, 1.0]))


def radar_polar_to_cartesian(range_m: float, azimuth: float, elevation: float) -> RadarPoint:
    """
    Convert a radar measurement to the radar Cartesian frame.

    Azimuth 0 is boresight (+y); positive azimuth turns toward +x.
    """
    if not all(np.isfinite(v) for v in (range_m, azimuth, elevation)):
        raise InvalidArgumentError(f"Polar coordinates must be finite, got {(range_m, azimuth, elevation)}")
    if range_m < 0:
        raise InvalidArgumentError(f"Range must be >= 0, got {range_m}")
    ground = range_m * np.cos(elevation)
    return RadarPoint(
        x=float(ground * np.sin(azimuth)),
        y=float(ground * np.cos(azimuth)),
        z=float(range_m * np.sin(elevation)),
    )


def radar_cartesian_to_polar(p: RadarPoint) -> Tuple[float, float, float]:
    """Inverse of radar_polar_to_cartesian: (range, azimuth, elevation)."""
    range_m = float(np.sqrt(p.x ** 2 + p.y ** 2 + p.z ** 2))
    azimuth = float(np.arctan2(p.x, p.y))
    elevation = float(np.arctan2(p.z, np.hypot(p.x, p.y)))
    return range_m, azimuth, elevation
