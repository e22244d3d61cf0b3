"""
Scene Models
Configuration and output of the synthetic radar-camera scene generator.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from ..errors import ConfigError
from .detections import CameraDetection, RadarDetection
from .geometry import CameraIntrinsics, ExtrinsicPose

Vector3 = Tuple[float, float, float]


class TrajectoryKind(str, Enum):
    LINEAR = "linear"
    CIRCULAR = "circular"
    WAYPOINTS = "waypoints"


@dataclass(frozen=True)
class TrajectorySpec:
    """
    Motion of one target in the radar frame.

    LINEAR uses start + velocity * t. CIRCULAR moves in a horizontal circle
    around center with the given radius, angular rate (rad/s) and phase.
    WAYPOINTS interpolates linearly between (t, x, y, z) samples and holds
    the end points outside their time span.
    """
    kind: TrajectoryKind
    object_id: int
    class_label: Optional[str] = None
    start: Vector3 = (0.0, 0.0, 0.0)
    velocity: Vector3 = (0.0, 0.0, 0.0)
    center: Vector3 = (0.0, 0.0, 0.0)
    radius: float = 0.0
    angular_rate: float = 0.0
    phase: float = 0.0
    waypoints: Tuple[Tuple[float, float, float, float], ...] = ()

    def __post_init__(self):
        try:
            object.__setattr__(self, 'kind', TrajectoryKind(self.kind))
        except ValueError:
            raise ConfigError(f"Unknown trajectory kind '{self.kind}'")
        if self.kind is TrajectoryKind.WAYPOINTS:
            if len(self.waypoints) < 1:
                raise ConfigError(f"Target {self.object_id}: WAYPOINTS needs at least one waypoint")
            times = [w[0] for w in self.waypoints]
            if any(len(w) != 4 for w in self.waypoints):
                raise ConfigError(f"Target {self.object_id}: waypoints are (t, x, y, z) tuples")
            if any(b <= a for a, b in zip(times, times[1:])):
                raise ConfigError(f"Target {self.object_id}: waypoint times must increase")
        if self.kind is TrajectoryKind.CIRCULAR and self.radius < 0:
            raise ConfigError(f"Target {self.object_id}: radius must be >= 0")


@dataclass(frozen=True)
class SceneConfig:
    """A fixed radar-camera rig observing moving targets."""
    true_pose: ExtrinsicPose
    K: CameraIntrinsics
    image_w: int
    image_h: int
    n_frames: int
    targets: Tuple[TrajectorySpec, ...]
    frame_rate: float = 30.0
    pixel_noise_sigma: float = 0.0
    radar_range_sigma: float = 0.0
    radar_azimuth_sigma: float = 0.0
    radar_elevation_sigma: float = 0.0
    outlier_fraction: float = 0.0
    outlier_offset_px: float = 500.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'targets', tuple(self.targets))
        if self.n_frames < 1:
            raise ConfigError(f"n_frames must be >= 1, got {self.n_frames}")
        if self.image_w < 1 or self.image_h < 1:
            raise ConfigError(f"Image size must be positive, got {self.image_w}x{self.image_h}")
        if not self.frame_rate > 0:
            raise ConfigError(f"frame_rate must be positive, got {self.frame_rate}")
        sigmas = (self.pixel_noise_sigma, self.radar_range_sigma,
                  self.radar_azimuth_sigma, self.radar_elevation_sigma)
        if any(s < 0 for s in sigmas):
            raise ConfigError(f"Noise sigmas must be >= 0, got {sigmas}")
        if not 0.0 <= self.outlier_fraction < 1.0:
            raise ConfigError(f"outlier_fraction must lie in [0, 1), got {self.outlier_fraction}")
        if not self.outlier_offset_px > 0:
            raise ConfigError(f"outlier_offset_px must be positive, got {self.outlier_offset_px}")
        if not self.targets:
            raise ConfigError("A scene needs at least one target")
        ids = [t.object_id for t in self.targets]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"Target object ids must be unique, got {ids}")


@dataclass(frozen=True, eq=False)
class SyntheticDataset:
    """Detection streams with the ground truth that generated them."""
    camera_detections: List[CameraDetection]
    radar_detections: List[RadarDetection]
    truth_pose: ExtrinsicPose
    outlier_flags: np.ndarray
    config: Optional[SceneConfig] = field(default=None, repr=False)
