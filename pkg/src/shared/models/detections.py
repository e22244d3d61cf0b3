"""
Detection Models
Per-frame object detections from both sensors and the correspondences formed from them.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from ..errors import ConfigError, InvalidArgumentError
from .geometry import ExtrinsicPose, PixelPoint, RadarPoint


@dataclass(frozen=True)
class CameraDetection:
    """Object center detected in a camera frame (e.g. a bounding-box center)."""
    frame_id: int
    timestamp: float
    center: PixelPoint
    object_id: Optional[int] = None
    class_label: Optional[str] = None

    def __post_init__(self):
        if self.frame_id < 0:
            raise InvalidArgumentError(f"frame_id must be >= 0, got {self.frame_id}")
        if not np.isfinite(self.timestamp):
            raise InvalidArgumentError(f"timestamp must be finite, got {self.timestamp}")


@dataclass(frozen=True)
class RadarDetection:
    """Object center detected in a radar frame."""
    frame_id: int
    timestamp: float
    point: RadarPoint
    object_id: Optional[int] = None
    doppler: Optional[float] = None

    def __post_init__(self):
        if self.frame_id < 0:
            raise InvalidArgumentError(f"frame_id must be >= 0, got {self.frame_id}")
        if not np.isfinite(self.timestamp):
            raise InvalidArgumentError(f"timestamp must be finite, got {self.timestamp}")


Detection = Union[CameraDetection, RadarDetection]


@dataclass(frozen=True)
class Correspondence:
    """
    One radar point paired with its ground-truth pixel.

    Attributes:
        pixel: Observed image point
        radar: Radar point of the same object
        frame_id: Frame both detections came from
        match_score: Matcher confidence in [0, 1]
        object_id: Camera-side track label, when known
    """
    pixel: PixelPoint
    radar: RadarPoint
    frame_id: int
    match_score: float = 1.0
    object_id: Optional[int] = None

    def __post_init__(self):
        if not 0.0 <= self.match_score <= 1.0:
            raise InvalidArgumentError(f"match_score must lie in [0, 1], got {self.match_score}")

    def sort_key(self):
        return (self.frame_id, self.pixel.u, self.pixel.v,
                self.radar.x, self.radar.y, self.radar.z)


class MatcherStrategy(str, Enum):
    ID_ORACLE = "id"
    NEAREST_PRIOR = "nearest"


@dataclass(frozen=True)
class MatcherConfig:
    """How camera and radar detections are paired within a frame."""
    strategy: MatcherStrategy = MatcherStrategy.ID_ORACLE
    prior_pose: Optional[ExtrinsicPose] = None
    gate_px: float = 80.0
    require_one_to_one: bool = True

    def __post_init__(self):
        try:
            strategy = MatcherStrategy(self.strategy)
        except ValueError:
            names = [s.value for s in MatcherStrategy]
            raise ConfigError(f"Unknown matcher strategy '{self.strategy}'. Available: {names}")
        object.__setattr__(self, 'strategy', strategy)
        if not self.gate_px > 0:
            raise ConfigError(f"gate_px must be positive, got {self.gate_px}")
        if strategy is MatcherStrategy.NEAREST_PRIOR and self.prior_pose is None:
            raise ConfigError("The nearest-prior matcher requires a prior pose")
