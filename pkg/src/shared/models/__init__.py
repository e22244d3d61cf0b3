"""
Shared models module.
"""

from .detections import (
    CameraDetection,
    Correspondence,
    Detection,
    MatcherConfig,
    MatcherStrategy,
    RadarDetection,
)
from .geometry import AxisAngle, CameraIntrinsics, ExtrinsicPose, PixelPoint, RadarPoint
from .results import (
    MIN_SAMPLE,
    CalibrationArtifact,
    EvaluationReport,
    LmConfig,
    PointError,
    PoseEstimate,
    RansacConfig,
)
from .scene import SceneConfig, SyntheticDataset, TrajectoryKind, TrajectorySpec

__all__ = [
    'AxisAngle', 'CameraIntrinsics', 'ExtrinsicPose', 'PixelPoint', 'RadarPoint',
    'CameraDetection', 'RadarDetection', 'Detection', 'Correspondence',
    'MatcherConfig', 'MatcherStrategy',
    'MIN_SAMPLE', 'RansacConfig', 'LmConfig', 'PoseEstimate', 'PointError',
    'EvaluationReport', 'CalibrationArtifact',
    'SceneConfig', 'SyntheticDataset', 'TrajectoryKind', 'TrajectorySpec',
]
