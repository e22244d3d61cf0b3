"""
Solver and Evaluation Models
Solver configurations, pose estimates, evaluation reports and the persisted calibration artifact.
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..errors import ConfigError
from .geometry import CameraIntrinsics, ExtrinsicPose

MIN_SAMPLE = 6


@dataclass(frozen=True)
class RansacConfig:
    """RANSAC parameters; min_sample is fixed by the DLT hypothesis solver."""
    max_iterations: int = 2000
    inlier_threshold: float = 20.0
    min_sample: int = MIN_SAMPLE
    confidence: float = 0.999
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not self.inlier_threshold > 0:
            raise ConfigError(f"inlier_threshold must be positive, got {self.inlier_threshold}")
        if self.min_sample != MIN_SAMPLE:
            raise ConfigError(f"min_sample is fixed at {MIN_SAMPLE}, got {self.min_sample}")
        if not 0.0 < self.confidence < 1.0:
            raise ConfigError(f"confidence must lie in (0, 1), got {self.confidence}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class LmConfig:
    """Levenberg-Marquardt schedule."""
    max_iterations: int = 100
    initial_damping: float = 1e-3
    damping_up: float = 10.0
    damping_down: float = 0.1
    cost_tol: float = 1e-10
    param_tol: float = 1e-10

    def __post_init__(self):
        values = asdict(self)
        if any(not v > 0 for v in values.values()):
            raise ConfigError(f"All LM parameters must be positive, got {values}")
        if not self.damping_up > 1.0 > self.damping_down:
            raise ConfigError(
                f"Need damping_up > 1 > damping_down, got {self.damping_up}, {self.damping_down}"
            )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class PoseEstimate:
    """
    Output of the pose solvers.

    Attributes:
        pose: Estimated radar-to-camera pose
        inlier_mask: One flag per input correspondence
        iterations_used: Iterations of the stage that produced the pose
        final_cost: Half the squared residual norm over the inliers (px^2)
        converged: Whether the stage met its stopping criterion
        cost_history: Costs of the accepted LM steps, starting with the initial cost
        ransac_iterations: Hypotheses drawn by RANSAC (0 for LM-only runs)
    """
    pose: ExtrinsicPose
    inlier_mask: np.ndarray
    iterations_used: int
    final_cost: float
    converged: bool
    cost_history: Tuple[float, ...] = ()
    ransac_iterations: int = 0

    @property
    def n_inliers(self) -> int:
        return int(np.count_nonzero(self.inlier_mask))


@dataclass(frozen=True)
class PointError:
    index: int
    distance: float
    is_inlier: bool


@dataclass(frozen=True)
class EvaluationReport:
    """Reprojection error summary over all points and over the inliers."""
    mare_all: float
    rmsre_all: float
    mare_inliers: Optional[float]
    rmsre_inliers: Optional[float]
    n_all: int
    n_inliers: int
    inlier_threshold_px: float
    per_point: List[PointError] = field(default_factory=list)

    def summary(self) -> Dict[str, Any]:
        return {
            'mare_all': self.mare_all,
            'rmsre_all': self.rmsre_all,
            'mare_inliers': self.mare_inliers,
            'rmsre_inliers': self.rmsre_inliers,
            'n_all': self.n_all,
            'n_inliers': self.n_inliers,
            'inlier_threshold_px': self.inlier_threshold_px,
        }

    def to_dict(self) -> Dict[str, Any]:
        report = self.summary()
        report['per_point'] = [
            {'index': p.index, 'distance': p.distance, 'is_inlier': p.is_inlier}
            for p in self.per_point
        ]
        return report


@dataclass(frozen=True)
class CalibrationArtifact:
    """Everything persisted by a calibration run."""
    intrinsics: CameraIntrinsics
    pose: ExtrinsicPose
    metrics: Dict[str, Any]
    config: Dict[str, Any]
    tool_version: str
    created_at: str
