"""
Reprojection Metrics
Mean absolute (MARE) and root-mean-square (RMSRE) reprojection errors in pixels.
"""

import logging
from typing import Sequence

import numpy as np

from shared.errors import EmptySetError, InvalidArgumentError
from shared.models import CameraIntrinsics, Correspondence, EvaluationReport, ExtrinsicPose, PointError

from ..geometry import project_points
from ..geometry.projection import MIN_DEPTH
from ..solver.objective import BEHIND_CAMERA_RESIDUAL, correspondence_arrays

logger = logging.getLogger(__name__)


def reprojection_distances(pose: ExtrinsicPose, K: CameraIntrinsics,
                           corrs: Sequence[Correspondence]) -> np.ndarray:
    """
    Euclidean pixel distance between each observed pixel and its projected radar point.

    Points at or behind the camera plane (depth <= MIN_DEPTH) get the 1e6
    sentinel distance.

    Raises:
        EmptySetError: corrs is empty
    """
    if len(corrs) == 0:
        raise EmptySetError("Reprojection metrics need at least one correspondence")
    points, pixels = correspondence_arrays(corrs)
    projected, depth = project_points(K, pose, points)
    distances = np.linalg.norm(projected - pixels, axis=1)
    distances[~(depth > MIN_DEPTH)] = BEHIND_CAMERA_RESIDUAL
    return distances


def rmsre(pose: ExtrinsicPose, K: CameraIntrinsics, corrs: Sequence[Correspondence]) -> float:
    """Root-mean-square reprojection error (px)."""
    d = reprojection_distances(pose, K, corrs)
    return float(np.sqrt(np.mean(d ** 2)))


def mare(pose: ExtrinsicPose, K: CameraIntrinsics, corrs: Sequence[Correspondence]) -> float:
    """Mean Euclidean reprojection error (px)."""
    return float(np.mean(reprojection_distances(pose, K, corrs)))


def evaluate(pose: ExtrinsicPose, K: CameraIntrinsics, corrs: Sequence[Correspondence],
             inlier_threshold_px: float) -> EvaluationReport:
    """
    Build the all-points / inliers error report.

    A point is an inlier when its distance is strictly below the threshold.
    Inlier metrics are None when no point qualifies.

    Args:
        pose: Radar-to-camera pose under evaluation
        K: Camera intrinsics
        corrs: Non-empty correspondences
        inlier_threshold_px: Inlier distance threshold (px)

    Returns:
        EvaluationReport with per-point errors in input order
    """
    if not inlier_threshold_px >= 0:
        raise InvalidArgumentError(f"Inlier threshold must be >= 0, got {inlier_threshold_px}")
    d = reprojection_distances(pose, K, corrs)
    inliers = d < inlier_threshold_px
    d_in = d[inliers]

    report = EvaluationReport(
        mare_all=float(np.mean(d)),
        rmsre_all=float(np.sqrt(np.mean(d ** 2))),
        mare_inliers=float(np.mean(d_in)) if d_in.size else None,
        rmsre_inliers=float(np.sqrt(np.mean(d_in ** 2))) if d_in.size else None,
        n_all=int(d.size),
        n_inliers=int(d_in.size),
        inlier_threshold_px=float(inlier_threshold_px),
        per_point=[PointError(index=i, distance=float(dist), is_inlier=bool(flag))
                   for i, (dist, flag) in enumerate(zip(d, inliers))],
    )
    logger.info("Evaluation: MARE %.3f / RMSRE %.3f px over %d points, %d inliers below %.1f px",
                report.mare_all, report.rmsre_all, report.n_all, report.n_inliers, inlier_threshold_px)
    return report
