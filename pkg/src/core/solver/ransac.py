"""
RANSAC Pose Estimation
Robust initial pose from correspondences contaminated by mismatches.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from shared.errors import (
    DegenerateConfigurationError,
    DegenerateMatrixError,
    InsufficientDataError,
    NoConsensusError,
)
from shared.models import CameraIntrinsics, Correspondence, ExtrinsicPose, PoseEstimate, RansacConfig

from ..geometry import project_points
from ..geometry.projection import MIN_DEPTH
from .dlt import dlt_from_arrays
from .objective import correspondence_arrays, residuals_from_arrays

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Hypothesis:
    pose: ExtrinsicPose
    count: int
    rms: float
    iteration: int

    def beats(self, other: Optional['_Hypothesis']) -> bool:
        if other is None:
            return True
        return (self.count, -self.rms) > (other.count, -other.rms)


def inlier_mask(pose: ExtrinsicPose, K: CameraIntrinsics, points: np.ndarray, pixels: np.ndarray,
                threshold: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Points in front of the camera whose reprojection distance is below threshold.

    Returns:
        (mask, distances); distances are NaN on the camera plane
    """
    projected, depth = project_points(K, pose, points)
    distances = np.linalg.norm(projected - pixels, axis=1)
    with np.errstate(invalid='ignore'):
        mask = (depth > MIN_DEPTH) & (distances < threshold)
    return mask, distances


def required_iterations(inlier_ratio: float, sample_size: int, confidence: float) -> float:
    """
    Hypotheses needed to draw one all-inlier sample with the given confidence.

    Returns:
        ceil(log(1 - confidence) / log(1 - w^m)); inf when no inlier has been seen
    """
    if inlier_ratio >= 1.0:
        return 0.0
    p_clean = inlier_ratio ** sample_size
    if p_clean <= 0.0:
        return math.inf
    denom = math.log1p(-p_clean)
    if denom == 0.0:
        return math.inf
    return float(math.ceil(math.log1p(-confidence) / denom))


def _half_squared_norm(pose: ExtrinsicPose, K: CameraIntrinsics, points: np.ndarray,
                       pixels: np.ndarray) -> float:
    r, _ = residuals_from_arrays(pose, K, points, pixels)
    return 0.5 * float(r @ r)


def _score(pose: ExtrinsicPose, K: CameraIntrinsics, points: np.ndarray, pixels: np.ndarray,
           threshold: float, iteration: int) -> _Hypothesis:
    mask, distances = inlier_mask(pose, K, points, pixels, threshold)
    count = int(np.count_nonzero(mask))
    rms = float(np.sqrt(np.mean(distances[mask] ** 2))) if count else math.inf
    return _Hypothesis(pose, count, rms, iteration)


def _refit(best: _Hypothesis, K: CameraIntrinsics, points: np.ndarray, pixels: np.ndarray,
           threshold: float) -> ExtrinsicPose:
    """
    DLT over the inliers of the best hypothesis.

    The refit replaces the sampled pose only when it ranks no lower: more
    inliers, or as many at no larger RMS. A noisy refit can otherwise lose
    the consensus.
    """
    keep = inlier_mask(best.pose, K, points, pixels, threshold)[0]
    try:
        pose = dlt_from_arrays(points[keep], pixels[keep], K)
    except (DegenerateConfigurationError, DegenerateMatrixError) as e:
        logger.warning("Refit on %d inliers failed (%s); keeping the sampled hypothesis", best.count, e)
        return best.pose

    refit = _score(pose, K, points, pixels, threshold, best.iteration)
    if not best.beats(refit):
        return refit.pose
    logger.debug("Refit kept %d inliers (rms %.3f px) against %d (rms %.3f px); keeping the sampled hypothesis",
                 refit.count, refit.rms, best.count, best.rms)
    return best.pose


def ransac_pose(corrs: Sequence[Correspondence], K: CameraIntrinsics, cfg: RansacConfig) -> PoseEstimate:
    """
    Best-supported DLT hypothesis over random 6-point samples, refit on its inliers.

    Iteration i draws its sample from a generator seeded with (cfg.seed, i), so
    results only depend on the input order and the seed. Hypotheses are ranked
    by inlier count, then lower inlier RMS, then earlier iteration. Sampling
    stops at max_iterations or once the adaptive bound for cfg.confidence is met.

    Raises:
        InsufficientDataError: Fewer than min_sample correspondences
        NoConsensusError: No hypothesis reached min_sample inliers
    """
    n = len(corrs)
    m = cfg.min_sample
    if n < m:
        raise InsufficientDataError(f"RANSAC needs at least {m} correspondences, got {n}",
                                    count=n, required=m)
    points, pixels = correspondence_arrays(corrs)

    best: Optional[_Hypothesis] = None
    bound = math.inf
    skipped = 0
    iteration = 0
    while iteration < cfg.max_iterations and iteration < bound:
        rng = np.random.default_rng([cfg.seed, iteration])
        sample = rng.choice(n, size=m, replace=False)
        try:
            pose = dlt_from_arrays(points[sample], pixels[sample], K)
        except (DegenerateConfigurationError, DegenerateMatrixError) as e:
            skipped += 1
            logger.debug("RANSAC iteration %d: degenerate sample skipped (%s)", iteration, e)
            iteration += 1
            continue

        candidate = _score(pose, K, points, pixels, cfg.inlier_threshold, iteration)
        if candidate.beats(best):
            best = candidate
            bound = required_iterations(candidate.count / n, m, cfg.confidence)
            logger.debug("RANSAC iteration %d: %d inliers (rms %.3f px), bound %s",
                         iteration, candidate.count, candidate.rms, bound)
        iteration += 1

    if skipped:
        logger.info("RANSAC skipped %d degenerate samples", skipped)
    if best is None or best.count < m:
        found = 0 if best is None else best.count
        raise NoConsensusError(
            f"No hypothesis reached {m} inliers after {iteration} iterations (best {found})"
        )

    pose = _refit(best, K, points, pixels, cfg.inlier_threshold)
    mask = inlier_mask(pose, K, points, pixels, cfg.inlier_threshold)[0]
    final_cost = _half_squared_norm(pose, K, points[mask], pixels[mask])
    logger.info("RANSAC: %d/%d inliers after %d iterations (best at %d)",
                int(np.count_nonzero(mask)), n, iteration, best.iteration)
    return PoseEstimate(
        pose=pose,
        inlier_mask=mask,
        iterations_used=iteration,
        final_cost=final_cost,
        converged=iteration >= bound,
        ransac_iterations=iteration,
    )
