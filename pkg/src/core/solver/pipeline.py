"""
Calibration Pipeline
RANSAC initialization followed by Levenberg-Marquardt refinement on the inliers.
"""

import logging
from typing import Sequence

import numpy as np

from shared.models import CameraIntrinsics, Correspondence, LmConfig, PoseEstimate, RansacConfig

from .lm import MIN_POINTS, lm_refine
from .objective import correspondence_arrays, residuals_from_arrays
from .ransac import inlier_mask, ransac_pose

logger = logging.getLogger(__name__)

# Upper bound on refine-then-reclassify passes over the consensus set
MAX_REFINEMENT_ROUNDS = 5


def calibrate(corrs: Sequence[Correspondence], K: CameraIntrinsics,
              ransac_cfg: RansacConfig, lm_cfg: LmConfig) -> PoseEstimate:
    """
    Estimate the radar-to-camera pose from raw correspondences.

    LM refines the pose on the RANSAC inliers, then the inliers are
    re-classified against the refined pose. The pair repeats on the new set
    until it stops changing, it would shrink, or MAX_REFINEMENT_ROUNDS is
    reached, so clean points the DLT hypothesis under-fits are recovered.

    The inlier mask of the result always belongs to the returned pose and
    final_cost covers exactly those inliers, so the inlier RMS reprojection
    error equals sqrt(2 * final_cost / n_inliers).

    Raises:
        InsufficientDataError: Fewer than 6 correspondences
        NoConsensusError: RANSAC found no supported hypothesis
    """
    initial = ransac_pose(corrs, K, ransac_cfg)
    points, pixels = correspondence_arrays(corrs)

    mask = initial.inlier_mask
    refined = None
    iterations = 0
    for round_index in range(MAX_REFINEMENT_ROUNDS):
        start = initial.pose if refined is None else refined.pose
        inliers = [c for c, keep in zip(corrs, mask) if keep]
        candidate = lm_refine(start, K, inliers, lm_cfg)
        new_mask = inlier_mask(candidate.pose, K, points, pixels, ransac_cfg.inlier_threshold)[0]
        if refined is not None and np.count_nonzero(new_mask) < np.count_nonzero(mask):
            logger.debug("Refinement round %d would drop inliers %d -> %d; stopping",
                         round_index, int(np.count_nonzero(mask)), int(np.count_nonzero(new_mask)))
            break

        refined = candidate
        iterations += candidate.iterations_used
        settled = np.array_equal(new_mask, mask)
        mask = new_mask
        if settled or np.count_nonzero(mask) < MIN_POINTS:
            break
        logger.debug("Refinement round %d: inlier set changed to %d points",
                     round_index, int(np.count_nonzero(mask)))

    r, _ = residuals_from_arrays(refined.pose, K, points[mask], pixels[mask])
    final_cost = 0.5 * float(r @ r)

    logger.info("Calibration: %d/%d inliers, final cost %.6g, LM %s after %d iterations",
                int(np.count_nonzero(mask)), len(corrs), final_cost,
                "converged" if refined.converged else "did not converge", iterations)
    return PoseEstimate(
        pose=refined.pose,
        inlier_mask=mask,
        iterations_used=iterations,
        final_cost=final_cost,
        converged=refined.converged,
        cost_history=refined.cost_history,
        ransac_iterations=initial.ransac_iterations,
    )
