"""
Levenberg-Marquardt Refinement
Minimizes the squared reprojection error over the 6-vector pose.
"""

import logging
from typing import Sequence, Tuple

import numpy as np

from shared.errors import InsufficientDataError, InvalidInitializationError
from shared.models import CameraIntrinsics, Correspondence, ExtrinsicPose, LmConfig, PoseEstimate

from ..geometry import pose_from_vector, pose_to_vector
from .objective import correspondence_arrays, jacobian_from_arrays, residuals_from_arrays

logger = logging.getLogger(__name__)

MIN_POINTS = 4


def _evaluate(x: np.ndarray, K: CameraIntrinsics, points: np.ndarray,
              pixels: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
    r, depth = residuals_from_arrays(pose_from_vector(x), K, points, pixels)
    return r, depth, 0.5 * float(r @ r)


def lm_refine(initial: ExtrinsicPose, K: CameraIntrinsics, corrs: Sequence[Correspondence],
              cfg: LmConfig) -> PoseEstimate:
    """
    Refine a pose by damped Gauss-Newton steps (J^T J + lambda I) delta = -J^T r.

    A step is kept only if it lowers the cost and keeps every point in front
    of the camera; the damping shrinks by damping_down after an accepted step
    and grows by damping_up after a rejected one. Iteration stops when the
    relative cost decrease or the step norm drops below its tolerance, the
    cost reaches zero, or max_iterations is used up (converged=False).

    Args:
        initial: Starting pose, all points must have positive depth
        K: Camera intrinsics
        corrs: At least 4 correspondences
        cfg: Damping schedule and tolerances

    Returns:
        PoseEstimate with an all-True mask and the accepted cost history

    Raises:
        InsufficientDataError: Fewer than 4 correspondences
        InvalidInitializationError: Some point is behind the camera at the initial pose
    """
    n = len(corrs)
    if n < MIN_POINTS:
        raise InsufficientDataError(f"LM refinement needs at least {MIN_POINTS} correspondences, got {n}",
                                    count=n, required=MIN_POINTS)
    points, pixels = correspondence_arrays(corrs)

    x = pose_to_vector(initial)
    r, depth, cost = _evaluate(x, K, points, pixels)
    if np.any(depth <= 0):
        raise InvalidInitializationError(
            f"{int(np.count_nonzero(depth <= 0))} points are behind the camera at the initial pose"
        )

    history = [cost]
    damping = cfg.initial_damping
    converged = False
    iteration = 0
    J = jacobian_from_arrays(x, K, points)
    while iteration < cfg.max_iterations:
        if cost == 0.0:
            converged = True
            break
        iteration += 1

        H = J.T @ J
        delta = np.linalg.solve(H + damping * np.eye(6), -(J.T @ r))
        step_norm = float(np.linalg.norm(delta))
        x_new = x + delta
        r_new, depth_new, cost_new = _evaluate(x_new, K, points, pixels)

        if cost_new < cost and np.all(depth_new > 0):
            decrease = cost - cost_new
            previous = cost
            x, r, cost = x_new, r_new, cost_new
            history.append(cost)
            damping *= cfg.damping_down
            if decrease <= cfg.cost_tol * previous or step_norm <= cfg.param_tol:
                converged = True
                break
            J = jacobian_from_arrays(x, K, points)
        else:
            damping *= cfg.damping_up
            if step_norm <= cfg.param_tol:
                converged = True
                break

    pose = pose_from_vector(x)
    final_cost = _evaluate(x, K, points, pixels)[2]
    if converged:
        logger.info("LM converged after %d iterations: cost %.6g -> %.6g", iteration, history[0], final_cost)
    else:
        logger.warning("LM hit max_iterations=%d without converging (cost %.6g -> %.6g)",
                       cfg.max_iterations, history[0], final_cost)
    return PoseEstimate(
        pose=pose,
        inlier_mask=np.ones(n, dtype=bool),
        iterations_used=iteration,
        final_cost=final_cost,
        converged=converged,
        cost_history=tuple(history),
    )
