"""
Solver Module
Closed-form, robust and iterative estimation of the radar-to-camera pose.
"""

from .dlt import dlt_pose
from .lm import lm_refine
from .objective import BEHIND_CAMERA_RESIDUAL, jacobian, residuals
from .pipeline import calibrate
from .ransac import ransac_pose, required_iterations

__all__ = [
    'residuals', 'jacobian', 'BEHIND_CAMERA_RESIDUAL',
    'dlt_pose', 'ransac_pose', 'required_iterations', 'lm_refine', 'calibrate',
]
