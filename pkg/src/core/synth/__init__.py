"""
Synthetic Scene Module
Ground-truth radar-camera scenes for closed-loop verification.
"""

from .scene import (
    RADAR_TO_CAMERA_AXES,
    default_scene_config,
    generate,
    perturb_correspondences,
    pose_error,
)
from .trajectories import position_at, radial_velocity, velocity_at

__all__ = [
    'generate', 'pose_error', 'default_scene_config', 'perturb_correspondences',
    'RADAR_TO_CAMERA_AXES', 'position_at', 'velocity_at', 'radial_velocity',
]
