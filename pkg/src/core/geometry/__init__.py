"""
Geometry Module
Coordinate conventions, rotation parameterizations and the pinhole projection model.
"""

from .projection import (
    back_project,
    project,
    project_points,
    radar_cartesian_to_polar,
    radar_polar_to_cartesian,
    transform_points,
)
from .rotations import (
    axis_angle_to_matrix,
    matrix_to_axis_angle,
    nearest_rotation,
    pose_from_vector,
    pose_to_vector,
    right_jacobian,
    rotation_angle,
    skew,
)

__all__ = [
    'axis_angle_to_matrix', 'matrix_to_axis_angle', 'nearest_rotation', 'right_jacobian',
    'pose_from_vector', 'pose_to_vector', 'rotation_angle', 'skew',
    'project', 'project_points', 'back_project',
    'radar_polar_to_cartesian', 'radar_cartesian_to_polar', 'transform_points',
]
