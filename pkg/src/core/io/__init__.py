"""
IO Module
Detection CSVs, calibration artifacts, reports, overlays and scene files.
"""

from .artifacts import (
    read_calibration,
    read_intrinsics,
    write_calibration,
    write_intrinsics,
    write_overlay,
    write_projection,
    write_report,
)
from .detections import CAMERA_COLUMNS, RADAR_COLUMNS, read_detections, write_detections
from .scene import read_scene_config, scene_config_from_dict, scene_config_to_dict, write_dataset

__all__ = [
    'read_detections', 'write_detections', 'CAMERA_COLUMNS', 'RADAR_COLUMNS',
    'read_calibration', 'write_calibration', 'write_report', 'write_overlay', 'write_projection',
    'read_intrinsics', 'write_intrinsics',
    'read_scene_config', 'scene_config_from_dict', 'scene_config_to_dict', 'write_dataset',
]
