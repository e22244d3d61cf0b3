"""
Correspondence Module
Turn per-frame detections into matched point correspondences and subsample them spatially.
"""

from .matching import associate, select_time_window
from .sampling import block_sample, correspondences_to_frame, spatial_coverage

__all__ = [
    'associate', 'select_time_window',
    'block_sample', 'spatial_coverage', 'correspondences_to_frame',
]
