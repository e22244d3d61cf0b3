"""
Metrics Module
Reprojection-error metrics and evaluation reports.
"""

from .reprojection import evaluate, mare, reprojection_distances, rmsre

__all__ = ['reprojection_distances', 'rmsre', 'mare', 'evaluate']
