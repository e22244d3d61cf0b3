"""
Calibration Artifacts
JSON persistence of calibration results, evaluation reports and intrinsics,
plus the overlay and projection CSVs behind the result plots.
"""

import json
import logging
import math
import os
from pathlib import Path
from typing import Any, Dict, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from shared.errors import ConfigError, CorruptArtifactError, InvalidArgumentError
from shared.models import (
    CalibrationArtifact,
    CameraIntrinsics,
    Correspondence,
    EvaluationReport,
    ExtrinsicPose,
    RadarDetection,
)

from ..geometry import matrix_to_axis_angle, project_points
from ..metrics import reprojection_distances
from ..solver.objective import correspondence_arrays
from .detections import format_float

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

OVERLAY_COLUMNS = ['frame_id', 'u_gt', 'v_gt', 'u_proj', 'v_proj', 'distance', 'is_inlier']
PROJECTION_COLUMNS = ['frame_id', 'timestamp', 'object_id', 'u', 'v', 'depth', 'behind_camera']


def _ensure_parent(path: PathLike) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)


def write_json(document: Dict[str, Any], path: PathLike) -> None:
    """Stable JSON: sorted keys, two-space indent, shortest round-trip floats."""
    _ensure_parent(path)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(document, f, ensure_ascii=False, indent=2, sort_keys=True, allow_nan=False)
        f.write('\n')


def load_json(path: PathLike, error: type) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            document = json.load(f)
    except json.JSONDecodeError as e:
        raise error(f"{path} is not valid JSON: {e}")
    if not isinstance(document, dict):
        raise error(f"{path} must hold a JSON object")
    return document


def pose_to_dict(pose: ExtrinsicPose) -> Dict[str, Any]:
    return {
        'rotation': [float(v) for v in pose.rotation.reshape(-1)],
        'translation': [float(v) for v in pose.translation],
        'axis_angle': [float(v) for v in matrix_to_axis_angle(pose.rotation).r],
    }


def pose_from_dict(document: Dict[str, Any]) -> ExtrinsicPose:
    """Rebuild a pose from its row-major rotation and translation."""
    rotation = np.array(document['rotation'], dtype=np.float64)
    if rotation.size != 9:
        raise InvalidArgumentError(f"rotation needs 9 values, got {rotation.size}")
    return ExtrinsicPose(rotation.reshape(3, 3), np.array(document['translation'], dtype=np.float64))


def artifact_to_dict(artifact: CalibrationArtifact) -> Dict[str, Any]:
    return {
        'intrinsics': artifact.intrinsics.to_dict(),
        'pose': pose_to_dict(artifact.pose),
        'metrics': artifact.metrics,
        'config': artifact.config,
        'tool_version': artifact.tool_version,
        'created_at': artifact.created_at,
    }


def write_calibration(artifact: CalibrationArtifact, path: PathLike) -> None:
    """Persist a calibration artifact as JSON."""
    write_json(artifact_to_dict(artifact), path)
    logger.info("Wrote calibration artifact to %s", path)


def read_calibration(path: PathLike) -> CalibrationArtifact:
    """
    Load a calibration artifact.

    Raises:
        CorruptArtifactError: Malformed JSON, missing fields, or a rotation
            violating orthonormality / det = +1
    """
    document = load_json(path, CorruptArtifactError)
    try:
        return CalibrationArtifact(
            intrinsics=CameraIntrinsics(**document['intrinsics']),
            pose=pose_from_dict(document['pose']),
            metrics=dict(document.get('metrics', {})),
            config=dict(document.get('config', {})),
            tool_version=str(document['tool_version']),
            created_at=str(document['created_at']),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise CorruptArtifactError(f"{path}: invalid calibration artifact ({e.__class__.__name__}: {e})")


def write_report(report: EvaluationReport, path: PathLike) -> None:
    """Evaluation report as JSON, per-point errors included."""
    write_json(report.to_dict(), path)
    logger.info("Wrote evaluation report to %s", path)


def read_intrinsics(path: PathLike) -> Tuple[CameraIntrinsics, int, int]:
    """
    Load camera intrinsics and image size.

    Expects fx, fy, cx, cy, image_width, image_height and an optional skew.

    Returns:
        (intrinsics, image_width, image_height)
    """
    document = load_json(path, ConfigError)
    try:
        K = CameraIntrinsics(
            fx=float(document['fx']), fy=float(document['fy']),
            cx=float(document['cx']), cy=float(document['cy']),
            skew=float(document.get('skew', 0.0)),
        )
        width, height = int(document['image_width']), int(document['image_height'])
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"{path}: invalid intrinsics ({e.__class__.__name__}: {e})")
    if width < 1 or height < 1:
        raise ConfigError(f"{path}: image size must be positive, got {width}x{height}")
    return K, width, height


def write_intrinsics(K: CameraIntrinsics, image_w: int, image_h: int, path: PathLike) -> None:
    document = K.to_dict()
    document.update({'image_width': int(image_w), 'image_height': int(image_h)})
    write_json(document, path)


def _write_rows(rows: Sequence[Dict[str, str]], columns: Sequence[str], path: PathLike) -> None:
    _ensure_parent(path)
    pd.DataFrame(list(rows), columns=list(columns)).to_csv(path, index=False, lineterminator='\n')


def _cell(value: float) -> str:
    return '' if math.isnan(value) else format_float(value)


def write_overlay(pose: ExtrinsicPose, K: CameraIntrinsics, corrs: Sequence[Correspondence],
                  path: PathLike, inlier_threshold_px: float = 20.0) -> None:
    """
    One row per correspondence: observed pixel, projected radar point, their
    distance and whether it falls strictly below the inlier threshold.
    """
    rows = []
    if corrs:
        points, pixels = correspondence_arrays(corrs)
        projected, _ = project_points(K, pose, points)
        distances = reprojection_distances(pose, K, corrs)
        for c, gt, proj, dist in zip(corrs, pixels, projected, distances):
            rows.append({
                'frame_id': str(c.frame_id),
                'u_gt': format_float(gt[0]),
                'v_gt': format_float(gt[1]),
                'u_proj': _cell(proj[0]),
                'v_proj': _cell(proj[1]),
                'distance': format_float(dist),
                'is_inlier': 'true' if dist < inlier_threshold_px else 'false',
            })
    _write_rows(rows, OVERLAY_COLUMNS, path)
    logger.info("Wrote %d overlay rows to %s", len(rows), path)


def write_projection(pose: ExtrinsicPose, K: CameraIntrinsics, detections: Sequence[RadarDetection],
                     path: PathLike) -> int:
    """
    Project radar detections into the image.

    Rows of points with depth <= 0 are flagged behind_camera; points on the
    camera plane get empty pixel cells.

    Returns:
        Number of rows flagged behind the camera
    """
    rows = []
    behind = 0
    if detections:
        points = np.array([d.point.as_array() for d in detections])
        projected, depth = project_points(K, pose, points)
        for d, pix, s in zip(detections, projected, depth):
            is_behind = not s > 0
            behind += is_behind
            rows.append({
                'frame_id': str(d.frame_id),
                'timestamp': format_float(d.timestamp),
                'object_id': '' if d.object_id is None else str(d.object_id),
                'u': _cell(pix[0]),
                'v': _cell(pix[1]),
                'depth': format_float(s),
                'behind_camera': 'true' if is_behind else 'false',
            })
    _write_rows(rows, PROJECTION_COLUMNS, path)
    logger.info("Projected %d radar detections to %s (%d behind the camera)", len(rows), path, behind)
    return behind
