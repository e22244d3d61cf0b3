"""
Scene Files
JSON scene configurations for the synthetic generator and the dataset
directory it produces (camera.csv, radar.csv, intrinsics.json, truth.json).
"""

import logging
from dataclasses import fields
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from shared.errors import ConfigError
from shared.models import CameraIntrinsics, ExtrinsicPose, SceneConfig, SyntheticDataset, TrajectorySpec

from ..geometry import axis_angle_to_matrix
from ..synth import RADAR_TO_CAMERA_AXES
from .artifacts import load_json, pose_from_dict, pose_to_dict, write_intrinsics, write_json
from .detections import write_detections

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CAMERA_FILE = 'camera.csv'
RADAR_FILE = 'radar.csv'
INTRINSICS_FILE = 'intrinsics.json'
TRUTH_FILE = 'truth.json'

TRAJECTORY_FIELDS = {f.name for f in fields(TrajectorySpec)}
SCENE_SCALARS = ('image_w', 'image_h', 'n_frames', 'frame_rate', 'pixel_noise_sigma',
                 'radar_range_sigma', 'radar_azimuth_sigma', 'radar_elevation_sigma',
                 'outlier_fraction', 'outlier_offset_px', 'seed')


def _trajectory_from_dict(document: Dict[str, Any]) -> TrajectorySpec:
    unknown = set(document) - TRAJECTORY_FIELDS
    if unknown:
        raise ConfigError(f"Unknown trajectory fields {sorted(unknown)}")
    values = dict(document)
    for key in ('start', 'velocity', 'center'):
        if key in values:
            values[key] = tuple(float(v) for v in values[key])
    if 'waypoints' in values:
        values['waypoints'] = tuple(tuple(float(v) for v in w) for w in values['waypoints'])
    return TrajectorySpec(**values)


def _trajectory_to_dict(spec: TrajectorySpec) -> Dict[str, Any]:
    return {
        'kind': spec.kind.value,
        'object_id': spec.object_id,
        'class_label': spec.class_label,
        'start': list(spec.start),
        'velocity': list(spec.velocity),
        'center': list(spec.center),
        'radius': spec.radius,
        'angular_rate': spec.angular_rate,
        'phase': spec.phase,
        'waypoints': [list(w) for w in spec.waypoints],
    }


def _scene_pose(document: Dict[str, Any]) -> ExtrinsicPose:
    if 'rotation' in document:
        return pose_from_dict(document)
    translation = np.array(document['translation'], dtype=np.float64)
    if 'tilt' in document:
        # Axis-angle offset from the nominal radar-to-camera axes
        tilt = axis_angle_to_matrix(np.array(document['tilt'], dtype=np.float64))
        return ExtrinsicPose(tilt @ RADAR_TO_CAMERA_AXES, translation)
    return ExtrinsicPose(axis_angle_to_matrix(np.array(document['axis_angle'], dtype=np.float64)), translation)


def scene_config_from_dict(document: Dict[str, Any]) -> SceneConfig:
    """
    Build a SceneConfig from its JSON form.

    true_pose is a row-major 'rotation', an 'axis_angle' or a 'tilt' (axis-angle
    offset from the nominal radar-to-camera axes), each with a 'translation'. K holds fx, fy, cx, cy and an optional skew.
    """
    try:
        settings = {key: document[key] for key in SCENE_SCALARS if key in document}
        return SceneConfig(
            true_pose=_scene_pose(document['true_pose']),
            K=CameraIntrinsics(**document['K']),
            targets=tuple(_trajectory_from_dict(t) for t in document['targets']),
            **settings,
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Invalid scene configuration ({e.__class__.__name__}: {e})")


def scene_config_to_dict(cfg: SceneConfig) -> Dict[str, Any]:
    document: Dict[str, Any] = {key: getattr(cfg, key) for key in SCENE_SCALARS}
    document.update({
        'true_pose': pose_to_dict(cfg.true_pose),
        'K': cfg.K.to_dict(),
        'targets': [_trajectory_to_dict(t) for t in cfg.targets],
    })
    return document


def read_scene_config(path: PathLike) -> SceneConfig:
    """Load a scene configuration JSON file."""
    try:
        document = load_json(path, ConfigError)
    except FileNotFoundError:
        raise ConfigError(f"Scene configuration {path} not found")
    return scene_config_from_dict(document)


def write_dataset(dataset: SyntheticDataset, out_dir: PathLike) -> Dict[str, Path]:
    """
    Write a synthetic dataset as a directory of detection streams plus oracle files.

    truth.json holds the true pose, the per-radar-detection outlier flags
    and, when known, the generating scene configuration.

    Returns:
        Mapping of file role to written path
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        'camera': out / CAMERA_FILE,
        'radar': out / RADAR_FILE,
        'intrinsics': out / INTRINSICS_FILE,
        'truth': out / TRUTH_FILE,
    }
    write_detections(dataset.camera_detections, paths['camera'], 'camera')
    write_detections(dataset.radar_detections, paths['radar'], 'radar')

    truth: Dict[str, Any] = {
        'truth_pose': pose_to_dict(dataset.truth_pose),
        'outlier_flags': [bool(f) for f in dataset.outlier_flags],
    }
    if dataset.config is not None:
        write_intrinsics(dataset.config.K, dataset.config.image_w, dataset.config.image_h,
                         paths['intrinsics'])
        truth['config'] = scene_config_to_dict(dataset.config)
    else:
        del paths['intrinsics']
    write_json(truth, paths['truth'])
    logger.info("Wrote synthetic dataset to %s", out)
    return paths
