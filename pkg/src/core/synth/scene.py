"""
Synthetic Scene Generator
Simulates a fixed radar-camera rig observing moving targets, with seeded
sensor noise and gross radar outliers, as a ground-truth oracle.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np

from shared.errors import ConfigError, EmptySceneError, InvalidArgumentError
from shared.models import (
    CameraDetection,
    CameraIntrinsics,
    Correspondence,
    ExtrinsicPose,
    PixelPoint,
    RadarDetection,
    RadarPoint,
    SceneConfig,
    SyntheticDataset,
    TrajectoryKind,
    TrajectorySpec,
)

from ..geometry import (
    axis_angle_to_matrix,
    back_project,
    project_points,
    radar_cartesian_to_polar,
    radar_polar_to_cartesian,
    rotation_angle,
)
from .trajectories import position_at, radial_velocity, velocity_at

logger = logging.getLogger(__name__)

# Targets closer than this to the camera plane are rejected (m)
MIN_TARGET_DEPTH = 0.5

# Per-axis share of a 2-D pixel noise whose RMS displacement is sigma
PIXEL_AXIS_SCALE = 1.0 / np.sqrt(2.0)

# Radar (x right, y boresight, z up) to camera (x right, y down, z forward)
RADAR_TO_CAMERA_AXES = np.array([[1.0, 0.0, 0.0],
                                 [0.0, 0.0, -1.0],
                                 [0.0, 1.0, 0.0]])


def default_scene_config(seed: int = 0, n_frames: int = 600, **overrides) -> SceneConfig:
    """
    Two targets (a person walking a circle, a car weaving over uneven ground) seen
    at 30 fps by a co-mounted rig a few degrees and centimeters off nominal.

    Args:
        seed: Random seed
        n_frames: Number of frames
        **overrides: Any other SceneConfig field

    Returns:
        SceneConfig
    """
    tilt = axis_angle_to_matrix(np.array([0.03, -0.05, 0.02]))
    settings = dict(
        true_pose=ExtrinsicPose(tilt @ RADAR_TO_CAMERA_AXES, np.array([0.1, -0.2, 0.05])),
        K=CameraIntrinsics(fx=1000.0, fy=1000.0, cx=640.0, cy=360.0),
        image_w=1280,
        image_h=720,
        n_frames=n_frames,
        targets=(
            TrajectorySpec(kind=TrajectoryKind.CIRCULAR, object_id=1, class_label="person",
                           center=(-1.0, 11.0, -1.2), radius=3.0, angular_rate=0.3),
            TrajectorySpec(kind=TrajectoryKind.WAYPOINTS, object_id=2, class_label="car",
                           waypoints=((0.0, -8.0, 22.0, 0.5), (7.0, -2.0, 18.0, 1.5),
                                      (14.0, 4.0, 20.0, 0.2), (20.0, 9.0, 24.0, 1.2))),
        ),
        seed=seed,
    )
    settings.update(overrides)
    return SceneConfig(**settings)


def _in_image(pixel: np.ndarray, cfg: SceneConfig) -> bool:
    return 0.0 <= pixel[0] < cfg.image_w and 0.0 <= pixel[1] < cfg.image_h


def _pixel(cfg: SceneConfig, p: np.ndarray) -> np.ndarray:
    return project_points(cfg.K, cfg.true_pose, p.reshape(1, 3))[0][0]


def generate(cfg: SceneConfig) -> SyntheticDataset:
    """
    Simulate both detection streams frame by frame.

    Each frame draws from its own generator seeded with (cfg.seed, frame_id),
    and every target consumes the same number of draws whether or not it
    turns out visible, so the dataset depends only on the config.

    Raises:
        ConfigError: A target comes within 0.5 m of the camera plane
        EmptySceneError: No camera detection falls inside the image
    """
    R, T = cfg.true_pose.rotation, cfg.true_pose.translation
    camera: List[CameraDetection] = []
    radar: List[RadarDetection] = []
    flags: List[bool] = []

    for frame_id in range(cfg.n_frames):
        t = frame_id / cfg.frame_rate
        rng = np.random.default_rng([cfg.seed, frame_id])
        for target in cfg.targets:
            p_true = position_at(target, t)
            cam_true = R @ p_true + T
            if cam_true[2] <= MIN_TARGET_DEPTH:
                raise ConfigError(
                    f"Target {target.object_id} is {cam_true[2]:.3f} m from the camera plane "
                    f"at frame {frame_id}; it must stay beyond {MIN_TARGET_DEPTH} m"
                )
            radar_noise = rng.standard_normal(3)
            pixel_noise = rng.standard_normal(2)
            outlier_draw = rng.random()
            outlier_angle = rng.uniform(0.0, 2.0 * np.pi)
            outlier_stretch = rng.random()

            pixel_true = _pixel(cfg, p_true)
            is_outlier = bool(outlier_draw < cfg.outlier_fraction)
            range_m, azimuth, elevation = radar_cartesian_to_polar(RadarPoint(*p_true))
            measured = radar_polar_to_cartesian(
                max(0.0, range_m + cfg.radar_range_sigma * radar_noise[0]),
                azimuth + cfg.radar_azimuth_sigma * radar_noise[1],
                elevation + cfg.radar_elevation_sigma * radar_noise[2],
            )
            if is_outlier:
                # Shift parallel to the image plane at the noisy point's own depth
                noisy = measured.as_array()
                cam_noisy = R @ noisy + T
                magnitude = cfg.outlier_offset_px * (1.0 + outlier_stretch)
                shifted = _pixel(cfg, noisy) + magnitude * np.array([np.cos(outlier_angle), np.sin(outlier_angle)])
                cam_shifted = back_project(cfg.K, PixelPoint(*shifted), cam_noisy[2])
                measured = RadarPoint(*(noisy + R.T @ (cam_shifted - cam_noisy)))

            radar.append(RadarDetection(
                frame_id=frame_id,
                timestamp=t,
                point=measured,
                object_id=target.object_id,
                doppler=radial_velocity(p_true, velocity_at(target, t)),
            ))
            flags.append(is_outlier)

            observed = pixel_true + PIXEL_AXIS_SCALE * cfg.pixel_noise_sigma * pixel_noise
            if _in_image(observed, cfg):
                camera.append(CameraDetection(
                    frame_id=frame_id,
                    timestamp=t,
                    center=PixelPoint(float(observed[0]), float(observed[1])),
                    object_id=target.object_id,
                    class_label=target.class_label,
                ))

    if not camera:
        raise EmptySceneError(f"No target is visible in any of the {cfg.n_frames} frames")
    logger.info("Generated %d frames: %d camera / %d radar detections, %d flagged outliers",
                cfg.n_frames, len(camera), len(radar), sum(flags))
    return SyntheticDataset(
        camera_detections=camera,
        radar_detections=radar,
        truth_pose=cfg.true_pose,
        outlier_flags=np.array(flags, dtype=bool),
        config=cfg,
    )


def pose_error(estimate: ExtrinsicPose, truth: ExtrinsicPose) -> Tuple[float, float]:
    """
    Returns:
        (geodesic rotation error in rad, translation error in m)
    """
    rotation_err = rotation_angle(estimate.rotation @ truth.rotation.T)
    translation_err = float(np.linalg.norm(estimate.translation - truth.translation))
    return rotation_err, translation_err


def perturb_correspondences(corrs: Sequence[Correspondence], pixel_noise_sigma: float, n_outliers: int,
                            outlier_offset_px: float = 500.0, seed: int = 0
                            ) -> Tuple[List[Correspondence], np.ndarray]:
    """
    Add isotropic Gaussian pixel noise (RMS displacement pixel_noise_sigma)
    to every correspondence and turn exactly
    n_outliers of them into gross mismatches displaced by at least
    outlier_offset_px.

    Returns:
        (perturbed correspondences in input order, outlier flags)
    """
    n = len(corrs)
    if not 0 <= n_outliers <= n:
        raise InvalidArgumentError(f"n_outliers must lie in [0, {n}], got {n_outliers}")
    if pixel_noise_sigma < 0:
        raise InvalidArgumentError(f"pixel_noise_sigma must be >= 0, got {pixel_noise_sigma}")

    rng = np.random.default_rng(seed)
    noise = PIXEL_AXIS_SCALE * pixel_noise_sigma * rng.standard_normal((n, 2))
    flags = np.zeros(n, dtype=bool)
    flags[rng.choice(n, size=n_outliers, replace=False)] = True
    angles = rng.uniform(0.0, 2.0 * np.pi, size=n)
    magnitudes = outlier_offset_px * (1.0 + rng.random(n))

    perturbed = []
    for i, c in enumerate(corrs):
        offset = noise[i]
        if flags[i]:
            offset = magnitudes[i] * np.array([np.cos(angles[i]), np.sin(angles[i])])
        perturbed.append(Correspondence(
            pixel=PixelPoint(c.pixel.u + float(offset[0]), c.pixel.v + float(offset[1])),
            radar=c.radar,
            frame_id=c.frame_id,
            match_score=c.match_score,
            object_id=c.object_id,
        ))
    return perturbed, flags
