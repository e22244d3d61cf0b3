"""
Shared fixtures: the default rig, exact correspondence sets and tiny scenes.
"""

from typing import Callable, List

import numpy as np
import pytest

from core.geometry import axis_angle_to_matrix, project_points
from core.synth import default_scene_config
from shared.models import (
    CameraIntrinsics,
    Correspondence,
    ExtrinsicPose,
    PixelPoint,
    RadarPoint,
)


@pytest.fixture
def intrinsics() -> CameraIntrinsics:
    return CameraIntrinsics(fx=1000.0, fy=1000.0, cx=640.0, cy=360.0)


@pytest.fixture
def rig_pose() -> ExtrinsicPose:
    return default_scene_config().true_pose


def random_pose(rng: np.random.Generator, max_angle: float = np.pi - 0.1) -> ExtrinsicPose:
    direction = rng.standard_normal(3)
    direction /= np.linalg.norm(direction)
    angle = rng.uniform(0.0, max_angle)
    return ExtrinsicPose(axis_angle_to_matrix(angle * direction), rng.uniform(-1.0, 1.0, 3))


def exact_correspondences(pose: ExtrinsicPose, K: CameraIntrinsics, n: int,
                          rng: np.random.Generator) -> List[Correspondence]:
    """n noise-free correspondences spread through the camera frustum (depth 5-30 m)."""
    depth = rng.uniform(5.0, 30.0, n)
    cam = np.column_stack([
        depth * rng.uniform(-0.5, 0.5, n),
        depth * rng.uniform(-0.3, 0.3, n),
        depth,
    ])
    points = (cam - pose.translation) @ pose.rotation
    pixels, _ = project_points(K, pose, points)
    return [
        Correspondence(pixel=PixelPoint(float(u), float(v)), radar=RadarPoint(*p), frame_id=i)
        for i, ((u, v), p) in enumerate(zip(pixels, points))
    ]


@pytest.fixture
def make_correspondences() -> Callable[..., List[Correspondence]]:
    """Factory: make_correspondences(pose, K, n, seed) -> exact correspondences."""
    def factory(pose: ExtrinsicPose, K: CameraIntrinsics, n: int, seed: int = 0) -> List[Correspondence]:
        return exact_correspondences(pose, K, n, np.random.default_rng(seed))
    return factory


@pytest.fixture
def make_pose() -> Callable[..., ExtrinsicPose]:
    """Factory: make_pose(seed, max_angle) -> random pose."""
    def factory(seed: int, max_angle: float = np.pi - 0.1) -> ExtrinsicPose:
        return random_pose(np.random.default_rng(seed), max_angle)
    return factory


@pytest.fixture
def noiseless_scene():
    """Short two-target scene without noise or outliers."""
    return default_scene_config(n_frames=120)
