"""
Detection Association
Pair camera and radar detections of the same object within each frame.
"""

import logging
from collections import defaultdict
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from shared.errors import ConfigError, InvalidArgumentError
from shared.models import (
    CameraDetection,
    CameraIntrinsics,
    Correspondence,
    MatcherConfig,
    MatcherStrategy,
    RadarDetection,
)

from ..geometry import project_points
from ..geometry.projection import MIN_DEPTH

logger = logging.getLogger(__name__)

D = TypeVar('D', CameraDetection, RadarDetection)


def _camera_key(det: CameraDetection) -> Tuple:
    oid = -1 if det.object_id is None else det.object_id
    return (det.center.u, det.center.v, oid, det.class_label or "", det.timestamp)


def _radar_key(det: RadarDetection) -> Tuple:
    oid = -1 if det.object_id is None else det.object_id
    doppler = 0.0 if det.doppler is None else det.doppler
    return (det.point.x, det.point.y, det.point.z, oid, doppler, det.timestamp)


def _group_by_frame(detections: Iterable[D], key) -> Dict[int, List[D]]:
    frames: Dict[int, List[D]] = defaultdict(list)
    for det in detections:
        frames[det.frame_id].append(det)
    return {fid: sorted(dets, key=key) for fid, dets in frames.items()}


def _pair(cam: CameraDetection, rad: RadarDetection, score: float) -> Correspondence:
    return Correspondence(
        pixel=cam.center,
        radar=rad.point,
        frame_id=cam.frame_id,
        match_score=float(min(1.0, max(0.0, score))),
        object_id=cam.object_id,
    )


def _match_by_id(cameras: List[CameraDetection], radars: List[RadarDetection],
                 one_to_one: bool) -> List[Correspondence]:
    cams_by_id: Dict[int, List[CameraDetection]] = defaultdict(list)
    radars_by_id: Dict[int, List[RadarDetection]] = defaultdict(list)
    for cam in cameras:
        if cam.object_id is not None:
            cams_by_id[cam.object_id].append(cam)
    for rad in radars:
        if rad.object_id is not None:
            radars_by_id[rad.object_id].append(rad)

    pairs = []
    for oid in sorted(set(cams_by_id) & set(radars_by_id)):
        if one_to_one:
            matched = zip(cams_by_id[oid], radars_by_id[oid])
        else:
            matched = product(cams_by_id[oid], radars_by_id[oid])
        pairs.extend(_pair(cam, rad, 1.0) for cam, rad in matched)
    return pairs


def _match_nearest(cameras: List[CameraDetection], radars: List[RadarDetection],
                   K: CameraIntrinsics, cfg: MatcherConfig) -> List[Correspondence]:
    points = np.array([r.point.as_array() for r in radars])
    projected, depth = project_points(K, cfg.prior_pose, points)
    visible = depth > MIN_DEPTH
    if not np.all(visible):
        logger.debug("Frame %d: skipping %d radar detections behind the camera",
                     radars[0].frame_id, int(np.count_nonzero(~visible)))

    centers = np.array([c.center.as_array() for c in cameras])
    dist = np.linalg.norm(projected[:, None, :] - centers[None, :, :], axis=2)

    pairs = []
    if cfg.require_one_to_one:
        candidates = sorted(
            (dist[ri, ci], ri, ci)
            for ri in np.flatnonzero(visible)
            for ci in range(len(cameras))
            if dist[ri, ci] <= cfg.gate_px
        )
        used_radar, used_camera = set(), set()
        for d, ri, ci in candidates:
            if ri in used_radar or ci in used_camera:
                continue
            used_radar.add(ri)
            used_camera.add(ci)
            pairs.append(_pair(cameras[ci], radars[ri], 1.0 - d / cfg.gate_px))
    else:
        for ri in np.flatnonzero(visible):
            ci = int(np.argmin(dist[ri]))
            if dist[ri, ci] <= cfg.gate_px:
                pairs.append(_pair(cameras[ci], radars[ri], 1.0 - dist[ri, ci] / cfg.gate_px))
    return pairs


def associate(camera: Sequence[CameraDetection], radar: Sequence[RadarDetection],
              K: CameraIntrinsics, cfg: MatcherConfig) -> List[Correspondence]:
    """
    Match camera and radar detections frame by frame.

    Args:
        camera: Camera detections of any number of frames
        radar: Radar detections of any number of frames
        K: Camera intrinsics (used by the nearest-prior matcher)
        cfg: Matcher configuration

    Returns:
        Correspondences sorted by (frame_id, u, v); identical for any input ordering
    """
    if cfg.strategy is MatcherStrategy.NEAREST_PRIOR and cfg.prior_pose is None:
        raise ConfigError("The nearest-prior matcher requires a prior pose")

    cam_frames = _group_by_frame(camera, _camera_key)
    radar_frames = _group_by_frame(radar, _radar_key)

    correspondences: List[Correspondence] = []
    for frame_id in sorted(set(cam_frames) & set(radar_frames)):
        if cfg.strategy is MatcherStrategy.ID_ORACLE:
            correspondences.extend(
                _match_by_id(cam_frames[frame_id], radar_frames[frame_id], cfg.require_one_to_one)
            )
        else:
            correspondences.extend(
                _match_nearest(cam_frames[frame_id], radar_frames[frame_id], K, cfg)
            )

    correspondences.sort(key=Correspondence.sort_key)
    logger.info("Associated %d correspondences from %d camera / %d radar detections (%s matcher)",
                len(correspondences), len(camera), len(radar), cfg.strategy.value)
    return correspondences


def select_time_window(camera: Sequence[CameraDetection], radar: Sequence[RadarDetection],
                       start_s: float = 0.0, duration_s: Optional[float] = None
                       ) -> Tuple[List[CameraDetection], List[RadarDetection]]:
    """
    Keep detections with origin + start_s <= timestamp < origin + start_s + duration_s,
    where origin is the earliest timestamp of either stream.

    Args:
        camera: Camera detections
        radar: Radar detections
        start_s: Window start, seconds after the origin
        duration_s: Window length in seconds; None keeps everything after the start
    """
    if duration_s is not None and not duration_s > 0:
        raise InvalidArgumentError(f"Window duration must be positive, got {duration_s}")
    stamps = [d.timestamp for d in camera] + [d.timestamp for d in radar]
    if not stamps:
        return [], []
    begin = min(stamps) + start_s
    end = np.inf if duration_s is None else begin + duration_s

    def inside(det) -> bool:
        return begin <= det.timestamp < end

    kept_camera = [d for d in camera if inside(d)]
    kept_radar = [d for d in radar if inside(d)]
    logger.info("Time window [%.3f, %.3f) s keeps %d/%d camera and %d/%d radar detections",
                begin, end, len(kept_camera), len(camera), len(kept_radar), len(radar))
    return kept_camera, kept_radar
