"""Tests for detection association, time windows and block sampling."""

import numpy as np
import pytest

from core.correspondence import associate, block_sample, select_time_window, spatial_coverage
from core.geometry import back_project
from shared.errors import ConfigError
from shared.models import (
    CameraDetection,
    Correspondence,
    ExtrinsicPose,
    MatcherConfig,
    MatcherStrategy,
    PixelPoint,
    RadarDetection,
    RadarPoint,
)


def _cam(frame_id, u, v, object_id=None, timestamp=0.0):
    return CameraDetection(frame_id=frame_id, timestamp=timestamp, center=PixelPoint(u, v),
                           object_id=object_id)


def _radar(frame_id, point, object_id=None, timestamp=0.0):
    return RadarDetection(frame_id=frame_id, timestamp=timestamp, point=RadarPoint(*point),
                          object_id=object_id)


def _corr(u, v, frame_id=0):
    return Correspondence(pixel=PixelPoint(u, v), radar=RadarPoint(0.0, 0.0, 1.0), frame_id=frame_id)


def _radar_at_pixel(K, u, v, depth=10.0):
    """Radar point that projects to (u, v) under the identity pose."""
    return tuple(back_project(K, PixelPoint(u, v), depth))


class TestAssociateById:

    def test_singleton_match(self, intrinsics):
        corrs = associate([_cam(0, 100.0, 100.0, 7)], [_radar(0, (1.0, 2.0, 10.0), 7)],
                          intrinsics, MatcherConfig())
        assert len(corrs) == 1
        assert corrs[0].pixel == PixelPoint(100.0, 100.0)
        assert corrs[0].match_score == 1.0
        assert corrs[0].object_id == 7

    def test_disjoint_ids_give_nothing(self, intrinsics):
        corrs = associate([_cam(0, 100.0, 100.0, 1)], [_radar(0, (1.0, 2.0, 10.0), 2)],
                          intrinsics, MatcherConfig())
        assert corrs == []

    def test_frames_never_mix(self, intrinsics):
        corrs = associate([_cam(0, 100.0, 100.0, 1)], [_radar(1, (1.0, 2.0, 10.0), 1)],
                          intrinsics, MatcherConfig())
        assert corrs == []

    def test_missing_ids_are_ignored(self, intrinsics):
        corrs = associate([_cam(0, 100.0, 100.0)], [_radar(0, (1.0, 2.0, 10.0))],
                          intrinsics, MatcherConfig())
        assert corrs == []

    def test_output_independent_of_input_order(self, intrinsics):
        rng = np.random.default_rng(0)
        cams = [_cam(f, float(rng.uniform(0, 1280)), float(rng.uniform(0, 720)), oid)
                for f in range(5) for oid in (1, 2, 3)]
        radars = [_radar(f, tuple(rng.uniform(1, 20, 3)), oid) for f in range(5) for oid in (1, 2, 3)]
        expected = associate(cams, radars, intrinsics, MatcherConfig())
        for seed in range(5):
            order = np.random.default_rng(seed)
            shuffled_cams = [cams[i] for i in order.permutation(len(cams))]
            shuffled_radars = [radars[i] for i in order.permutation(len(radars))]
            assert associate(shuffled_cams, shuffled_radars, intrinsics, MatcherConfig()) == expected

    def test_output_sorted(self, intrinsics):
        cams = [_cam(1, 50.0, 5.0, 1), _cam(0, 300.0, 5.0, 2), _cam(0, 20.0, 5.0, 3)]
        radars = [_radar(f, (0.0, 0.0, 5.0), oid) for f, oid in ((1, 1), (0, 2), (0, 3))]
        corrs = associate(cams, radars, intrinsics, MatcherConfig())
        assert [(c.frame_id, c.pixel.u) for c in corrs] == [(0, 20.0), (0, 300.0), (1, 50.0)]

    def test_one_to_one_never_reuses_detections(self, intrinsics):
        cams = [_cam(0, 10.0, 10.0, 1), _cam(0, 20.0, 20.0, 1)]
        radars = [_radar(0, (0.0, 0.0, 5.0), 1)]
        one_to_one = associate(cams, radars, intrinsics, MatcherConfig())
        many = associate(cams, radars, intrinsics, MatcherConfig(require_one_to_one=False))
        assert len(one_to_one) == 1
        assert len(many) == 2


class TestAssociateNearest:

    def test_greedy_pairs_within_gate(self, intrinsics):
        pose = ExtrinsicPose.identity()
        cams = [_cam(0, 100.0, 100.0), _cam(0, 500.0, 100.0)]
        radars = [_radar(0, _radar_at_pixel(intrinsics, 110.0, 95.0)),
                  _radar(0, _radar_at_pixel(intrinsics, 505.0, 108.0))]
        cfg = MatcherConfig(strategy=MatcherStrategy.NEAREST_PRIOR, prior_pose=pose, gate_px=80.0)
        corrs = associate(cams, radars, intrinsics, cfg)
        pairs = {(c.pixel.u, c.pixel.v): c.radar for c in corrs}
        assert set(pairs) == {(100.0, 100.0), (500.0, 100.0)}
        np.testing.assert_allclose(pairs[(100.0, 100.0)].as_array(), radars[0].point.as_array())
        np.testing.assert_allclose(pairs[(500.0, 100.0)].as_array(), radars[1].point.as_array())
        scores = sorted(c.match_score for c in corrs)
        assert scores[0] == pytest.approx(1.0 - np.hypot(10.0, 5.0) / 80.0)
        assert scores[1] == pytest.approx(1.0 - np.hypot(5.0, 8.0) / 80.0)

    def test_gate_rejects_far_pairs(self, intrinsics):
        cfg = MatcherConfig(strategy="nearest", prior_pose=ExtrinsicPose.identity(), gate_px=10.0)
        corrs = associate([_cam(0, 100.0, 100.0)], [_radar(0, _radar_at_pixel(intrinsics, 150.0, 100.0))],
                          intrinsics, cfg)
        assert corrs == []

    def test_behind_camera_radar_skipped(self, intrinsics):
        cfg = MatcherConfig(strategy="nearest", prior_pose=ExtrinsicPose.identity())
        corrs = associate([_cam(0, 640.0, 360.0)], [_radar(0, (0.0, 0.0, -5.0))], intrinsics, cfg)
        assert corrs == []

    def test_one_to_one_keeps_closest(self, intrinsics):
        cfg = MatcherConfig(strategy="nearest", prior_pose=ExtrinsicPose.identity())
        radars = [_radar(0, _radar_at_pixel(intrinsics, 103.0, 100.0)),
                  _radar(0, _radar_at_pixel(intrinsics, 110.0, 100.0))]
        corrs = associate([_cam(0, 100.0, 100.0)], radars, intrinsics, cfg)
        assert len(corrs) == 1
        np.testing.assert_allclose(corrs[0].radar.as_array(), radars[0].point.as_array())

    def test_requires_prior(self):
        with pytest.raises(ConfigError):
            MatcherConfig(strategy=MatcherStrategy.NEAREST_PRIOR)

    def test_unknown_strategy(self):
        with pytest.raises(ConfigError):
            MatcherConfig(strategy="hungarian")

    def test_gate_must_be_positive(self):
        with pytest.raises(ConfigError):
            MatcherConfig(gate_px=0.0)


class TestSelectTimeWindow:

    def test_window_relative_to_first_timestamp(self):
        cams = [_cam(i, 1.0, 1.0, timestamp=100.0 + i) for i in range(10)]
        radars = [_radar(i, (0.0, 0.0, 1.0), timestamp=100.5 + i) for i in range(10)]
        kept_cams, kept_radars = select_time_window(cams, radars, 0.0, 5.0)
        assert [c.frame_id for c in kept_cams] == [0, 1, 2, 3, 4]
        assert [r.frame_id for r in kept_radars] == [0, 1, 2, 3, 4]

    def test_start_offset_without_duration(self):
        cams = [_cam(i, 1.0, 1.0, timestamp=float(i)) for i in range(120)]
        kept, _ = select_time_window(cams, [], 60.0)
        assert len(kept) == 60
        assert kept[0].timestamp == 60.0

    def test_empty_inputs(self):
        assert select_time_window([], [], 0.0, 1.0) == ([], [])


class TestBlockSample:

    def test_worked_example(self):
        corrs = [_corr(5.0, 5.0), _corr(10.0, 12.0), _corr(45.0, 48.0)]
        picked = block_sample(corrs, 100, 100, block_size=20, stride_blocks=2)
        assert [(c.pixel.u, c.pixel.v) for c in picked] == [(10.0, 12.0), (45.0, 48.0)]

    def test_single_correspondence_unchanged(self):
        corr = _corr(50.0, 50.0)
        assert block_sample([corr], 100, 100) == [corr]

    def test_stride_one_keeps_one_per_cell(self):
        corrs = [_corr(x + 3.0, y + 7.0) for x in (60.0, 0.0, 20.0) for y in (40.0, 0.0)]
        picked = block_sample(corrs, 100, 100, block_size=20, stride_blocks=1)
        assert picked == sorted(corrs, key=Correspondence.sort_key)

    def test_empty_and_out_of_image(self):
        assert block_sample([], 100, 100) == []
        assert block_sample([_corr(-1.0, 5.0), _corr(5.0, 100.0)], 100, 100) == []

    def test_tie_prefers_lower_frame(self):
        corrs = [_corr(12.0, 10.0, frame_id=3), _corr(12.0, 10.0, frame_id=1)]
        assert block_sample(corrs, 100, 100)[0].frame_id == 1

    @pytest.mark.slow
    def test_random_sets_obey_cell_rules(self):
        rng = np.random.default_rng(7)
        for _ in range(10000):
            n = int(rng.integers(0, 80))
            corrs = [_corr(float(u), float(v), int(f)) for u, v, f in
                     zip(rng.uniform(-10, 210, n), rng.uniform(-10, 110, n), rng.integers(0, 5, n))]
            picked = block_sample(corrs, 200, 100, block_size=20, stride_blocks=2)

            cells = [(int(c.pixel.u // 20), int(c.pixel.v // 20)) for c in picked]
            assert len(cells) == len(set(cells))
            assert all(bx % 2 == 0 and by % 2 == 0 for bx, by in cells)
            assert len(picked) <= min(len(corrs), 5 * 3)
            assert all(c in corrs for c in picked)
            assert block_sample(picked, 200, 100, block_size=20, stride_blocks=2) == picked


class TestSpatialCoverage:

    def test_empty(self):
        assert spatial_coverage([], 100, 100, 20) == 0.0

    def test_all_cells_occupied(self):
        corrs = [_corr(x + 10.0, y + 10.0) for x in range(0, 100, 20) for y in range(0, 100, 20)]
        assert spatial_coverage(corrs, 100, 100, 20) == 1.0

    def test_fraction(self):
        corrs = [_corr(10.0 + 20.0 * i, 10.0) for i in range(5)] + [_corr(12.0, 11.0)]
        assert spatial_coverage(corrs, 100, 100, 20) == pytest.approx(0.2)
