"""Tests for detection CSVs, calibration artifacts, overlays and scene files."""

import json

import numpy as np
import pandas as pd
import pytest

from core.io import (
    read_calibration,
    read_detections,
    read_intrinsics,
    read_scene_config,
    write_calibration,
    write_dataset,
    write_detections,
    write_intrinsics,
    write_overlay,
    write_projection,
)
from core.io.scene import scene_config_from_dict, scene_config_to_dict
from core.synth import default_scene_config, generate
from shared.errors import (
    ConfigError,
    CorruptArtifactError,
    ParseError,
    SchemaError,
    ValidationError,
)
from shared.models import (
    CalibrationArtifact,
    CameraDetection,
    CameraIntrinsics,
    Correspondence,
    ExtrinsicPose,
    PixelPoint,
    RadarDetection,
    RadarPoint,
)

CAMERA_HEADER = "frame_id,timestamp,u,v,object_id,class\n"
RADAR_HEADER = "frame_id,timestamp,x,y,z,object_id,doppler\n"


@pytest.fixture
def write_text(tmp_path):
    def factory(name: str, text: str):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return path
    return factory


@pytest.fixture
def artifact(rig_pose, intrinsics):
    return CalibrationArtifact(
        intrinsics=intrinsics,
        pose=rig_pose,
        metrics={'rmsre_all': 1.25, 'n_all': 24},
        config={'ransac': {'seed': 0}},
        tool_version='1.0.0',
        created_at='2024-01-01T00:00:00+00:00',
    )


class TestReadDetections:

    def test_header_only_is_empty(self, write_text):
        assert read_detections(write_text('camera.csv', CAMERA_HEADER), 'camera') == []

    def test_camera_row(self, write_text):
        path = write_text('camera.csv', CAMERA_HEADER + "0,0.0,640,360,7,person\n")
        assert read_detections(path, 'camera') == [
            CameraDetection(frame_id=0, timestamp=0.0, center=PixelPoint(640.0, 360.0),
                            object_id=7, class_label='person')
        ]

    def test_radar_optional_fields(self, write_text):
        path = write_text('radar.csv', RADAR_HEADER + "3,0.1,1.0,10.0,-0.5,,\n")
        (det,) = read_detections(path, 'radar')
        assert det.object_id is None
        assert det.doppler is None
        assert det.point == RadarPoint(1.0, 10.0, -0.5)

    def test_negative_frame_id_rejected(self, write_text):
        path = write_text('camera.csv', CAMERA_HEADER + "0,0.0,1,1,,\n-1,0.0,640,360,7,person\n")
        with pytest.raises(ValidationError) as excinfo:
            read_detections(path, 'camera')
        assert excinfo.value.line == 3

    def test_parse_error_names_line_and_column(self, write_text):
        path = write_text('camera.csv', CAMERA_HEADER + "0,abc,640,360,7,person\n")
        with pytest.raises(ParseError) as excinfo:
            read_detections(path, 'camera')
        assert excinfo.value.line == 2
        assert excinfo.value.column == 'timestamp'

    def test_blank_lines_skipped_without_shifting_line_numbers(self, write_text):
        path = write_text('camera.csv', CAMERA_HEADER + "0,0.0,1,1,,\n\n\n1,abc,640,360,7,person\n")
        with pytest.raises(ParseError) as excinfo:
            read_detections(path, 'camera')
        assert excinfo.value.line == 5
        assert excinfo.value.column == 'timestamp'

    def test_blank_lines_yield_no_rows(self, write_text):
        path = write_text('radar.csv', RADAR_HEADER + "\n3,0.1,1.0,10.0,-0.5,,\n\n")
        (det,) = read_detections(path, 'radar')
        assert det.frame_id == 3

    def test_non_utf8_bytes_are_a_parse_error(self, tmp_path):
        path = tmp_path / 'camera.csv'
        path.write_bytes((CAMERA_HEADER + "0,0.0,640,360,7,caf\xe9\n").encode('latin-1'))
        with pytest.raises(ParseError):
            read_detections(path, 'camera')

    def test_non_finite_value_rejected(self, write_text):
        path = write_text('radar.csv', RADAR_HEADER + "0,0.0,inf,10.0,0.0,1,0.0\n")
        with pytest.raises(ValidationError):
            read_detections(path, 'radar')

    def test_missing_header(self, write_text):
        with pytest.raises(SchemaError):
            read_detections(write_text('camera.csv', ""), 'camera')

    def test_wrong_header(self, write_text):
        with pytest.raises(SchemaError) as excinfo:
            read_detections(write_text('radar.csv', CAMERA_HEADER), 'radar')
        assert excinfo.value.line == 1


class TestWriteDetections:

    def test_written_file_reads_back(self, tmp_path):
        detections = [
            RadarDetection(frame_id=1, timestamp=1 / 30, point=RadarPoint(0.1, 12.3, -0.7),
                           object_id=2, doppler=-1.5),
            RadarDetection(frame_id=2, timestamp=2 / 30, point=RadarPoint(0.2, 12.0, -0.7)),
        ]
        path = tmp_path / 'radar.csv'
        write_detections(detections, path, 'radar')
        assert read_detections(path, 'radar') == detections
        assert path.read_text().splitlines()[0] == RADAR_HEADER.strip()


class TestCalibrationArtifact:

    def test_round_trip(self, tmp_path, artifact):
        path = tmp_path / 'calibration.json'
        write_calibration(artifact, path)
        loaded = read_calibration(path)
        assert loaded.pose == artifact.pose
        assert loaded.intrinsics == artifact.intrinsics
        assert loaded.metrics == artifact.metrics
        assert loaded.created_at == artifact.created_at

    def test_stable_json_layout(self, tmp_path, artifact):
        path = tmp_path / 'calibration.json'
        write_calibration(artifact, path)
        text = path.read_text()
        document = json.loads(text)
        assert list(document) == sorted(document)
        assert text.endswith('}\n')
        assert len(document['pose']['rotation']) == 9

    def test_reflection_is_corrupt(self, tmp_path, artifact):
        path = tmp_path / 'calibration.json'
        write_calibration(artifact, path)
        document = json.loads(path.read_text())
        document['pose']['rotation'] = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0]
        path.write_text(json.dumps(document))
        with pytest.raises(CorruptArtifactError):
            read_calibration(path)

    def test_missing_field_is_corrupt(self, write_text):
        with pytest.raises(CorruptArtifactError):
            read_calibration(write_text('calibration.json', '{"pose": {}}'))

    def test_invalid_json_is_corrupt(self, write_text):
        with pytest.raises(CorruptArtifactError):
            read_calibration(write_text('calibration.json', '{not json'))


class TestIntrinsics:

    def test_round_trip(self, tmp_path):
        K = CameraIntrinsics(fx=900.0, fy=910.0, cx=320.5, cy=240.25, skew=0.5)
        path = tmp_path / 'intrinsics.json'
        write_intrinsics(K, 640, 480, path)
        assert read_intrinsics(path) == (K, 640, 480)

    def test_missing_key(self, write_text):
        with pytest.raises(ConfigError):
            read_intrinsics(write_text('intrinsics.json', '{"fx": 1000}'))

    def test_bundled_intrinsics(self):
        from core.utils.config import PROJECT_ROOT
        K, width, height = read_intrinsics(PROJECT_ROOT / 'config' / 'intrinsics.json')
        assert (K.fx, K.cx, width, height) == (1000.0, 640.0, 1280, 720)


class TestOverlayAndProjection:

    def test_overlay_row(self, tmp_path, intrinsics):
        corrs = [Correspondence(pixel=PixelPoint(643.0, 364.0), radar=RadarPoint(0.0, 0.0, 5.0), frame_id=4)]
        path = tmp_path / 'overlay.csv'
        write_overlay(ExtrinsicPose.identity(), intrinsics, corrs, path)
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
        assert df.to_dict('records') == [{
            'frame_id': '4', 'u_gt': '643.0', 'v_gt': '364.0', 'u_proj': '640.0', 'v_proj': '360.0',
            'distance': '5.0', 'is_inlier': 'true',
        }]

    def test_projection_flags_points_behind(self, tmp_path, intrinsics):
        detections = [
            RadarDetection(frame_id=0, timestamp=0.0, point=RadarPoint(0.0, 0.0, 5.0), object_id=1),
            RadarDetection(frame_id=0, timestamp=0.0, point=RadarPoint(0.0, 0.0, -5.0)),
        ]
        path = tmp_path / 'projected.csv'
        assert write_projection(ExtrinsicPose.identity(), intrinsics, detections, path) == 1
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
        assert df.loc[0, ['u', 'v', 'behind_camera']].tolist() == ['640.0', '360.0', 'false']
        assert df.loc[1, 'behind_camera'] == 'true'

    def test_empty_projection_has_header(self, tmp_path, intrinsics):
        path = tmp_path / 'projected.csv'
        write_projection(ExtrinsicPose.identity(), intrinsics, [], path)
        assert path.read_text().strip() == 'frame_id,timestamp,object_id,u,v,depth,behind_camera'


class TestSceneFiles:

    def test_scene_config_round_trip(self):
        cfg = default_scene_config(seed=3, pixel_noise_sigma=1.5)
        restored = scene_config_from_dict(json.loads(json.dumps(scene_config_to_dict(cfg))))
        assert restored.true_pose == cfg.true_pose
        assert restored.targets == cfg.targets
        assert restored.seed == 3
        assert restored.pixel_noise_sigma == 1.5

    def test_tilt_pose(self):
        document = scene_config_to_dict(default_scene_config())
        document['true_pose'] = {'tilt': [0.0, 0.0, 0.0], 'translation': [0.0, 0.0, 0.0]}
        cfg = scene_config_from_dict(document)
        np.testing.assert_allclose(cfg.true_pose.rotation, [[1, 0, 0], [0, 0, -1], [0, 1, 0]])

    def test_unknown_trajectory_field(self):
        document = scene_config_to_dict(default_scene_config())
        document['targets'][0]['wobble'] = 1.0
        with pytest.raises(ConfigError):
            scene_config_from_dict(document)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            read_scene_config(tmp_path / 'absent.json')

    def test_bundled_scene(self):
        from core.utils.config import PROJECT_ROOT
        cfg = read_scene_config(PROJECT_ROOT / 'config' / 'scene.json')
        assert cfg.n_frames == 1800
        assert len(cfg.targets) == 2

    def test_write_dataset(self, tmp_path, noiseless_scene):
        dataset = generate(noiseless_scene)
        paths = write_dataset(dataset, tmp_path / 'synthetic')
        assert set(paths) == {'camera', 'radar', 'intrinsics', 'truth'}
        assert read_detections(paths['camera'], 'camera') == dataset.camera_detections
        truth = json.loads(paths['truth'].read_text())
        assert len(truth['outlier_flags']) == len(dataset.radar_detections)
        assert read_intrinsics(paths['intrinsics']) == (noiseless_scene.K, 1280, 720)
