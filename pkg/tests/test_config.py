"""Tests for the YAML/environment configuration layer and logging setup."""

import logging

import pytest

from core.utils.config import DEFAULTS, Config
from core.utils.logger import HANDLER_MARKER, setup_logging


@pytest.fixture
def clean_env(monkeypatch):
    for name in ('RCCAL_CONFIG', 'RCCAL_SEED', 'RCCAL_LOG_LEVEL', 'RCCAL_LOG_FILE', 'RCCAL_CREATED_AT'):
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for handler in list(root.handlers):
        if handler not in handlers:
            root.removeHandler(handler)
            handler.close()
    root.setLevel(level)


class TestConfig:

    def test_missing_file_uses_defaults(self, tmp_path, clean_env):
        cfg = Config(str(tmp_path / 'absent.yaml'))
        assert cfg.get_ransac_config() == DEFAULTS['ransac']
        assert cfg.get('sampling.block_size') == 20

    def test_yaml_overrides_defaults(self, tmp_path, clean_env):
        path = tmp_path / 'config.yaml'
        path.write_text("ransac:\n  inlier_threshold_px: 12.5\nmatcher:\n  require_one_to_one: false\n")
        cfg = Config(str(path))
        assert cfg.get('ransac.inlier_threshold_px') == 12.5
        assert cfg.get('ransac.max_iterations') == 2000
        assert cfg.get_matcher_config()['require_one_to_one'] is False

    def test_environment_wins(self, tmp_path, clean_env):
        path = tmp_path / 'config.yaml'
        path.write_text("ransac:\n  seed: 3\n")
        clean_env.setenv('RCCAL_SEED', '11')
        clean_env.setenv('RCCAL_CREATED_AT', '2024-01-01T00:00:00+00:00')
        cfg = Config(str(path))
        assert cfg.get('ransac.seed') == 11
        assert cfg.get_created_at() == '2024-01-01T00:00:00+00:00'

    def test_config_path_from_environment(self, tmp_path, clean_env):
        path = tmp_path / 'other.yaml'
        path.write_text("window:\n  calibration_seconds: 15.0\n")
        clean_env.setenv('RCCAL_CONFIG', str(path))
        assert Config().get_window_config() == {'calibration_seconds': 15.0}

    def test_invalid_yaml_falls_back(self, tmp_path, clean_env):
        path = tmp_path / 'config.yaml'
        path.write_text("ransac: [unclosed\n")
        assert Config(str(path)).get('lm.max_iterations') == 100

    def test_unknown_key_default(self, tmp_path, clean_env):
        assert Config(str(tmp_path / 'absent.yaml')).get('nothing.here', 'fallback') == 'fallback'

    def test_bundled_config(self, clean_env):
        cfg = Config()
        assert cfg.get('matcher.strategy') == 'id'
        assert cfg.get_lm_config()['damping_up'] == 10.0
        assert cfg.get('app.version') == '1.0.0'


class TestSetupLogging:

    def test_level_override(self, restore_root_logger):
        root = setup_logging(level='debug')
        assert root.level == logging.DEBUG

    def test_repeat_calls_do_not_stack_handlers(self, restore_root_logger):
        setup_logging()
        setup_logging()
        marked = [h for h in logging.getLogger().handlers if getattr(h, HANDLER_MARKER, False)]
        assert len(marked) == 1

    def test_file_handler(self, tmp_path, restore_root_logger):
        settings = dict(DEFAULTS['logging'], file=str(tmp_path / 'logs' / 'rccal.log'))
        setup_logging(settings)
        logging.getLogger('core.test').warning("written to file")
        for handler in logging.getLogger().handlers:
            handler.flush()
        assert "written to file" in (tmp_path / 'logs' / 'rccal.log').read_text()
