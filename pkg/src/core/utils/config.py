"""
Configuration Management Module
Centralized configuration handling for the calibration toolkit.
"""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parents[3]
DEFAULT_CONFIG_PATH = PROJECT_ROOT / "config" / "config.yaml"

DEFAULTS: Dict[str, Any] = {
    'app': {'name': 'Radar-Camera Calibration', 'version': '1.0.0'},
    'matcher': {'strategy': 'id', 'gate_px': 80.0, 'require_one_to_one': True},
    'sampling': {'block_size': 20, 'stride_blocks': 2},
    'ransac': {
        'max_iterations': 2000,
        'inlier_threshold_px': 20.0,
        'confidence': 0.999,
        'seed': 0,
    },
    'lm': {
        'max_iterations': 100,
        'initial_damping': 1e-3,
        'damping_up': 10.0,
        'damping_down': 0.1,
        'cost_tol': 1e-10,
        'param_tol': 1e-10,
    },
    'window': {'calibration_seconds': 60.0},
    'logging': {
        'level': 'INFO',
        'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        'file': None,
        'max_bytes': 10 * 1024 * 1024,
        'backup_count': 5,
    },
}


class Config:
    """Centralized configuration manager."""

    def __init__(self, config_path: Optional[str] = None):
        self.config_path = config_path or os.getenv("RCCAL_CONFIG") or str(DEFAULT_CONFIG_PATH)
        self._config = self._load_config()
        self._env_config = self._load_env_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file."""
        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                return yaml.safe_load(f) or {}
        except FileNotFoundError:
            logger.warning("Config file %s not found. Using defaults.", self.config_path)
            return {}
        except yaml.YAMLError as e:
            logger.warning("Error loading config file %s: %s. Using defaults.", self.config_path, e)
            return {}

    def _load_env_config(self) -> Dict[str, Any]:
        """Load configuration from environment variables."""
        seed = os.getenv("RCCAL_SEED")
        return {
            'ransac': {
                'seed': int(seed) if seed else None,
            },
            'logging': {
                'level': os.getenv("RCCAL_LOG_LEVEL"),
                'file': os.getenv("RCCAL_LOG_FILE"),
            },
            'artifact': {
                'created_at': os.getenv("RCCAL_CREATED_AT"),
            },
        }

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value using dot notation (e.g., 'ransac.seed')."""
        keys = key.split('.')

        # Environment first, then YAML, then built-in defaults
        for layer in (self._env_config, self._config, DEFAULTS):
            value = layer
            for k in keys:
                if isinstance(value, dict) and k in value:
                    value = value[k]
                else:
                    value = None
                    break
            if value is not None:
                return value

        return default

    def _section(self, name: str) -> Dict[str, Any]:
        return {k: self.get(f'{name}.{k}', v) for k, v in copy.deepcopy(DEFAULTS[name]).items()}

    def get_app_config(self) -> Dict[str, Any]:
        """Get application specific configuration."""
        return self._section('app')

    def get_matcher_config(self) -> Dict[str, Any]:
        """Get correspondence matcher configuration."""
        return self._section('matcher')

    def get_sampling_config(self) -> Dict[str, Any]:
        """Get block sampling configuration."""
        return self._section('sampling')

    def get_ransac_config(self) -> Dict[str, Any]:
        """Get RANSAC configuration."""
        return self._section('ransac')

    def get_lm_config(self) -> Dict[str, Any]:
        """Get Levenberg-Marquardt configuration."""
        return self._section('lm')

    def get_window_config(self) -> Dict[str, Any]:
        """Get calibration window configuration."""
        return self._section('window')

    def get_logging_config(self) -> Dict[str, Any]:
        """Get logging configuration."""
        return self._section('logging')

    def get_created_at(self) -> Optional[str]:
        """Injected artifact timestamp, if any."""
        return self.get('artifact.created_at')

# Global configuration instance
config = Config()
