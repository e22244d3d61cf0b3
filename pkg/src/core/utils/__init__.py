"""
Core utilities module.
"""

from .config import config, Config
from .logger import setup_logging

__all__ = ['config', 'Config', 'setup_logging']
