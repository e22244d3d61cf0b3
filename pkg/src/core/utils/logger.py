"""
Logging setup driven by the `logging` section of config.yaml.
"""

import logging
import logging.handlers
import os
from typing import Any, Dict, Optional

from .config import config

HANDLER_MARKER = "_rccal_handler"


def setup_logging(settings: Optional[Dict[str, Any]] = None, level: Optional[str] = None) -> logging.Logger:
    """
    Configure the root logger once for a CLI run.

    Args:
        settings: Logging section (defaults to config.get_logging_config())
        level: Level name overriding the configured one

    Returns:
        The configured root logger
    """
    settings = settings or config.get_logging_config()
    root = logging.getLogger()
    root.setLevel(str(level or settings['level']).upper())

    formatter = logging.Formatter(settings['format'])
    for handler in list(root.handlers):
        if getattr(handler, HANDLER_MARKER, False):
            root.removeHandler(handler)
            handler.close()

    handlers = [logging.StreamHandler()]
    log_file = settings.get('file')
    if log_file:
        os.makedirs(os.path.dirname(log_file) or '.', exist_ok=True)
        handlers.append(logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=int(settings['max_bytes']),
            backupCount=int(settings['backup_count']),
            encoding='utf-8',
        ))
    for handler in handlers:
        handler.setFormatter(formatter)
        setattr(handler, HANDLER_MARKER, True)
        root.addHandler(handler)

    return root
