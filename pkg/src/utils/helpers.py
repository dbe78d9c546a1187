"""
Helper Functions - Common utility functions for the application
"""

import logging
import logging.handlers
import sys
from typing import Dict, List, Optional

import numpy as np

import config


def setup_logging(level: Optional[str] = None, log_to_file: Optional[bool] = None) -> None:
    """Setup application logging

    Console output goes to stderr so that reports written to stdout stay clean.
    """
    level_name = (level or config.LOG_LEVEL).upper()
    to_file = config.LOGGING_CONFIG["TO_FILE"] if log_to_file is None else log_to_file

    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]

    if to_file:
        try:
            config.LOGS_DIR.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.handlers.RotatingFileHandler(
                config.LOG_FILE,
                maxBytes=config.LOGGING_CONFIG["MAX_FILE_SIZE"],
                backupCount=config.LOGGING_CONFIG["BACKUP_COUNT"]
            ))
        except OSError as e:
            print(f"Could not open log file {config.LOG_FILE}: {str(e)}", file=sys.stderr)

    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format=config.LOG_FORMAT,
        handlers=handlers,
        force=True
    )

    logger = logging.getLogger(config.APP_NAME)
    logger.debug("Application logging initialized")


def calculate_statistics(values: List[float]) -> Dict[str, float]:
    """Mean and sample standard deviation (zero for a single value)"""
    if not values:
        return {}

    array = np.asarray(values, dtype=float)
    return {
        'count': int(array.size),
        'mean': float(np.mean(array)),
        'std_dev': float(np.std(array, ddof=1)) if array.size > 1 else 0.0,
        'min': float(np.min(array)),
        'max': float(np.max(array))
    }


def finite_or_none(value: Optional[float]) -> Optional[float]:
    """Map NaN and infinities to None for JSON output"""
    if value is None:
        return None
    value = float(value)
    return value if np.isfinite(value) else None
