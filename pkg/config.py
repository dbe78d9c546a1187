"""
Configuration settings for xokde - online multivariate kernel density estimation
"""

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Application Information
APP_NAME = "xokde"
APP_VERSION = "1.0.0"
APP_DESCRIPTION = "Online multivariate kernel density estimation with a classification benchmark"
CLI_NAME = "xokde-bench"

# Paths
BASE_DIR = Path(__file__).parent
DATA_DIR = BASE_DIR / "data"
LOGS_DIR = BASE_DIR / "logs"
LOG_FILE = LOGS_DIR / "xokde.log"

# Covariance representations
COVARIANCE_KINDS = ["full", "diagonal"]

# ================================
# ENGINE CONFIGURATION
# ================================

ENGINE_CONFIG = {
    "D_TH": 0.02,  # compression threshold on the local clustering error
    "FORGETTING": 1.0,  # 1.0 means pure accumulation
    "TRIGGER_FLOOR": 10,  # minimum component count before compression fires
    "TRIGGER_GROWTH": 1.5,  # fire when K >= growth * K after last compression
    "REVITALIZE": True,  # run revitalization after every compression
    "COVARIANCE": "full"
}

# Numerical constants
NUMERICS_CONFIG = {
    "EIGEN_THRESHOLD": 1e-9,  # on max-normalized eigenvalues
    "CORRECTION_FRACTION": 0.01,  # 1% of the mean non-degenerate eigenvalue
    "DEGENERATE_FLOOR": 1e-9,  # used when every eigenvalue is degenerate
    "SIGMA_POINT_M": 3,
    "SPLIT_OFFSET": 0.5,
    "GOLDBERGER_MAX_ITERATIONS": 20,
    "MIN_BANDWIDTH_SAMPLES": 2.0,
    "SYMMETRY_TOLERANCE": 1e-8
}

# ================================
# BENCHMARK CONFIGURATION
# ================================

BENCH_CONFIG = {
    "SHUFFLES": 12,
    "TRAIN_FRACTION": 0.75,
    "SEED": 0,
    "OUTPUT_FORMAT": "json",
    "LABEL_COLUMN": "last",
    "DELIMITER": ",",
    "JOBS": 1,
    "FINAL_COMPRESS": True
}

OUTPUT_FORMATS = ["json", "csv"]

# Serialization
MODEL_FORMAT = {
    "NAME": "xokde-model",
    "VERSION": 1
}

REPORT_SCHEMA = {
    "NAME": "xokde-bench-report",
    "VERSION": 1
}

# Bytes per stored scalar in footprint estimates
SCALAR_WIDTH_BYTES = 8

# Logging Configuration
LOGGING_CONFIG = {
    "LEVEL": "INFO",
    "FORMAT": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    "MAX_FILE_SIZE": 10 * 1024 * 1024,  # 10MB
    "BACKUP_COUNT": 5,
    "TO_FILE": True
}

# Environment-specific settings
ENVIRONMENT = os.getenv("ENVIRONMENT", "development")

if ENVIRONMENT == "production":
    LOGGING_CONFIG["LEVEL"] = "WARNING"

LOG_LEVEL = os.getenv("XOKDE_LOG_LEVEL", LOGGING_CONFIG["LEVEL"]).upper()
LOG_FORMAT = LOGGING_CONFIG["FORMAT"]
