"""Configuration and numerical defaults for greenstrip"""

import math
import os

from dotenv import load_dotenv

from __version__ import __version__
from utils.logger import logger

load_dotenv()


def _get_int_env(key: str, default: int, min_val: int = 0, max_val: int = 10000) -> int:
    """Get integer from environment with validation"""
    try:
        value = int(os.environ.get(key, str(default)))
    except ValueError:
        logger.warning(f"Invalid {key} value, using default {default}")
        return default

    if value < min_val:
        logger.warning(f"{key}={value} below minimum {min_val}, using {min_val}")
        return min_val
    if value > max_val:
        logger.warning(f"{key}={value} exceeds maximum {max_val}, using {max_val}")
        return max_val
    return value


def _get_float_env(key: str, default: float, min_val: float, max_val: float) -> float:
    """Get positive float from environment with validation"""
    try:
        value = float(os.environ.get(key, repr(default)))
    except ValueError:
        logger.warning(f"Invalid {key} value, using default {default}")
        return default

    if not math.isfinite(value):
        logger.warning(f"{key}={value} is not finite, using default {default}")
        return default
    if value < min_val:
        logger.warning(f"{key}={value} below minimum {min_val}, using {min_val}")
        return min_val
    if value > max_val:
        logger.warning(f"{key}={value} exceeds maximum {max_val}, using {max_val}")
        return max_val
    return value


# Version
VERSION = __version__

# Parallel field assembly (threads); results do not depend on this
WORKERS = _get_int_env("GREENSTRIP_WORKERS", 1, min_val=1, max_val=256)

# Quadrature and series tolerances
QUAD_TOL = _get_float_env("GREENSTRIP_QUAD_TOL", 1e-10, min_val=1e-15, max_val=1e-2)
SERIES_TOL = _get_float_env("GREENSTRIP_SERIES_TOL", 1e-12, min_val=1e-16, max_val=1e-2)
PANEL_ORDER = _get_int_env("GREENSTRIP_PANEL_ORDER", 8, min_val=2, max_val=64)

# Picard iteration
PICARD_TOL = _get_float_env("GREENSTRIP_PICARD_TOL", 1e-6, min_val=1e-14, max_val=1e-1)
MAX_ITER = _get_int_env("GREENSTRIP_MAX_ITER", 50, min_val=1, max_val=10000)

# Finite-difference oracle: ht <= C * hx^2 / eps
FD_STABILITY = _get_float_env("GREENSTRIP_FD_STABILITY", 0.2, min_val=1e-3, max_val=0.5)

# Contour Laplace inversion
CONTOUR_NODES = _get_int_env("GREENSTRIP_CONTOUR_NODES", 32, min_val=4, max_val=64)

# Bessel evaluation
BESSEL_SERIES_CUTOFF = 5.0
BESSEL_CONTRACT_LIMIT = 1e4

# CSV number format: 17 significant digits round-trips a double
CSV_FLOAT_FORMAT = ".17g"
