"""Configuration constants for the Ising lab."""

import math
import os
from pathlib import Path

# Critical low-temperature weight x = exp(-2 beta_c)
CRITICAL_X = math.sqrt(2.0) - 1.0
SQRT_X = math.sqrt(CRITICAL_X)
CORNER_WEIGHT = SQRT_X * math.cos(math.pi / 8.0)  # corner edge weight

# Modified boundary Laplacian weight
BOUNDARY_LAPLACIAN_WEIGHT = 2.0 * (math.sqrt(2.0) - 1.0)

# Exhaustive enumeration
DEFAULT_ENUM_CAP = 36  # full edges

# Tolerances
DEFAULT_TOL = 1e-10

# Monte Carlo
DEFAULT_SEED = 20240601
DEFAULT_MC_BURN_IN = 2000  # sweeps
DEFAULT_MC_THIN = 5  # sweeps between recorded samples

# Loewner integration
DEFAULT_DT = 1e-4
DEFAULT_SWALLOW_EPS = 1e-4
DEFAULT_DRIFT_CAP = 1e3
DEFAULT_HORIZON = 4.0  # capacity time, relative to the squared marked-point scale
DEFAULT_NOISE_CHUNK = 1024

# Quadrature
DEFAULT_JACOBI_NODES = 64

# Finite differences for the drift (relative to the marked-point scale)
DEFAULT_DRIFT_STEP = 1e-5

DEFAULT_FIXTURES = str(Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "domains")
DEFAULT_LOG_LEVEL = "WARNING"

# Environment variable getters


def get_fixtures_path() -> Path:
    """Get fixture domain directory from environment."""
    return Path(os.getenv("IFL_FIXTURES", DEFAULT_FIXTURES))


def get_enum_cap() -> int:
    """Get exhaustive enumeration cap (full edges) from environment."""
    return int(os.getenv("IFL_ENUM_CAP", str(DEFAULT_ENUM_CAP)))


def get_tolerance() -> float:
    """Get identity-check tolerance from environment."""
    return float(os.getenv("IFL_TOL", str(DEFAULT_TOL)))


def get_seed() -> int:
    """Get master seed from environment."""
    return int(os.getenv("IFL_SEED", str(DEFAULT_SEED)))


def get_mc_burn_in() -> int:
    """Get Metropolis burn-in sweeps from environment."""
    return int(os.getenv("IFL_MC_BURN_IN", str(DEFAULT_MC_BURN_IN)))


def get_mc_thin() -> int:
    """Get Metropolis thinning interval from environment."""
    return int(os.getenv("IFL_MC_THIN", str(DEFAULT_MC_THIN)))


def get_dt() -> float:
    """Get Loewner time step from environment."""
    return float(os.getenv("IFL_DT", str(DEFAULT_DT)))


def get_swallow_eps() -> float:
    """Get swallowing gap threshold from environment."""
    return float(os.getenv("IFL_SWALLOW_EPS", str(DEFAULT_SWALLOW_EPS)))


def get_drift_cap() -> float:
    """Get drift magnitude cap from environment."""
    return float(os.getenv("IFL_DRIFT_CAP", str(DEFAULT_DRIFT_CAP)))


def get_horizon() -> float:
    """Get Loewner time horizon from environment."""
    return float(os.getenv("IFL_HORIZON", str(DEFAULT_HORIZON)))


def get_jacobi_nodes() -> int:
    """Get Gauss-Jacobi node count from environment."""
    return int(os.getenv("IFL_JACOBI_NODES", str(DEFAULT_JACOBI_NODES)))


def get_log_level() -> str:
    """Get log level from environment."""
    return os.getenv("IFL_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
