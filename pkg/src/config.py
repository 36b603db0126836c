"""
Configuration management for lattice-maximal.
Loads settings from environment variables and provides defaults.
"""
import os
from pathlib import Path
from typing import Optional
import numpy as np
from dotenv import load_dotenv

# Load .env file if it exists
load_dotenv()


def _optional_int(name: str) -> Optional[int]:
    raw = os.getenv(name)
    return int(raw) if raw not in (None, "") else None


class Config:
    """Application configuration loaded from environment variables."""

    # Reproducibility
    SEED: int = int(os.getenv("CK_SEED", "1"))
    WORKERS: int = int(os.getenv("CK_WORKERS", "1"))

    # Search defaults
    RESTARTS: int = int(os.getenv("CK_RESTARTS", "6"))
    ITERATIONS: int = int(os.getenv("CK_ITERATIONS", "200"))
    TOLERANCE: float = float(os.getenv("CK_TOLERANCE", "1e-9"))
    TRIALS: int = int(os.getenv("CK_TRIALS", "200"))
    STEP_INITIAL: float = float(os.getenv("CK_STEP_INITIAL", "0.5"))
    STEP_DECAY: float = float(os.getenv("CK_STEP_DECAY", "0.5"))
    STEP_MIN: float = float(os.getenv("CK_STEP_MIN", "1e-7"))

    # Exhaustive enumeration
    PARTITION_CAP: int = int(os.getenv("CK_PARTITION_CAP", "12"))
    MAX_PARTITIONS: int = int(os.getenv("CK_MAX_PARTITIONS", "4096"))

    # Gamma-norm quadrature
    QUAD_TOL: float = float(os.getenv("CK_QUAD_TOL", "1e-9"))
    QUAD_ATTEMPTS: int = int(os.getenv("CK_QUAD_ATTEMPTS", "3"))

    # Convexity / weight-condition grids
    GRID_PER_DECADE: int = int(os.getenv("CK_GRID_PER_DECADE", "64"))
    GRID_MIN: float = float(os.getenv("CK_GRID_MIN", "1e-6"))
    GRID_MAX: float = float(os.getenv("CK_GRID_MAX", "1e6"))

    # Fourier index centering (None means floor(n/2))
    CENTER_OFFSET: Optional[int] = _optional_int("CK_CENTER_OFFSET")

    # Tracing
    TRACE: bool = os.getenv("CK_TRACE", "0") == "1"

    # Paths
    ARTIFACTS_DIR: Path = Path(os.getenv("CK_ARTIFACTS_DIR", "artifacts"))

    @classmethod
    def setup_directories(cls):
        """Ensure the artifacts tree exists; called before anything is written under it."""
        cls.ARTIFACTS_DIR.mkdir(parents=True, exist_ok=True)
        if cls.TRACE:
            (cls.ARTIFACTS_DIR / "logs").mkdir(parents=True, exist_ok=True)

    @classmethod
    def validate_required_config(cls) -> list[str]:
        """Check configuration sanity and return list of issues."""
        issues = []

        if cls.WORKERS < 1:
            issues.append("CK_WORKERS must be >= 1 - falling back to a single worker")

        if cls.PARTITION_CAP > 16:
            issues.append("CK_PARTITION_CAP above 16 makes exhaustive enumeration impractical")

        if not (0 < cls.STEP_DECAY < 1):
            issues.append("CK_STEP_DECAY must lie in (0, 1)")

        if cls.GRID_MIN <= 0 or cls.GRID_MAX <= cls.GRID_MIN:
            issues.append("CK_GRID_MIN/CK_GRID_MAX must satisfy 0 < min < max")

        return issues

    @classmethod
    def default_grid(cls):
        """Logarithmic grid used by the convexity and weight-condition checks."""
        decades = np.log10(cls.GRID_MAX) - np.log10(cls.GRID_MIN)
        count = int(round(decades * cls.GRID_PER_DECADE)) + 1
        return np.logspace(np.log10(cls.GRID_MIN), np.log10(cls.GRID_MAX), count)


# Global config instance
config = Config()
