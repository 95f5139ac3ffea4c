"""
Global configuration for sketchridge package.
"""

import os
import logging
from typing import Callable, Set, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")


class SketchRidgeConfig:
    """Centralized guards and defaults shared by every sketchridge module."""

    # Default values - overridable through the environment
    DEFAULT_DENSE_ENTRY_LIMIT = 200_000_000
    DEFAULT_DENSIFY_GUARD = 2000
    DEFAULT_DIRECT_SOLVE_GUARD = 5000
    DEFAULT_MAX_WORKERS = 4
    DEFAULT_LOG_LEVEL = "WARNING"

    # Fixed numerical constants
    RANK_DROP_TOLERANCE = 1e-12
    DIVERGENCE_FACTOR = 1e6
    SYMMETRY_TOLERANCE = 1e-10

    _logged: Set[str] = set()  # settings already reported once

    def __init__(self):
        """Initialize configuration with the effective (environment-aware) values."""
        self.dense_entry_limit = self.get_dense_entry_limit()
        self.densify_guard = self.get_densify_guard()
        self.direct_solve_guard = self.get_direct_solve_guard()
        self.max_workers = self.get_max_workers()
        self.log_level = self.get_log_level()

    @classmethod
    def _read(cls, env_name: str, default: T, cast: Callable[[str], T]) -> T:
        raw = os.getenv(env_name)
        value = default
        if raw is not None:
            try:
                value = cast(raw)
            except ValueError:
                logger.warning("Ignoring invalid %s=%r, using default %r", env_name, raw, default)
        if env_name not in cls._logged:
            logger.debug("%s: %r", env_name, value)
            cls._logged.add(env_name)
        return value

    @classmethod
    def get_dense_entry_limit(cls) -> int:
        """Largest n*d for which preconditioned features are materialized densely."""
        return cls._read("SKETCHRIDGE_DENSE_ENTRY_LIMIT", cls.DEFAULT_DENSE_ENTRY_LIMIT, lambda s: int(float(s)))

    @classmethod
    def get_densify_guard(cls) -> int:
        """Largest dimension d for which d x d diagnostics are formed."""
        return cls._read("SKETCHRIDGE_DENSIFY_GUARD", cls.DEFAULT_DENSIFY_GUARD, int)

    @classmethod
    def get_direct_solve_guard(cls) -> int:
        """Largest dimension d for which the reference minimizer uses a dense solve."""
        return cls._read("SKETCHRIDGE_DIRECT_SOLVE_GUARD", cls.DEFAULT_DIRECT_SOLVE_GUARD, int)

    @classmethod
    def get_max_workers(cls) -> int:
        """Number of concurrent benchmark runs."""
        return max(1, cls._read("SKETCHRIDGE_MAX_WORKERS", cls.DEFAULT_MAX_WORKERS, int))

    @classmethod
    def get_log_level(cls) -> str:
        """Log level used by the command-line front end."""
        return cls._read("SKETCHRIDGE_LOG_LEVEL", cls.DEFAULT_LOG_LEVEL, str).upper()
