# settings.py

"""
Caps and budgets for the closure computations, read from the environment.
"""

import logging
import os
from dataclasses import dataclass, fields
from functools import lru_cache

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

ENV_PREFIX = "TWOCLOSURE_"


@dataclass(frozen=True)
class Settings:
    orbital_cap: int = 20000
    oracle_cap: int = 256
    enumeration_cap: int = 200000
    simple_scan_cap: int = 5000
    socle_samples: int = 512
    agl_cap: int = 2**22
    field_cap: int = 2**20
    intertwiner_tries: int = 64
    intertwiner_scan_cap: int = 2**16
    tuple_tries: int = 1024
    tuple_scan_cap: int = 2**24
    point_stabilizer_cap: int = 2**16
    reduce_tries: int = 2048
    guess_budget: int = 2**16
    seed: int = 0

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Build settings from TWOCLOSURE_* environment variables.

        Returns:
            Settings: defaults overridden by any variable that is set
        """
        values = {}
        for item in fields(cls):
            raw = os.environ.get(ENV_PREFIX + item.name.upper())
            if raw is None or raw == "":
                continue
            try:
                values[item.name] = int(raw)
            except ValueError as e:
                raise ValueError(f"{ENV_PREFIX}{item.name.upper()} must be an integer") from e
        if values:
            logger.info(f"Settings overridden from environment: {values}")
        return cls(**values)


@lru_cache(maxsize=None)
def get_settings() -> Settings:
    """
    Get the process-wide settings.
    """
    load_dotenv()
    return Settings.from_env()
