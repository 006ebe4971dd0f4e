"""
Configuration loaded from environment (.env).
Values are read when Settings() is created so CLI flags (--external-solver, --seed, ...) take effect.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import os

from dotenv import load_dotenv

load_dotenv()

# Logic codes accepted on the command line and in JSON theories
LOGIC_CODES = ("out1", "out2", "out3", "out4", "out1c", "out2c", "out3c", "out4c")


def _env(key: str, default: str) -> str:
    return os.environ.get(key, default)


def _env_int(key: str, default: str) -> int:
    return int(os.environ.get(key, default))


def _env_bool(key: str, default: str) -> bool:
    return os.environ.get(key, default).strip().lower() in ("1", "true", "yes", "on")


@dataclass
class Settings:
    # Size caps (2^n blow-up of the oracle and of C2/C4 proof search)
    oracle_cap: int = field(default_factory=lambda: _env_int("IOLOG_ORACLE_CAP", "24"))
    proof_cap: int = field(default_factory=lambda: _env_int("IOLOG_PROOF_CAP", "20"))

    # SAT backend
    sat_learning: bool = field(default_factory=lambda: _env_bool("IOLOG_SAT_LEARNING", "false"))
    external_solver: str = field(default_factory=lambda: _env("IOLOG_EXTERNAL_SOLVER", ""))
    external_timeout: int = field(default_factory=lambda: _env_int("IOLOG_EXTERNAL_TIMEOUT", "60"))

    # Selfcheck battery
    selfcheck_workers: int = field(default_factory=lambda: _env_int("IOLOG_SELFCHECK_WORKERS", "4"))
    selfcheck_random: int = field(default_factory=lambda: _env_int("IOLOG_SELFCHECK_RANDOM", "50"))
    seed: int = field(default_factory=lambda: _env_int("IOLOG_SEED", "0"))

    log_level: str = field(default_factory=lambda: _env("IOLOG_LOG_LEVEL", "WARNING"))


@lru_cache(maxsize=1)
def current_settings() -> Settings:
    return Settings()


def reload_settings() -> Settings:
    """Drop the cached Settings so environment changes become visible."""
    current_settings.cache_clear()
    return current_settings()
