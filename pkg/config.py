import os
from dotenv import load_dotenv

from matvec.errors import ConfigError

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


class Config:
    """Harness defaults, overridable through the environment or a ``.env`` file."""

    SEED = 20240101
    REPETITIONS = 5
    BITS = 256
    LIMB_BITS = 16
    CUTOFF = 2
    PARALLEL_DEPTH = 2
    OUTPUT_DIR = "results"
    LOG_LEVEL = "INFO"

    def __init__(self, **overrides):
        for key, value in overrides.items():
            if not hasattr(type(self), key):
                raise ConfigError(f"unknown setting {key}")
            setattr(self, key, value)

    @classmethod
    def load(cls) -> "Config":
        """Read every ``HANKEL_*`` variable; malformed numbers raise ``ConfigError``."""
        config = cls(
            SEED=_int_env("HANKEL_SEED", cls.SEED),
            REPETITIONS=_int_env("HANKEL_REPS", cls.REPETITIONS),
            BITS=_int_env("HANKEL_BITS", cls.BITS),
            LIMB_BITS=_int_env("HANKEL_LIMB_BITS", cls.LIMB_BITS),
            CUTOFF=_int_env("HANKEL_CUTOFF", cls.CUTOFF),
            PARALLEL_DEPTH=_int_env("HANKEL_PARALLEL_DEPTH", cls.PARALLEL_DEPTH),
            OUTPUT_DIR=os.getenv("HANKEL_OUTPUT_DIR", cls.OUTPUT_DIR),
            LOG_LEVEL=os.getenv("HANKEL_LOG_LEVEL", cls.LOG_LEVEL).upper(),
        )
        if config.REPETITIONS < 1:
            raise ConfigError(f"HANKEL_REPS must be at least 1, got {config.REPETITIONS}")
        if config.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ConfigError(f"HANKEL_LOG_LEVEL {config.LOG_LEVEL!r} is not a logging level")
        return config
