from enum import Enum
import os


class EnvironmentVariables(Enum):
    """Enumeration of environment variable keys."""

    ALGEBRA_LOG_LEVEL = "ALGEBRA_LOG_LEVEL"
    ALGEBRA_DEFAULT_SEED = "ALGEBRA_DEFAULT_SEED"
    ALGEBRA_MAX_TRACE_ITERATIONS = "ALGEBRA_MAX_TRACE_ITERATIONS"
    ALGEBRA_FREEST_ATOM_CAP = "ALGEBRA_FREEST_ATOM_CAP"
    ALGEBRA_EXACT_ATOM_CAP = "ALGEBRA_EXACT_ATOM_CAP"
    ALGEBRA_MAX_PINNING_ENFORCED = "ALGEBRA_MAX_PINNING_ENFORCED"


class Config:
    """Class to manage environment variables for configuration."""

    @staticmethod
    def get_variable(key: EnvironmentVariables, default: str) -> str:
        return os.getenv(key.value, default)

    @staticmethod
    def get_int(key: EnvironmentVariables, default: int) -> int:
        return int(Config.get_variable(key, str(default)))
