"""Environment defaults for runs"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)


class EnvLoader:
    """Load run defaults (worker count, output directory) from the environment"""

    WORKERS_VAR = "RANDWAVE_WORKERS"
    OUT_VAR = "RANDWAVE_OUT"

    def __init__(self, env_path: Optional[Path] = None):
        env_path = env_path or Path.cwd() / '.env'
        if env_path.exists():
            load_dotenv(env_path)
            logger.info(f"Loaded environment variables from {env_path}")

    @staticmethod
    def get_workers(default: int = 1) -> int:
        """
        Worker count from RANDWAVE_WORKERS

        Args:
            default: Value used when the variable is unset or invalid

        Returns:
            Positive worker count
        """
        raw = os.environ.get(EnvLoader.WORKERS_VAR)
        if raw is None:
            return default
        try:
            workers = int(raw)
        except ValueError:
            logger.warning(f"Ignoring non-integer {EnvLoader.WORKERS_VAR}={raw!r}")
            return default
        if workers < 1:
            logger.warning(f"Ignoring {EnvLoader.WORKERS_VAR}={workers}; must be >= 1")
            return default
        return workers

    @staticmethod
    def get_output_dir() -> Optional[str]:
        """Output directory from RANDWAVE_OUT, if set"""
        return os.environ.get(EnvLoader.OUT_VAR)

    @staticmethod
    def get_run_defaults() -> Dict[str, Any]:
        """Defaults consumed by the CLI before config-file values are applied"""
        return {
            "workers": EnvLoader.get_workers(),
            "output_dir": EnvLoader.get_output_dir(),
        }
