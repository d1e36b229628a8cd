"""Utility modules"""

from .logger import bind_run_context, clear_run_context, configure_logging, setup_logger
from .config_loader import ConfigLoader, parse_config
from .env_loader import EnvLoader
from .parallel import pairwise_mean, pairwise_sum, run_members

__all__ = [
    "setup_logger",
    "configure_logging",
    "bind_run_context",
    "clear_run_context",
    "ConfigLoader",
    "parse_config",
    "EnvLoader",
    "pairwise_mean",
    "pairwise_sum",
    "run_members",
]
