"""Logging configuration"""

import logging
import os
import sys
from pathlib import Path
from typing import Any, List, Optional, TextIO

import structlog

# Applied to structlog events and to records from plain logging.getLogger loggers
_SHARED_PROCESSORS: List[Any] = [
    structlog.contextvars.merge_contextvars,
    structlog.stdlib.add_logger_name,
    structlog.stdlib.add_log_level,
    structlog.processors.TimeStamper(fmt="iso"),
]

_HANDLER_TAG = "_randwave_handler"
_configured = False


def _renderers() -> List[Any]:
    fmt = os.environ.get("LOG_FORMAT", "auto").lower()
    if fmt == "console" or (fmt == "auto" and sys.stderr.isatty()):
        return [structlog.dev.ConsoleRenderer()]
    return [structlog.processors.format_exc_info, structlog.processors.JSONRenderer(sort_keys=True)]


def configure_logging(force: bool = False, stream: Optional[TextIO] = None):
    """
    Route structlog events and stdlib records through one renderer

    Library modules log through ``logging.getLogger(__name__)``; their records
    pick up the run context bound with bind_run_context. Logs go to stderr so
    experiment output on stdout stays clean.

    Environment:
        LOG_LEVEL: level name, default INFO
        LOG_FORMAT: json, console or auto (console on a TTY)
        DEBUG_LOG_PATH: extra file handler when LOG_LEVEL is DEBUG

    Args:
        force: Reconfigure even if already configured
        stream: Handler stream, default sys.stderr
    """
    global _configured
    if _configured and not force:
        return

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            *_SHARED_PROCESSORS,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.StackInfoRenderer(),
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )
    formatter = structlog.stdlib.ProcessorFormatter(
        foreign_pre_chain=_SHARED_PROCESSORS,
        processors=[
            structlog.stdlib.ProcessorFormatter.remove_processors_meta,
            structlog.processors.UnicodeDecoder(),
            *_renderers(),
        ],
    )

    log_level = getattr(logging, os.environ.get("LOG_LEVEL", "INFO").upper(), logging.INFO)
    handlers: List[logging.Handler] = [logging.StreamHandler(stream or sys.stderr)]

    debug_log_path = os.environ.get("DEBUG_LOG_PATH")
    if debug_log_path and log_level == logging.DEBUG:
        try:
            log_file = Path(debug_log_path)
            log_file.parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(log_file, mode='a', encoding='utf-8'))
        except OSError as e:
            sys.stderr.write(f"Warning: Could not create log file handler: {e}\n")

    root = logging.getLogger()
    for old in [h for h in root.handlers if getattr(h, _HANDLER_TAG, False)]:
        root.removeHandler(old)
        old.close()
    for handler in handlers:
        handler.setFormatter(formatter)
        setattr(handler, _HANDLER_TAG, True)
        root.addHandler(handler)
    root.setLevel(log_level)
    _configured = True


def setup_logger(name: Optional[str] = None):
    """
    Setup structured logging

    Args:
        name: Logger name

    Returns:
        Configured structlog logger
    """
    configure_logging()
    return structlog.get_logger(name) if name else structlog.get_logger()


def bind_run_context(**fields: Any):
    """Attach fields such as experiment, seed and out_dir to every following record"""
    structlog.contextvars.bind_contextvars(**fields)


def clear_run_context():
    structlog.contextvars.clear_contextvars()
