"""
lapbound - Logging Configuration

Stdlib logging as the sink, structlog for key/value event logging.
Standard output is left to the command line tables, so records go to stderr.
"""

import logging
import sys
from pathlib import Path
from typing import Optional

import structlog

_configured = False


def setup_logging(log_level: str = "INFO", log_file: Optional[str] = None) -> None:
    """
    Setup logging with proper error handling and attribute access.

    Args:
        log_level: Logging level string (INFO, DEBUG, WARNING, ERROR)
        log_file: Optional path of an additional log file
    """
    global _configured

    level = getattr(logging, log_level.upper(), logging.INFO)
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]

    try:
        if log_file:
            path = Path(log_file)
            path.parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(path, encoding="utf-8"))
    except OSError as e:
        # Fall back to stderr only
        print(f"Logging setup warning: {e}", file=sys.stderr)

    logging.basicConfig(
        level=level,
        format="%(asctime)s | %(name)s | %(levelname)s | %(message)s",
        handlers=handlers,
        force=True,
    )

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.KeyValueRenderer(
                key_order=["event"], drop_missing=True
            ),
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )
    _configured = True


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """
    Get logger instance with consistent configuration.

    Args:
        name: Logger name (typically __name__)

    Returns:
        Configured structlog logger bound to the stdlib logger ``name``
    """
    if not _configured:
        from lapbound.core.config import get_settings

        settings = get_settings()
        setup_logging(settings.LOG_LEVEL, settings.LOG_FILE)
    return structlog.get_logger(name)
