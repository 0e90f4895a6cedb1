"""Logging configuration and setup.

Structured logging with structlog on top of the standard library handlers.
Console output goes to stderr (pretty in development, JSON otherwise) so that
stdout stays reserved for command results. When ``ODHALL_LOG_DIR`` is set,
every event is also appended to a daily JSONL file; sweep workers share that
file, so each entry carries its process id.

Run-scoped context (model, grid size, output directory) is bound with
``run_context`` and merged into every event emitted inside it.
"""

import json
import logging
import os
import sys
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import (
    Any,
    Iterator,
    List,
    Optional,
)

import structlog

from odhall.core.config import (
    Environment,
    settings,
)


def get_log_file_path() -> Optional[Path]:
    """Get the current log file path based on date and environment.

    Returns:
        Optional[Path]: The path to the log file, or None when file logging is off
    """
    if settings.LOG_DIR is None:
        return None
    log_dir = Path(settings.LOG_DIR)
    log_dir.mkdir(parents=True, exist_ok=True)
    stamp = datetime.now().strftime("%Y-%m-%d")
    return log_dir / f"{settings.PROJECT_NAME}-{settings.APP_ENV.value}-{stamp}.jsonl"


class JsonlFileHandler(logging.Handler):
    """Handler appending one JSON object per record to a shared file."""

    def __init__(self, file_path: Path):
        """Initialize the JSONL file handler.

        Args:
            file_path: Path to the log file where entries will be written.
        """
        super().__init__()
        self.file_path = file_path

    def emit(self, record: logging.LogRecord) -> None:
        """Emit a record to the JSONL file."""
        try:
            log_entry = {
                "timestamp": datetime.fromtimestamp(record.created).isoformat(),
                "level": record.levelname,
                "event": record.getMessage(),
                "logger": record.name,
                "process": record.process,
                "environment": settings.APP_ENV.value,
            }
            # one short write per entry keeps lines from concurrent workers whole
            with open(self.file_path, "a", encoding="utf-8") as f:
                f.write(json.dumps(log_entry) + "\n")
        except Exception:
            self.handleError(record)


def add_environment(_, __, event_dict: dict) -> dict:
    event_dict["environment"] = settings.APP_ENV.value
    return event_dict


def add_process_id(_, __, event_dict: dict) -> dict:
    event_dict.setdefault("pid", os.getpid())
    return event_dict


def get_structlog_processors(include_file_info: bool = True) -> List[Any]:
    """Get the structlog processors based on configuration.

    Args:
        include_file_info: Whether to include call-site information in the logs

    Returns:
        List[Any]: List of structlog processors
    """
    processors: List[Any] = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
    ]

    if include_file_info:
        processors.append(
            structlog.processors.CallsiteParameterAdder(
                {
                    structlog.processors.CallsiteParameter.FILENAME,
                    structlog.processors.CallsiteParameter.FUNC_NAME,
                    structlog.processors.CallsiteParameter.LINENO,
                }
            )
        )

    processors.append(add_environment)
    if settings.APP_ENV in (Environment.STAGING, Environment.PRODUCTION):
        processors.append(add_process_id)
    return processors


def setup_logging() -> None:
    """Configure structlog and the standard-library handlers beneath it.

    In development: pretty console output
    Otherwise, or with LOG_FORMAT=json: one JSON object per line
    """
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(settings.LOG_LEVEL)
    handlers: List[logging.Handler] = [console_handler]

    log_file = get_log_file_path()
    if log_file is not None:
        file_handler = JsonlFileHandler(log_file)
        file_handler.setLevel(settings.LOG_LEVEL)
        handlers.append(file_handler)

    logging.basicConfig(format="%(message)s", level=settings.LOG_LEVEL, handlers=handlers)

    if settings.LOG_FORMAT == "console":
        renderer: Any = structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty())
    else:
        renderer = structlog.processors.JSONRenderer()

    structlog.configure(
        processors=[
            *get_structlog_processors(
                include_file_info=settings.APP_ENV in (Environment.DEVELOPMENT, Environment.TEST)
            ),
            renderer,
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


_logger_initialized = False


def get_logger():
    """Get configured logger with lazy initialization."""
    global _logger_initialized
    if not _logger_initialized:
        setup_logging()
        _logger_initialized = True
        if settings.APP_ENV != Environment.DEVELOPMENT or settings.LOG_LEVEL == "DEBUG":
            structlog.get_logger().debug(
                "logging_initialized",
                environment=settings.APP_ENV.value,
                log_level=settings.LOG_LEVEL,
                log_format=settings.LOG_FORMAT,
                log_file=str(get_log_file_path()),
            )
    return structlog.get_logger()


@contextmanager
def run_context(**context: Any) -> Iterator[None]:
    """Bind run identifiers (model, n, out_dir, ...) to every event inside the block."""
    with structlog.contextvars.bound_contextvars(**context):
        yield


logger = get_logger()
