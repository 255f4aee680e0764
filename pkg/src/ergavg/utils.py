"""Utility functions for ergavg."""

import json
import logging
import sys
from pathlib import Path
from typing import Any, List, Union

import structlog

from ergavg.core.errors import DomainError
from ergavg.core.gridfn import GridFunction


def setup_logging(level: str = "info", debug: bool = False) -> None:
    """Set up structured logging on stderr.

    JSON lines by default; a console renderer when ``debug`` is set. Stdout
    stays free for command output.
    """
    log_level = getattr(logging, level.upper(), None)
    if not isinstance(log_level, int):
        raise DomainError(f"unknown log level {level!r}")

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            (
                structlog.dev.ConsoleRenderer()
                if debug
                else structlog.processors.JSONRenderer()
            ),
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        context_class=dict,
        cache_logger_on_first_use=True,
    )

    logging.basicConfig(
        format="%(message)s",
        level=log_level,
        stream=sys.stderr,
        force=True,
    )


def parse_numbers(text: str) -> List[float]:
    """Numbers from a comma-separated string or a JSON array."""
    text = text.strip()
    if text.startswith("["):
        values: Any = json.loads(text)
    else:
        values = [item for item in text.split(",") if item.strip()]
    try:
        return [float(v) for v in values]
    except (TypeError, ValueError) as exc:
        raise DomainError(f"not a list of numbers: {text!r}") from exc


def parse_complex_numbers(text: str) -> List[complex]:
    """Like :func:`parse_numbers`, but entries may be ``a+bj`` or ``[re, im]``."""
    text = text.strip()
    if text.startswith("["):
        values: Any = json.loads(text)
    else:
        values = [item.strip() for item in text.split(",") if item.strip()]
    out = []
    for v in values:
        try:
            out.append(complex(v[0], v[1]) if isinstance(v, list) else complex(v))
        except (TypeError, ValueError, IndexError) as exc:
            raise DomainError(f"not a number: {v!r}") from exc
    return out


def read_grid_function(path: Union[str, Path]) -> GridFunction:
    """GridFunction from a JSON file ``{offset, re, im}``."""
    try:
        return GridFunction.from_json(Path(path).read_text())
    except (OSError, KeyError, ValueError) as exc:
        raise DomainError(f"cannot read grid function from {path}: {exc}") from exc
