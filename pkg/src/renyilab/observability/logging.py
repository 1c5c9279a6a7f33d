"""JSON-lines logging for the CLI and library events."""

from __future__ import annotations

from datetime import datetime, timezone

UTC = timezone.utc
import json
import logging
import math
import sys
from typing import Any

import numpy as np


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_jsonable(v) for v in value]
    return value


class JsonFormatter(logging.Formatter):
    """One strict-JSON object per record; event fields come from ``extra={"extra": {...}}``.

    Infinite margins and NaNs are written as strings so every line parses.
    """

    def format(self, record: logging.LogRecord) -> str:  # noqa: A003
        payload: dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created, UTC).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        fields = getattr(record, "extra", None)
        if isinstance(fields, dict):
            payload.update(_jsonable(fields))
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, default=str, allow_nan=False)


def configure_logging(level: int | str = logging.INFO) -> None:
    """Send JSON lines to stderr, keeping stdout for command results."""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JsonFormatter())
    resolved = level.upper() if isinstance(level, str) else level
    logging.basicConfig(level=resolved, handlers=[handler], force=True)
