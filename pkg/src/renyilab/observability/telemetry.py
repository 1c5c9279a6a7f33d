"""OpenTelemetry spans around campaigns, suite runs and optimizer calls.

Tracing is opt-in from the CLI (``--trace``); ``RENYILAB_DISABLE_TRACING=1``
turns every span into a no-op, which is what the test-suite relies on.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from contextlib import contextmanager
from enum import Enum
import logging
import math
import os
from typing import Any

logger = logging.getLogger(__name__)

DISABLE_ENV = "RENYILAB_DISABLE_TRACING"
SCOPE = "renyilab"

AttributeValue = str | bool | int | float


class _NoOpSpan:
    def set_attribute(self, key: str, value: Any) -> None:
        return None


def tracing_disabled() -> bool:
    return os.getenv(DISABLE_ENV) == "1"


def setup_tracing(service_name: str, exporter: Any | None = None) -> bool:
    """Install a TracerProvider with a batch console exporter. Returns whether tracing is on."""
    if tracing_disabled():
        logger.info("tracing.disabled", extra={"extra": {"service": service_name}})
        return False
    from opentelemetry import trace
    from opentelemetry.sdk.resources import Resource
    from opentelemetry.sdk.trace import TracerProvider
    from opentelemetry.sdk.trace.export import BatchSpanProcessor, ConsoleSpanExporter

    provider = TracerProvider(resource=Resource.create({"service.name": service_name}))
    provider.add_span_processor(BatchSpanProcessor(exporter or ConsoleSpanExporter()))
    trace.set_tracer_provider(provider)
    logger.info("tracing.configured", extra={"extra": {"service": service_name}})
    return True


def span_attribute(value: Any) -> AttributeValue:
    """Coerce ``value`` to a type OpenTelemetry accepts; non-finite floats become strings."""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool | int | str):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else repr(value)
    return str(value)


def set_attributes(span: Any, attributes: Mapping[str, Any]) -> None:
    for key, value in attributes.items():
        span.set_attribute(key, span_attribute(value))


@contextmanager
def traced(name: str, **attributes: Any) -> Iterator[Any]:
    """Open span ``name`` carrying ``attributes``; yields a no-op span when tracing is disabled."""
    if tracing_disabled():
        yield _NoOpSpan()
        return
    from opentelemetry import trace

    with trace.get_tracer(SCOPE).start_as_current_span(name) as span:
        set_attributes(span, attributes)
        yield span
