"""Small shared helpers."""

from __future__ import annotations

import os

from .errors import ConfigError

THREADS_ENV = "SYSTEMIC_THREADS"


def max_workers() -> int:
    """Worker cap from the SYSTEMIC_THREADS environment variable (0 = auto)."""
    raw = os.environ.get(THREADS_ENV, "0")
    try:
        requested = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if requested < 0:
        raise ConfigError(f"{THREADS_ENV} must be >= 0, got {requested}")
    if requested == 0:
        return min(4, os.cpu_count() or 1)
    return requested
