"""
Logging set-up: a single stdout handler, level taken from settings unless
overridden on the command line.
"""
from __future__ import annotations

import logging
import sys
from typing import Optional

from brackets.core.config import settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    root = logging.getLogger("brackets")
    root.handlers.clear()
    handler = logging.StreamHandler(sys.stdout)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel((level or settings.LOG_LEVEL).upper())
    root.propagate = False
