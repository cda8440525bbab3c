# pylint: disable=missing-module-docstring

import logging
import sys
from typing import Optional, TextIO

from FlowCoord.flow_settings import LOG_FORMAT, LOG_LEVEL_DEFAULT

VERBOSITY_LEVELS = {0: LOG_LEVEL_DEFAULT, 1: "INFO", 2: "DEBUG"}


def configure_logging(verbosity: int = 0, stream: Optional[TextIO] = None) -> int:
    """Attach one stderr handler to the FlowCoord logger; -v is INFO, -vv DEBUG.

    Only the command line calls this. Returns the level that was set.
    """
    level = logging.getLevelName(VERBOSITY_LEVELS[min(max(verbosity, 0), 2)])
    logger = logging.getLogger("FlowCoord")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False
    return level
