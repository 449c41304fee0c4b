# Logging utilities
import logging
from typing import Optional, Union

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logger(level: Optional[Union[int, str]] = None, debug: bool = False) -> None:
    """
    Configure root logging for the command-line tools

    Args:
        level: Log level name or number; falls back to INFO
        debug: Force DEBUG regardless of ``level``
    """
    if debug:
        resolved = logging.DEBUG
    elif isinstance(level, str):
        resolved = logging.getLevelName(level.upper())
        if not isinstance(resolved, int):
            resolved = logging.INFO
    else:
        resolved = level if level is not None else logging.INFO

    logging.basicConfig(level=resolved, format=LOG_FORMAT, force=True)
