"""Logging utilities.

One cached, consistently formatted logger per module, all under the ``spinform``
namespace so the CLI can raise or lower verbosity in one place.
"""

import logging
from typing import Dict

_LOGGERS: Dict[str, logging.Logger] = {}
_LEVEL: int = logging.WARNING


def get_logger(name: str) -> logging.Logger:
    """Get a configured logger for the given module.

    Parameters
    ----------
    name : str
        Module name (typically __name__).

    Returns
    -------
    logging.Logger
        Logger named ``spinform.<name>`` with a single stream handler.

    Notes
    -----
    Always use this function instead of direct logging.getLogger() so that
    ``set_log_level`` reaches every module.

    Examples
    --------
    >>> logger = get_logger(__name__)
    >>> logger.info("Solving Killing equation on 33x33 grid")
    """
    if name not in _LOGGERS:
        qualified = name if name.startswith("spinform") else f"spinform.{name}"
        logger = logging.getLogger(qualified)
        if not logger.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter("%(levelname)s:%(name)s:%(message)s"))
            logger.addHandler(handler)
            logger.propagate = False
        logger.setLevel(_LEVEL)
        _LOGGERS[name] = logger
    return _LOGGERS[name]


def set_log_level(level: str) -> None:
    """Set the logging level for all spinform loggers.

    Parameters
    ----------
    level : str
        Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL).
    """
    global _LEVEL
    _LEVEL = getattr(logging, level.upper(), logging.INFO)
    for logger in _LOGGERS.values():
        logger.setLevel(_LEVEL)
