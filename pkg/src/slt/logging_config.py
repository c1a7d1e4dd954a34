"""Logger setup for slt.

Every module calls ``get_logger(__name__)``. The level comes from the
``SLT_LOG_LEVEL`` environment variable (default WARNING) unless the CLI
overrides it with ``set_level``. Output goes to stderr.
"""

import logging
import os
import sys
from typing import Optional, Union

_ROOT = "slt"
_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"
_configured = False


def _configure_root() -> logging.Logger:
    global _configured
    root = logging.getLogger(_ROOT)
    if not _configured:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(_FORMAT))
        root.addHandler(handler)
        root.setLevel(os.environ.get("SLT_LOG_LEVEL", "WARNING").upper())
        root.propagate = False
        _configured = True
    return root


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Get a logger below the ``slt`` root logger.

    Args:
        name: Module name, usually ``__name__``

    Returns:
        Configured logger
    """
    _configure_root()
    if not name or name == _ROOT:
        return logging.getLogger(_ROOT)
    if not name.startswith(_ROOT + "."):
        name = f"{_ROOT}.{name}"
    return logging.getLogger(name)


def set_level(level: Union[int, str]) -> None:
    """Set the level of every slt logger."""
    root = _configure_root()
    root.setLevel(level.upper() if isinstance(level, str) else level)
