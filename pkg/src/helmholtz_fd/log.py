# -*- coding: utf-8 -*-
"""Loggers for ``helmholtz_fd``, attached below the AiiDA logger."""
import logging
import os

from aiida.common.log import AIIDA_LOGGER

LOGGER = AIIDA_LOGGER.getChild('helmholtz_fd')
ENV_LOG_LEVEL = 'HELMHOLTZ_FD_LOG'


def get_logger(name: str) -> logging.Logger:
    """Return the logger of a ``helmholtz_fd`` module.

    :param name: dotted module name, usually ``__name__``.
    """
    prefix = 'helmholtz_fd.'
    if name.startswith(prefix):
        name = name[len(prefix):]
    return LOGGER.getChild(name)


def configure_logging(level: str | int | None = None) -> None:
    """Attach a stream handler and set the level of the package logger.

    The level is taken from ``level`` if given, then from the
    ``HELMHOLTZ_FD_LOG`` environment variable, and defaults to ``WARNING``.
    """
    if level is None:
        level = os.environ.get(ENV_LOG_LEVEL, 'WARNING')
    if isinstance(level, str):
        level = level.upper()

    LOGGER.setLevel(level)
    if not any(getattr(handler, 'name', None) == 'helmholtz_fd' for handler in LOGGER.handlers):
        handler = logging.StreamHandler()
        handler.set_name('helmholtz_fd')
        handler.setFormatter(logging.Formatter('%(asctime)s %(levelname)s %(name)s: %(message)s'))
        LOGGER.addHandler(handler)
