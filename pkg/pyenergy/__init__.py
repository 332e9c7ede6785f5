import logging
from logging import NullHandler
from ._version import __version__  # noqa: F401

logger = logging.getLogger()
logger.addHandler(NullHandler())
