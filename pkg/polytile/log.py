"""
Thin helpers around the shared loguru logger.

Library modules only emit records; the command line decides where they go.
Records carry the assembly stage they were emitted in, ``-`` outside one.
"""

import sys
import time
from contextlib import contextmanager

from polytile import logger

LOG_FORMAT = (
    "<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | "
    "<cyan>{extra[stage]}</cyan> | <level>{message}</level>"
)

logger.configure(extra={"stage": "-"})


def addLogFile(fname="polytile.log", level="DEBUG"):
    """
    Adds a new log file sink.

    Parameters
    ----------
    fname : str, optional
        The filename for the log file. Defaults to 'polytile.log'.
    level : str, optional
        Lowest level written to the file. Defaults to 'DEBUG'.

    Returns
    -------
    int
        The sink id, for ``logger.remove``.
    """
    return logger.add(fname, level=level, format=LOG_FORMAT)


def setLogLevel(level="INFO"):
    """
    Replaces every sink with a single stderr sink at the given level.

    Parameters
    ----------
    level : str, optional
        The logging level to set. Defaults to 'INFO'. Possible values include
        'TRACE', 'DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'.
    """
    logger.configure(handlers=[{"sink": sys.stderr, "level": level, "format": LOG_FORMAT}])


def disableLogging(name="polytile"):
    """
    Silences every record emitted from the given module tree.

    Parameters
    ----------
    name : str, optional
        The module name to disable logging for. Defaults to 'polytile'.
    """
    logger.disable(name)


def enableLogging(name="polytile"):
    """
    Re-enables records emitted from the given module tree.

    Parameters
    ----------
    name : str, optional
        The module name to enable logging for. Defaults to 'polytile'.
    """
    logger.enable(name)


@contextmanager
def logStage(stage):
    """
    Tags the records emitted inside the block with ``stage`` and logs its
    wall time at DEBUG level.

    Parameters
    ----------
    stage : str
        Stage name, as used by :class:`polytile.assembler.AssemblyError`.
    """
    start = time.perf_counter()
    with logger.contextualize(stage=stage):
        yield
        logger.debug(f"done in {time.perf_counter() - start:.3f} s")
