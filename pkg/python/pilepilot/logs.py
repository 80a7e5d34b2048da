"""Root logging setup for the command line."""

import logging

_FORMAT = "%(asctime)s--%(levelname)s--%(name)s--%(message)s"
_DATEFMT = "%Y-%m-%d %H:%M:%S"


def setup_logging(verbosity: int = 0) -> None:
    """Attach a single stderr handler to the package logger.

    Args:
        verbosity: 0 logs warnings and above, 1 adds info, 2 or more adds debug.
    """
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.WARNING

    logger = logging.getLogger("pilepilot")
    logger.setLevel(level)

    # Repeated calls (tests invoke the cli in-process) shouldn't stack handlers:
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    handler = logging.StreamHandler()
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(_FORMAT, datefmt=_DATEFMT))
    logger.addHandler(handler)
    logger.propagate = False
