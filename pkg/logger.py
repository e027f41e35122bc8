import logging
import sys
from contextlib import contextmanager
from logging.handlers import RotatingFileHandler
from typing import Iterator

from config import LOG_LEVEL, LOG_FILE

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def _formatter() -> logging.Formatter:
    return logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)


def setup_logger(name: str = "snn", level: int = LOG_LEVEL) -> logging.Logger:
    """Console handler always; rotating file handler unless SNN_LOG_FILE is empty"""
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger
    logger.setLevel(level)

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setFormatter(_formatter())
    logger.addHandler(console_handler)

    if LOG_FILE:
        try:
            file_handler = RotatingFileHandler(LOG_FILE, maxBytes=5 * 1024 * 1024, backupCount=5, encoding='utf-8')
            file_handler.setFormatter(_formatter())
            logger.addHandler(file_handler)
        except OSError as e:
            print(f"Failed to set up file logging: {e}")

    return logger


@contextmanager
def run_log(path: str, name: str = "snn") -> Iterator[logging.Handler]:
    """Copy the records of one experiment into `path` (normally <out_dir>/run.log)."""
    handler = logging.FileHandler(path, encoding='utf-8')
    handler.setFormatter(_formatter())
    target = logging.getLogger(name)
    target.addHandler(handler)
    try:
        yield handler
    finally:
        target.removeHandler(handler)
        handler.close()


logger = setup_logger()
