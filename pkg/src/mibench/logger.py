#!/usr/bin/env python3
"""
Logging setup for mibench.

Library modules only call logging.getLogger("mibench"); the command line attaches one file
handler writing mibench.log next to the report it produces.
"""

import logging
import os
from datetime import datetime
from typing import Optional

LOG_FILE_NAME = "mibench.log"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logger(log_dir: Optional[str] = None) -> logging.Logger:
    """
    Point the mibench logger at <log_dir>/mibench.log.

    Args:
        log_dir: Directory for the log file, created if missing. Defaults to the working directory.

    Returns:
        The configured "mibench" logger
    """
    log_path = os.path.abspath(os.path.join(log_dir or os.getcwd(), LOG_FILE_NAME))
    os.makedirs(os.path.dirname(log_path), exist_ok=True)

    logger = logging.getLogger("mibench")
    logger.setLevel(logging.INFO)

    for handler in list(logger.handlers):
        if not isinstance(handler, logging.FileHandler):
            continue
        if handler.baseFilename == log_path:
            return logger
        # a previous run in this process logged elsewhere
        handler.close()
        logger.removeHandler(handler)

    file_handler = logging.FileHandler(log_path, encoding="utf-8")
    file_handler.setLevel(logging.INFO)
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(file_handler)

    timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    logger.info(f"-----------mibench run started at {timestamp}-----------")
    return logger
