#!/usr/bin/env python3
"""Logging utilities for csrr-rec"""
import logging
import sys
from pathlib import Path
from typing import Optional, Union


class Logger:
    """Centralized logging management"""

    _instance: Optional['Logger'] = None
    _logger: Optional[logging.Logger] = None

    def __new__(cls) -> 'Logger':
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if self._logger is None:
            self._setup_logger()

    def _setup_logger(self, log_dir: Union[str, Path] = 'logs',
                      console_level: int = logging.INFO) -> None:
        """Setup the logger with file and console handlers"""
        self._logger = logging.getLogger('CsrrRec')
        self._logger.setLevel(logging.DEBUG)
        self._logger.propagate = False

        for handler in list(self._logger.handlers):
            self._logger.removeHandler(handler)
            handler.close()

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

        # console only when the log directory is not writable
        try:
            log_path = Path(log_dir)
            log_path.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_path / 'csrr.log')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(formatter)
            self._logger.addHandler(file_handler)
        except OSError:
            pass

        console_handler = logging.StreamHandler(sys.stdout)
        console_handler.setLevel(console_level)
        console_handler.setFormatter(formatter)
        self._logger.addHandler(console_handler)

    def configure(self, log_dir: Union[str, Path] = 'logs', verbose: bool = False) -> None:
        """Re-target handlers, e.g. from CLI flags"""
        self._setup_logger(log_dir, logging.DEBUG if verbose else logging.INFO)

    def debug(self, message: str):
        """Log debug message"""
        self._logger.debug(message)

    def info(self, message: str):
        """Log info message"""
        self._logger.info(message)

    def warning(self, message: str):
        """Log warning message"""
        self._logger.warning(message)

    def error(self, message: str):
        """Log error message"""
        self._logger.error(message)

    def critical(self, message: str):
        """Log critical message"""
        self._logger.critical(message)


# Global logger instance
logger = Logger()
