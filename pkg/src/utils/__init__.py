#!/usr/bin/env python3
"""Utility functions for csrr-rec"""

from .formatters import format_duration, format_mean_std, format_metric
from .logger import logger
from .validators import (validate_count, validate_cost_positive, validate_cutoffs,
                         validate_data_format, validate_fraction, validate_non_negative,
                         validate_positive, validate_solver_kind, validate_threshold)

__all__ = [
    'format_duration', 'format_mean_std', 'format_metric', 'logger',
    'validate_count', 'validate_cost_positive', 'validate_cutoffs', 'validate_data_format',
    'validate_fraction', 'validate_non_negative', 'validate_positive',
    'validate_solver_kind', 'validate_threshold'
]
