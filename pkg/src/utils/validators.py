#!/usr/bin/env python3
"""Validation utilities for csrr-rec"""
import math
from typing import Iterable, Optional, Tuple

from .constants import DATA_FORMATS, SOLVER_KINDS


def validate_positive(name: str, value: float) -> Tuple[bool, Optional[str]]:
    """Validate a strictly positive finite number"""
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        return False, f"{name} must be a number"

    if not math.isfinite(value) or value <= 0:
        return False, f"{name} must be positive, got {value}"

    return True, None


def validate_non_negative(name: str, value: float) -> Tuple[bool, Optional[str]]:
    """Validate a finite number >= 0"""
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        return False, f"{name} must be a number"

    if not math.isfinite(value) or value < 0:
        return False, f"{name} must be non-negative, got {value}"

    return True, None


def validate_count(name: str, value: int, minimum: int = 1) -> Tuple[bool, Optional[str]]:
    """Validate an integer count"""
    if not isinstance(value, int) or isinstance(value, bool):
        return False, f"{name} must be an integer"

    if value < minimum:
        return False, f"{name} must be at least {minimum}, got {value}"

    return True, None


def validate_fraction(fraction: float) -> Tuple[bool, Optional[str]]:
    """Validate a train fraction in the open interval (0, 1)"""
    if not isinstance(fraction, (int, float)) or not 0.0 < fraction < 1.0:
        return False, f"split fraction must lie in (0, 1), got {fraction}"

    return True, None


def validate_cost_positive(c_p: float) -> Tuple[bool, Optional[str]]:
    """Validate the false-negative cost; c_n = 1 - c_p must stay positive and <= c_p"""
    if not isinstance(c_p, (int, float)) or not 0.5 <= c_p < 1.0:
        return False, f"c_p must lie in [0.5, 1), got {c_p}"

    return True, None


def validate_threshold(q: float) -> Tuple[bool, Optional[str]]:
    """Validate a classification threshold"""
    if not isinstance(q, (int, float)) or not 0.0 <= q <= 1.0:
        return False, f"threshold q must lie in [0, 1], got {q}"

    return True, None


def validate_cutoffs(ns: Iterable[int]) -> Tuple[bool, Optional[str]]:
    """Validate the top-N cutoff set"""
    ns = list(ns)
    if not ns:
        return False, "at least one cutoff N is required"

    for n in ns:
        if not isinstance(n, int) or n < 1:
            return False, f"cutoffs must be positive integers, got {n}"

    return True, None


def validate_solver_kind(kind: str) -> Tuple[bool, Optional[str]]:
    """Validate the solver selector"""
    if kind not in SOLVER_KINDS:
        return False, f"unknown solver '{kind}', expected one of {', '.join(SOLVER_KINDS)}"

    return True, None


def validate_data_format(fmt: str) -> Tuple[bool, Optional[str]]:
    """Validate the ratings file layout"""
    if fmt not in DATA_FORMATS:
        return False, f"unknown data format '{fmt}', expected one of {', '.join(DATA_FORMATS)}"

    return True, None
