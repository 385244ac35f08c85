#!/usr/bin/env python3
import math


def format_metric(value: float) -> str:
    """Four decimals, the precision the published tables use"""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "-"
    return f"{value:.4f}"


def format_mean_std(mean: float, std: float) -> str:
    """Mean with its seed standard deviation"""
    return f"{mean:.4f} ± {std:.4f}"


def format_duration(seconds: float) -> str:
    """Convert a duration in seconds to a short readable form"""
    if seconds < 60:
        return f"{seconds:.1f}s"
    minutes, seconds = divmod(int(round(seconds)), 60)
    if minutes < 60:
        return f"{minutes}m {seconds:02d}s"
    hours, minutes = divmod(minutes, 60)
    return f"{hours}h {minutes:02d}m"
