#!/usr/bin/env python3
"""Exception hierarchy for csrr-rec"""
from typing import Optional, Tuple


class CsrrError(Exception):
    """Base class for all library errors"""


class ConfigError(CsrrError):
    """Invalid configuration or command-line usage"""


class DimensionMismatchError(CsrrError):
    """Two matrices that must agree in shape do not"""


class InvalidWeightsError(CsrrError):
    """Weighted-sum parameters that cannot produce a bias"""


class InvalidCostError(CsrrError):
    """Cost parameters violating c_p + c_n = 1 or c_n <= c_p"""


class UndefinedMetricError(CsrrError):
    """A metric whose denominator is zero for the given instance"""


class NumericFailureError(CsrrError):
    """A linear-algebra routine failed to converge"""

    def __init__(self, message: str, iteration: Optional[int] = None,
                 shape: Optional[Tuple[int, ...]] = None):
        super().__init__(message)
        self.iteration = iteration
        self.shape = shape


class DivergenceError(CsrrError):
    """The objective or an iterate became non-finite"""

    def __init__(self, message: str, iteration: int, eta: float):
        super().__init__(f"{message} at iteration {iteration} (eta={eta:g}; try a smaller step size)")
        self.iteration = iteration
        self.eta = eta


class ParseError(CsrrError):
    """A ratings file line could not be parsed"""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class EmptyDatasetError(CsrrError):
    """A ratings file contained no ratings"""


class ModelFormatError(CsrrError):
    """A model file is corrupt or inconsistent"""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class DownloadError(CsrrError):
    """A dataset archive could not be fetched or unpacked"""
