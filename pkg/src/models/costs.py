#!/usr/bin/env python3
"""Cost-sensitive squared losses, their mistake-driven subgradients and the cost bias alpha.

Type-I scales the positive-class loss by alpha ("aggressive" updates); Type-II moves
the positive target to alpha ("frequent" updates). Negatives use 1/2 x^2 in both.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidCostError, InvalidWeightsError
from .matrices import DenseMatrix, ObservationMatrix, check_same_shape

_SUM_TOL = 1e-12


class LossVariant(Enum):
    TYPE_I = 'type-i'
    TYPE_II = 'type-ii'


@dataclass(frozen=True)
class SumWeights:
    """Weights of recall and specificity in the weighted-sum metric"""
    mu_p: float
    mu_n: float
    t_p: int
    t_n: int

    def __post_init__(self):
        if not (0.0 <= self.mu_p <= 1.0 and 0.0 <= self.mu_n <= 1.0):
            raise InvalidWeightsError(f"mu_p={self.mu_p}, mu_n={self.mu_n} must lie in [0, 1]")
        if abs(self.mu_p + self.mu_n - 1.0) > _SUM_TOL:
            raise InvalidWeightsError(f"mu_p + mu_n must equal 1, got {self.mu_p + self.mu_n}")


@dataclass(frozen=True)
class CostModel:
    """Misclassification costs (c_p for false negatives, c_n for false positives)"""
    c_p: float
    c_n: float
    variant: LossVariant = LossVariant.TYPE_I

    def __post_init__(self):
        if not (0.0 < self.c_p <= 1.0 and 0.0 < self.c_n <= 1.0):
            raise InvalidCostError(f"c_p={self.c_p}, c_n={self.c_n} must lie in (0, 1]")
        if abs(self.c_p + self.c_n - 1.0) > _SUM_TOL:
            raise InvalidCostError(f"c_p + c_n must equal 1, got {self.c_p + self.c_n}")
        if self.c_n > self.c_p:
            raise InvalidCostError(f"c_n={self.c_n} exceeds c_p={self.c_p}; alpha would fall below 1")

    @classmethod
    def from_cp(cls, c_p: float, variant: LossVariant = LossVariant.TYPE_I) -> 'CostModel':
        return cls(c_p=c_p, c_n=1.0 - c_p, variant=variant)

    @classmethod
    def from_alpha(cls, alpha: float, variant: LossVariant = LossVariant.TYPE_I) -> 'CostModel':
        if alpha < 1.0:
            raise InvalidCostError(f"alpha={alpha} must be at least 1")
        c_n = 1.0 / (1.0 + alpha)
        return cls(c_p=1.0 - c_n, c_n=c_n, variant=variant)

    @classmethod
    def from_sum_weights(cls, weights: SumWeights,
                         variant: LossVariant = LossVariant.TYPE_I) -> 'CostModel':
        return cls.from_alpha(alpha_from_sum(weights), variant)

    @property
    def alpha(self) -> float:
        """c_p / c_n; c_n * alpha gives back c_p only to within rounding in floats"""
        return self.c_p / self.c_n


def alpha_from_sum(w: SumWeights) -> float:
    """alpha = mu_p T_n / (mu_n T_p), the bias that maximizes the weighted sum"""
    denominator = w.mu_n * w.t_p
    if denominator <= 0:
        raise InvalidWeightsError(f"mu_n * T_p must be positive, got mu_n={w.mu_n}, T_p={w.t_p}")
    return (w.mu_p * w.t_n) / denominator


def loss_matrix(x: np.ndarray, a: np.ndarray, cm: CostModel) -> np.ndarray:
    """Entry-wise loss for arrays of scores x and binary labels a"""
    x = np.asarray(x, dtype=np.float64)
    positive = np.asarray(a) != 0
    alpha = cm.alpha
    if cm.variant is LossVariant.TYPE_I:
        positive_loss = alpha * 0.5 * (x - 1.0) ** 2
    else:
        positive_loss = 0.5 * (x - alpha) ** 2
    return np.where(positive, positive_loss, 0.5 * x ** 2)


def subgrad_matrix(x: np.ndarray, a: np.ndarray, cm: CostModel) -> np.ndarray:
    """Entry-wise subgradient; entries with zero loss contribute nothing"""
    x = np.asarray(x, dtype=np.float64)
    positive = np.asarray(a) != 0
    alpha = cm.alpha
    if cm.variant is LossVariant.TYPE_I:
        positive_grad = alpha * (x - 1.0)
    else:
        positive_grad = x - alpha
    grad = np.where(positive, positive_grad, x)
    return np.where(loss_matrix(x, a, cm) > 0.0, grad, 0.0)


def loss_entry(x: float, a: int, cm: CostModel) -> float:
    return float(loss_matrix(x, a, cm))


def subgrad_entry(x: float, a: int, cm: CostModel) -> float:
    return float(subgrad_matrix(x, a, cm))


def total_loss(x: DenseMatrix, a: ObservationMatrix, cm: CostModel) -> float:
    """Dense sum over all n*m entries; unobserved entries count as label 0"""
    check_same_shape(x, a)
    # np.sum reduces pairwise, keeping the result order-stable to ~1e-16 relative
    return float(np.sum(loss_matrix(x, a.dense(), cm)))
