#!/usr/bin/env python3
"""Synthetic low-rank plus sparse ground truth and brute-force reference oracles.

A true score matrix M = clamp(L + S) is thresholded at q into the full label matrix Y;
only a uniformly sampled fraction rho of Y's ones is observed as A.
"""
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from .dataset import round_half_up
from .matrices import DenseMatrix, ObservationMatrix, as_dense, check_same_shape, clamp_unit, nuclear_norm


@dataclass(frozen=True)
class SyntheticTruth:
    m_true: DenseMatrix
    y: ObservationMatrix
    a: ObservationMatrix
    q: float
    rho: float
    s: int
    seed: int


@dataclass
class TrendReport:
    """Per-entry thresholded loss of fitted models, averaged over seeds, keyed by (n, m)

    The bound's constants are not estimated; the fields exist so the report names them.
    """
    mean_loss: Dict[Tuple[int, int], float] = field(default_factory=dict)
    mean_truth_loss: Dict[Tuple[int, int], float] = field(default_factory=dict)
    alpha: float = 1.0
    constant_c: Optional[float] = None
    delta: Optional[float] = None
    gamma: Optional[float] = None
    epsilon: Optional[float] = None

    @property
    def decreasing(self) -> bool:
        """Loss per entry against the full labels Y does not grow with the matrix size

        The loss against A is not used: a fitted model can reproduce its own
        observations, which makes that loss zero at every size.
        """
        losses = self.mean_truth_loss
        ordered = [losses[key] for key in sorted(losses, key=lambda k: k[0] * k[1])]
        return all(later <= earlier for earlier, later in zip(ordered, ordered[1:]))


def generate(n: int, m: int, rank: int, outlier_frac: float, q: float, rho: float,
             seed: int) -> SyntheticTruth:
    """Draw M = clamp(L + S), Y = I(M > q) and a sample A of Y's ones

    L is a product of uniform [0, 1] factors rescaled to a maximum entry of 1; S has
    floor(outlier_frac * n * m) entries drawn uniformly from [0.5, 1].
    """
    if not 1 <= rank <= min(n, m):
        raise ValueError(f"rank must lie in [1, {min(n, m)}], got {rank}")
    for name, value in (('outlier_frac', outlier_frac), ('q', q), ('rho', rho)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {value}")

    rng = np.random.default_rng(seed)
    low_rank = rng.uniform(0.0, 1.0, size=(rank, n)).T @ rng.uniform(0.0, 1.0, size=(rank, m))
    peak = low_rank.max()
    if peak > 0:
        low_rank /= peak

    sparse = np.zeros(n * m)
    n_outliers = int(np.floor(outlier_frac * n * m))
    positions = rng.choice(n * m, size=n_outliers, replace=False)
    sparse[positions] = rng.uniform(0.5, 1.0, size=n_outliers)
    m_true = clamp_unit(low_rank + sparse.reshape(n, m))

    y_dense = m_true > q
    y_rows, y_cols = np.nonzero(y_dense)
    s = len(y_rows)
    n_observed = round_half_up(rho * s)
    chosen = np.sort(rng.choice(s, size=n_observed, replace=False))

    y = ObservationMatrix.from_positives(n, m, zip(y_rows.tolist(), y_cols.tolist()))
    a = ObservationMatrix.from_positives(n, m, zip(y_rows[chosen].tolist(), y_cols[chosen].tolist()))
    return SyntheticTruth(m_true=m_true, y=y, a=a, q=q, rho=rho, s=s, seed=seed)


def indicator_loss(x: DenseMatrix, labels: ObservationMatrix, q: float, alpha: float) -> float:
    """alpha * #{positive, X <= q} + #{negative, X > q}"""
    check_same_shape(x, labels)
    positive = labels.dense() != 0
    above = np.asarray(x) > q
    return float(alpha * np.sum(positive & ~above) + np.sum(~positive & above))


def thresholded_loss(x: DenseMatrix, truth: SyntheticTruth, alpha: float) -> float:
    """Cost-weighted 0-1 error of X against the observed matrix A at the truth's threshold"""
    return indicator_loss(x, truth.a, truth.q, alpha)


def surrogate_dominates(x: DenseMatrix, q: float, gamma: float) -> bool:
    """Per-entry bounds gamma X^2 >= I(X > q) and gamma (X - 1)^2 >= I(X <= q)"""
    x = np.asarray(x, dtype=np.float64)
    above = x > q
    return bool(np.all(gamma * x ** 2 >= above) and np.all(gamma * (x - 1.0) ** 2 >= ~above))


def _prox_objective(u: DenseMatrix, u_hat: DenseMatrix, eta: float, lambda1: float) -> float:
    return 0.5 / eta * float(np.sum((u - u_hat) ** 2)) + lambda1 * nuclear_norm(u)


def brute_force_prox_u(u_hat: DenseMatrix, eta: float, lambda1: float,
                       restarts: int = 4, seed: int = 0) -> DenseMatrix:
    """Reference minimizer of (1/2 eta) ||U - U_hat||_F^2 + lambda1 ||U||_*, for tiny matrices

    Works through the factored form ||U||_* = min 1/2 (||P||_F^2 + ||Q||_F^2) over
    U = P^T Q, which is smooth, and keeps the best of several L-BFGS restarts.
    """
    u_hat = as_dense(u_hat)
    if lambda1 == 0:
        return u_hat.copy()
    n, m = u_hat.shape
    k = min(n, m)
    rng = np.random.default_rng(seed)

    def value_and_grad(flat: np.ndarray):
        p = flat[:k * n].reshape(k, n)
        q = flat[k * n:].reshape(k, m)
        residual = p.T @ q - u_hat
        value = 0.5 / eta * np.sum(residual ** 2) + 0.5 * lambda1 * (np.sum(p ** 2) + np.sum(q ** 2))
        grad_p = q @ residual.T / eta + lambda1 * p
        grad_q = p @ residual / eta + lambda1 * q
        return value, np.concatenate([grad_p.ravel(), grad_q.ravel()])

    best, best_value = np.zeros_like(u_hat), _prox_objective(np.zeros_like(u_hat), u_hat, eta, lambda1)
    scale = max(1.0, float(np.abs(u_hat).max()))
    for _ in range(restarts):
        start = rng.normal(0.0, np.sqrt(scale), size=k * (n + m))
        result = minimize(value_and_grad, start, jac=True, method='L-BFGS-B',
                          options={'maxiter': 20000, 'ftol': 1e-16, 'gtol': 1e-12, 'maxcor': 30})
        p = result.x[:k * n].reshape(k, n)
        q = result.x[k * n:].reshape(k, m)
        candidate = p.T @ q
        value = _prox_objective(candidate, u_hat, eta, lambda1)
        if value < best_value:
            best, best_value = candidate, value
    return best
