#!/usr/bin/env python3
"""Bilinear-factorization solver: X = P^T Q + V with Frobenius-regularized factors.

Replacing the nuclear norm by 1/2 (||P||_F^2 + ||Q||_F^2) removes the SVD from every
iteration and caps the rank of the common component at the latent dimension d.
Factor entries live in [0, 1/sqrt(d)], so (P^T Q)_ij always lies in [0, 1].
"""
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from ..models.config import BfConfig
from ..models.costs import subgrad_matrix, total_loss
from ..models.errors import DivergenceError
from ..models.matrices import DenseMatrix, ObservationMatrix, check_same_shape, clamp_unit
from ..utils.logger import logger
from .prox import prox_l1


@dataclass(frozen=True)
class BfState:
    p: DenseMatrix          # d x n
    q: DenseMatrix          # d x m
    v: DenseMatrix          # n x m
    iter: int = 0
    objective: float = math.inf
    history: List[float] = field(default_factory=list)

    @classmethod
    def initial(cls, rows: int, cols: int, latent_dim: int, seed: int) -> 'BfState':
        """Uniform factors on [0, 1/sqrt(d)] and V = 0"""
        rng = np.random.default_rng(seed)
        bound = 1.0 / math.sqrt(latent_dim)
        return cls(p=rng.uniform(0.0, bound, size=(latent_dim, rows)),
                   q=rng.uniform(0.0, bound, size=(latent_dim, cols)),
                   v=np.zeros((rows, cols)))

    @property
    def latent_dim(self) -> int:
        return self.p.shape[0]


def predict_bf(state: BfState) -> DenseMatrix:
    """Scores X = P^T Q + V"""
    return state.p.T @ state.q + state.v


def objective_bf(state: BfState, a: ObservationMatrix, cfg: BfConfig) -> float:
    base = cfg.base
    value = total_loss(predict_bf(state), a, base.cost)
    value += 0.5 * base.lambda1 * (float(np.sum(state.p ** 2)) + float(np.sum(state.q ** 2)))
    value += base.lambda2 * float(np.sum(np.abs(state.v)))
    return value


def loss_gradient(state: BfState, a: ObservationMatrix, cfg: BfConfig) -> DenseMatrix:
    x = predict_bf(state)
    check_same_shape(x, a)
    return subgrad_matrix(x, a.dense(), cfg.base.cost)


def pq_gradients(state: BfState, a: ObservationMatrix, cfg: BfConfig,
                 grad: Optional[DenseMatrix] = None) -> Tuple[DenseMatrix, DenseMatrix]:
    """Gradient steps P - eta Q G^T and Q - eta P G through the chain rule of X = P^T Q"""
    if grad is None:
        grad = loss_gradient(state, a, cfg)
    eta = cfg.base.eta
    return state.p - eta * (state.q @ grad.T), state.q - eta * (state.p @ grad)


def project_factor(m_hat: DenseMatrix, eta: float, lambda1: float, latent_dim: int) -> DenseMatrix:
    """Closed-form minimizer of the proximal plus L2 term, projected onto [0, 1/sqrt(d)]"""
    return np.clip(m_hat / (1.0 + eta * lambda1), 0.0, 1.0 / math.sqrt(latent_dim))


def inner_solve(state: BfState, a: ObservationMatrix, cfg: BfConfig,
                grad: Optional[DenseMatrix] = None) -> BfState:
    """Alternate the closed-form P and Q updates with the loss gradient held at X^t

    Both proximal centres are anchored at the outer iterate (P^t, Q^t); each half-step
    uses the latest value of the other factor in the chain-rule term.
    """
    if grad is None:
        grad = loss_gradient(state, a, cfg)
    eta, lambda1, d = cfg.base.eta, cfg.base.lambda1, state.latent_dim
    p_anchor, q_anchor = state.p, state.q
    p, q = state.p, state.q

    for inner in range(cfg.inner_max_iters):
        p_new = project_factor(p_anchor - eta * (q @ grad.T), eta, lambda1, d)
        q_new = project_factor(q_anchor - eta * (p_new @ grad), eta, lambda1, d)
        if not (np.all(np.isfinite(p_new)) and np.all(np.isfinite(q_new))):
            raise DivergenceError("factor update became non-finite", state.iter, eta)

        change = np.linalg.norm(p_new - p) + np.linalg.norm(q_new - q)
        scale = max(1.0, np.linalg.norm(p) + np.linalg.norm(q))
        p, q = p_new, q_new
        if change / scale < cfg.inner_rel_tol:
            break

    logger.debug(f"inner solve finished after {inner + 1} alternations")
    return replace(state, p=p, q=q)


def fit_bf(a: ObservationMatrix, cfg: BfConfig, state: Optional[BfState] = None) -> BfState:
    """Outer loop: factor update, then V soft-threshold and projection, until rel_tol"""
    if a.rows < 1 or a.cols < 1:
        raise ValueError("observation matrix must be non-empty")
    cfg.check_dims(a.rows, a.cols)
    base = cfg.base

    if state is None:
        state = BfState.initial(a.rows, a.cols, cfg.latent_dim, base.seed)
    initial = objective_bf(state, a, cfg)
    state = replace(state, objective=initial, history=[initial])
    logger.info(f"BF fit on {a.rows}x{a.cols} ({a.count} positives), d={cfg.latent_dim}, "
                f"eta={base.eta:g}, lambda1={base.lambda1:g}, lambda2={base.lambda2:g}, "
                f"alpha={base.cost.alpha:g}")

    for _ in range(base.max_iters):
        grad = loss_gradient(state, a, cfg)
        previous = state.objective

        updated = inner_solve(state, a, cfg, grad)
        if base.disable_outliers:
            v_next = np.zeros_like(state.v)
        else:
            v_next = clamp_unit(prox_l1(state.v - base.eta * grad, base.eta * base.lambda2))
        updated = replace(updated, v=v_next, iter=state.iter + 1)

        value = objective_bf(updated, a, cfg)
        if not math.isfinite(value):
            raise DivergenceError("objective became non-finite", updated.iter, base.eta)
        state = replace(updated, objective=value, history=state.history + [value])

        change = abs(value - previous) / max(1.0, abs(previous))
        logger.debug(f"iter {state.iter}: objective={value:.6f} change={change:.3e}")
        if change < base.rel_tol:
            logger.info(f"Converged after {state.iter} iterations (objective {value:.6f})")
            break
    else:
        logger.info(f"Reached max_iters={base.max_iters} (objective {state.objective:.6f})")

    return state
