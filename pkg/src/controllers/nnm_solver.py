#!/usr/bin/env python3
"""Accelerated proximal gradient solver for X = U + V with a nuclear-norm U and an l1 V.

Each iteration takes one gradient step on the shared loss gradient, applies singular
value thresholding to U and soft-thresholding to V, then extrapolates with the
momentum sequence tau and projects both components onto [0, 1].
"""
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from ..models.config import SolverConfig
from ..models.costs import subgrad_matrix, total_loss
from ..models.errors import DivergenceError, NumericFailureError
from ..models.matrices import DenseMatrix, ObservationMatrix, check_same_shape, clamp_unit, nuclear_norm
from ..utils.logger import logger
from .prox import prox_l1, svt


@dataclass(frozen=True)
class NnmState:
    u: DenseMatrix
    v: DenseMatrix
    u_tilde: DenseMatrix
    v_tilde: DenseMatrix
    tau: float = 1.0
    iter: int = 0
    objective: float = math.inf
    history: List[float] = field(default_factory=list)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'NnmState':
        zero = np.zeros((rows, cols))
        return cls(u=zero, v=zero, u_tilde=zero, v_tilde=zero)


def predict(state: NnmState) -> DenseMatrix:
    """Scores X = U + V"""
    return state.u + state.v


def objective(state_u: DenseMatrix, state_v: DenseMatrix, a: ObservationMatrix,
              cfg: SolverConfig) -> float:
    """Loss plus lambda1 ||U||_* plus lambda2 sum |V_ij|"""
    value = total_loss(state_u + state_v, a, cfg.cost)
    if cfg.lambda1 > 0:
        value += cfg.lambda1 * nuclear_norm(state_u)
    if cfg.lambda2 > 0:
        value += cfg.lambda2 * float(np.sum(np.abs(state_v)))
    return value


def gradient_step(state: NnmState, a: ObservationMatrix,
                  cfg: SolverConfig) -> Tuple[DenseMatrix, DenseMatrix]:
    """(U - eta G, V - eta G) with G the subgradient at X = U + V"""
    x = predict(state)
    check_same_shape(x, a)
    grad = subgrad_matrix(x, a.dense(), cfg.cost)
    return state.u - cfg.eta * grad, state.v - cfg.eta * grad


def apgl_iterate(state: NnmState, a: ObservationMatrix, cfg: SolverConfig) -> NnmState:
    """One prox-gradient step with momentum extrapolation and box projection"""
    u_hat, v_hat = gradient_step(state, a, cfg)

    try:
        u_tilde = svt(u_hat, cfg.eta * cfg.lambda1)
    except NumericFailureError as e:
        e.iteration = state.iter
        raise

    if cfg.disable_outliers:
        v_tilde = np.zeros_like(v_hat)
    else:
        v_tilde = prox_l1(v_hat, cfg.eta * cfg.lambda2)

    tau_next = (1.0 + math.sqrt(1.0 + 4.0 * state.tau ** 2)) / 2.0
    momentum = (state.tau - 1.0) / tau_next
    u_next = clamp_unit(u_tilde + momentum * (u_tilde - state.u_tilde))
    v_next = clamp_unit(v_tilde + momentum * (v_tilde - state.v_tilde))

    value = objective(u_next, v_next, a, cfg)
    return NnmState(u=u_next, v=v_next, u_tilde=u_tilde, v_tilde=v_tilde, tau=tau_next,
                    iter=state.iter + 1, objective=value, history=state.history + [value])


def fit(a: ObservationMatrix, cfg: SolverConfig, state: Optional[NnmState] = None) -> NnmState:
    """Iterate from U = V = 0 until the relative objective change drops below rel_tol"""
    if a.rows < 1 or a.cols < 1:
        raise ValueError("observation matrix must be non-empty")

    if state is None:
        state = NnmState.zeros(a.rows, a.cols)
    initial = objective(state.u, state.v, a, cfg)
    state = replace(state, objective=initial, history=[initial])
    logger.info(f"NNM fit on {a.rows}x{a.cols} ({a.count} positives), eta={cfg.eta:g}, "
                f"lambda1={cfg.lambda1:g}, lambda2={cfg.lambda2:g}, alpha={cfg.cost.alpha:g}, "
                f"{cfg.cost.variant.value}{', V disabled' if cfg.disable_outliers else ''}")

    for _ in range(cfg.max_iters):
        if total_loss(predict(state), a, cfg.cost) == 0.0:
            logger.info(f"Zero loss at iteration {state.iter}; stopping")
            break

        previous = state.objective
        state = apgl_iterate(state, a, cfg)
        if not math.isfinite(state.objective):
            raise DivergenceError("objective became non-finite", state.iter, cfg.eta)

        change = abs(state.objective - previous) / max(1.0, abs(previous))
        logger.debug(f"iter {state.iter}: objective={state.objective:.6f} change={change:.3e} "
                     f"tau={state.tau:.4f}")
        if change < cfg.rel_tol:
            logger.info(f"Converged after {state.iter} iterations (objective {state.objective:.6f})")
            break
    else:
        logger.info(f"Reached max_iters={cfg.max_iters} (objective {state.objective:.6f})")

    return state
