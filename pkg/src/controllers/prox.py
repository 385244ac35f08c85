#!/usr/bin/env python3
"""Closed-form proximal operators for the nuclear norm and the l1 norm"""
import numpy as np

from ..models.matrices import DenseMatrix, as_dense, svd


def soft_threshold(a, b: float):
    """sign(a) * max(|a| - b, 0); works on scalars and arrays"""
    if b < 0:
        raise ValueError(f"threshold must be non-negative, got {b}")
    shrunk = np.sign(a) * np.maximum(np.abs(a) - b, 0.0)
    return float(shrunk) if np.ndim(shrunk) == 0 else shrunk


def prox_l1(m: DenseMatrix, threshold: float) -> DenseMatrix:
    """Entry-wise soft-thresholding, the prox of threshold * ||.||_1"""
    return soft_threshold(as_dense(m), threshold)


def svt(m: DenseMatrix, threshold: float) -> DenseMatrix:
    """Singular value thresholding, the prox of threshold * ||.||_*

    Every singular value of the thin SVD is shrunk by ``threshold`` and clipped at
    zero, so the rank of the result never exceeds the rank of ``m``.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be non-negative, got {threshold}")
    decomposition = svd(m)
    shrunk = np.maximum(decomposition.singular - threshold, 0.0)
    keep = shrunk > 0
    if not np.any(keep):
        return np.zeros_like(as_dense(m))
    return (decomposition.left[:, keep] * shrunk[keep]) @ decomposition.right[:, keep].T
