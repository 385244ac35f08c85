#!/usr/bin/env python3
"""Dense and binary matrix containers plus the linear algebra the solvers share.

Rows index items (n) and columns index users (m) everywhere in the package.
"""
from dataclasses import dataclass
from typing import Iterable, Optional, Set, Tuple

import numpy as np
import numpy.typing as npt
import scipy.linalg as la
import scipy.sparse as sp

from .errors import DimensionMismatchError, NumericFailureError

DenseMatrix = npt.NDArray[np.float64]

# Reconstruction tolerance relative to max(1, ||m||_F)
SVD_RECONSTRUCTION_TOL = 1e-8


def as_dense(values, rows: Optional[int] = None, cols: Optional[int] = None) -> DenseMatrix:
    """Validate and convert to a 2-D float64 array, optionally reshaping a flat row-major sequence"""
    array = np.asarray(values, dtype=np.float64)
    if rows is not None and cols is not None:
        if array.size != rows * cols:
            raise DimensionMismatchError(
                f"{array.size} values cannot fill a {rows}x{cols} matrix")
        array = array.reshape(rows, cols)
    if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
        raise DimensionMismatchError(f"expected a non-empty 2-D matrix, got shape {array.shape}")
    return array


@dataclass(frozen=True)
class ObservationMatrix:
    """Binary n x m observation A; positives are the index set Omega"""
    matrix: sp.csc_matrix

    @classmethod
    def from_positives(cls, rows: int, cols: int,
                       positives: Iterable[Tuple[int, int]]) -> 'ObservationMatrix':
        """Build from (row, col) pairs; pairs must be unique and in range"""
        pairs = np.asarray(list(positives), dtype=np.int64).reshape(-1, 2)
        if rows < 1 or cols < 1:
            raise DimensionMismatchError(f"observation matrix must be non-empty, got {rows}x{cols}")
        if pairs.size and (pairs.min() < 0 or pairs[:, 0].max() >= rows or pairs[:, 1].max() >= cols):
            raise DimensionMismatchError(f"positive index out of range for {rows}x{cols}")
        if len(np.unique(pairs, axis=0)) != len(pairs):
            raise ValueError("positives contain duplicate pairs")
        data = np.ones(len(pairs), dtype=np.float64)
        matrix = sp.csc_matrix((data, (pairs[:, 0], pairs[:, 1])), shape=(rows, cols))
        return cls(matrix)

    @classmethod
    def from_dense(cls, dense) -> 'ObservationMatrix':
        """Every non-zero entry becomes a positive"""
        array = as_dense(dense)
        return cls(sp.csc_matrix((array != 0).astype(np.float64)))

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    @property
    def count(self) -> int:
        """Number of positives |Omega|"""
        return int(self.matrix.nnz)

    @property
    def positives(self) -> Set[Tuple[int, int]]:
        coo = self.matrix.tocoo()
        return set(zip(coo.row.tolist(), coo.col.tolist()))

    def dense(self) -> DenseMatrix:
        return self.matrix.toarray()

    def column_items(self, col: int) -> np.ndarray:
        """Sorted row indices of the positives in one column (one user's items)"""
        start, end = self.matrix.indptr[col], self.matrix.indptr[col + 1]
        return np.sort(self.matrix.indices[start:end])

    def row_counts(self) -> np.ndarray:
        """Positives per row (item popularity)"""
        return np.asarray(self.matrix.sum(axis=1)).ravel().astype(np.int64)

    def density(self) -> float:
        return self.count / float(self.rows * self.cols)


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD: left (n x r), singular (r, non-increasing), right (m x r)"""
    left: DenseMatrix
    singular: np.ndarray
    right: DenseMatrix

    def reconstruct(self) -> DenseMatrix:
        return (self.left * self.singular) @ self.right.T


def check_same_shape(x: DenseMatrix, a: ObservationMatrix) -> None:
    if x.shape != a.shape:
        raise DimensionMismatchError(f"matrix shape {x.shape} does not match observations {a.shape}")


def svd(m: DenseMatrix) -> SvdResult:
    """Thin SVD, falling back from the divide-and-conquer driver to the QR driver"""
    m = as_dense(m)
    if not np.all(np.isfinite(m)):
        raise NumericFailureError("svd input contains non-finite values", shape=m.shape)
    try:
        left, singular, right_t = la.svd(m, full_matrices=False, lapack_driver='gesdd')
    except la.LinAlgError:
        try:
            left, singular, right_t = la.svd(m, full_matrices=False, lapack_driver='gesvd')
        except la.LinAlgError as e:
            raise NumericFailureError(f"svd did not converge: {e}", shape=m.shape) from e
    return SvdResult(left=left, singular=singular, right=right_t.T)


def clamp_unit(m: DenseMatrix) -> DenseMatrix:
    """Project entry-wise onto [0, 1]"""
    return np.clip(m, 0.0, 1.0)


def nuclear_norm(m: DenseMatrix) -> float:
    """Sum of singular values"""
    m = as_dense(m)
    try:
        singular = la.svdvals(m)
    except la.LinAlgError as e:
        raise NumericFailureError(f"singular values did not converge: {e}", shape=m.shape) from e
    return float(np.sum(singular))
