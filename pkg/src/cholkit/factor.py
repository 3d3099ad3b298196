"""Direct factorizations of an explicitly known correlation matrix.

``cholesky_gaxpy`` is the square-root (``R = L L^H``) column algorithm;
``ldl_decompose`` is the square-root-free ``R = L D L^H`` variant that also
accepts indefinite input. ``block_ldl_decompose`` generalizes the latter to
``M x M`` pivots and serves as the reference for the structured recursions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .errors import DimensionError, NotPositiveDefiniteError, PreconditionError, ZeroPivotError
from .linalg import CMatrix, LdlFactors, as_cmatrix, hermitize

PIVOT_TOL = 1e-13
HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class CholFactor:
    """Lower triangular ``L`` with positive real diagonal, ``R = L L^H``."""

    L: CMatrix


def _prepare(R: ArrayLike) -> np.ndarray:
    R = as_cmatrix(R)
    if R.shape[0] != R.shape[1]:
        raise DimensionError(f"matrix must be square, got shape {R.shape}")
    # relative to the largest entry so the check is independent of SNR scaling
    scale = np.max(np.abs(R)) if R.size else 0.0
    if R.size and np.max(np.abs(R - R.conj().T)) > HERMITIAN_TOL * max(scale, 1e-300):
        raise PreconditionError("matrix is not Hermitian")
    return R


def _pivot_floor(R: np.ndarray) -> float:
    return PIVOT_TOL * float(np.max(np.abs(np.diag(R)))) if R.size else 0.0


def cholesky_gaxpy(R: ArrayLike) -> CholFactor:
    """Column-oriented Cholesky factorization ``R = L L^H``.

    Column 1 is scaled by ``sqrt(R[0, 0])``; every later column ``k`` first
    receives the outer-product correction from columns ``1..k-1`` and is then
    scaled by the square root of its (updated) diagonal entry.

    Raises
    ------
    PreconditionError
        If ``R`` is not Hermitian.
    NotPositiveDefiniteError
        If a pivot drops to ``1e-13 * max(diag(R))`` or below; ``index`` is
        the 1-based column.

    Examples
    --------
    >>> cholesky_gaxpy([[4, 2], [2, 3]]).L.real.round(6)
    array([[2.      , 0.      ],
           [1.      , 1.414214]])
    """
    A = _prepare(R)
    n = A.shape[0]
    floor = _pivot_floor(A)
    for k in range(n):
        if k > 0:
            A[k:, k] -= A[k:, :k] @ A[k, :k].conj()
        pivot = A[k, k].real
        if not pivot > floor:
            raise NotPositiveDefiniteError(k + 1)
        A[k:, k] /= np.sqrt(pivot)
        A[k, k] = A[k, k].real
    return CholFactor(np.tril(A))


def ldl_decompose(R: ArrayLike) -> LdlFactors:
    """Square-root-free factorization ``R = L D L^H`` with scalar pivots.

    ``D`` is real but may carry negative entries; only the leading principal
    minors must be nonzero. For each column ``k`` a scratch vector
    ``v[i] = D[i] * conj(L[k, i])`` (``i < k``) gives the pivot
    ``D[k] = R[k, k] - L[k, :k] @ v`` and the multipliers
    ``L[k+1:, k] = (R[k+1:, k] - L[k+1:, :k] @ v) / D[k]``.

    Raises :class:`ZeroPivotError` (1-based ``index``) when
    ``|D[k]| <= 1e-13 * max|diag(R)|``.
    """
    A = _prepare(R)
    n = A.shape[0]
    floor = _pivot_floor(A)
    v = np.zeros(n, dtype=np.complex128)
    for k in range(n):
        v[:k] = A.diagonal()[:k] * A[k, :k].conj()
        pivot = (A[k, k] - A[k, :k] @ v[:k]).real
        if abs(pivot) <= floor:
            raise ZeroPivotError(k + 1)
        A[k, k] = pivot
        A[k + 1 :, k] = (A[k + 1 :, k] - A[k + 1 :, :k] @ v[:k]) / pivot
    d = A.diagonal().real.copy()
    L = np.tril(A, -1) + np.eye(n)
    return LdlFactors(L, tuple(d.reshape(-1, 1, 1)), 1)


def block_ldl_decompose(R: ArrayLike, M: int) -> LdlFactors:
    """Block ``L D L^H`` with ``M x M`` pivots and identity diagonal blocks in ``L``.

    Same column sweep as :func:`ldl_decompose` with every scalar replaced by
    an ``M x M`` block; ``M == 1`` reproduces it.
    """
    A = _prepare(R)
    n = A.shape[0]
    if M < 1 or n % M:
        raise DimensionError(f"dimension {n} is not a multiple of block size {M}")
    N = n // M
    floor = _pivot_floor(A)
    L = np.zeros_like(A)
    D = []
    for k in range(N):
        rows = slice(k * M, (k + 1) * M)
        below = slice((k + 1) * M, n)
        left = slice(0, k * M)
        # V stacks D_j @ L_kj^H for j < k
        V = np.concatenate(
            [D[j] @ L[rows, j * M : (j + 1) * M].conj().T for j in range(k)]
        ) if k else np.zeros((0, M), dtype=np.complex128)
        pivot = hermitize(A[rows, rows] - L[rows, left] @ V)
        s = np.linalg.svd(pivot, compute_uv=False)
        if s[-1] <= floor:
            raise ZeroPivotError(k + 1)
        D.append(pivot)
        L[rows, rows] = np.eye(M)
        if k + 1 < N:
            rhs = A[below, rows] - L[below, left] @ V
            L[below, rows] = rhs / pivot[0, 0] if M == 1 else np.linalg.solve(pivot.T, rhs.T).T
    return LdlFactors(L, tuple(D), M)
