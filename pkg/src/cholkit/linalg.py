"""Dense complex matrix helpers, triangular solves and LDL^H plumbing.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; :func:`as_cmatrix`
is the validating constructor for user data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DimensionError, SingularFactorError

CMatrix = NDArray[np.complex128]

#: default relative threshold on a D block's smallest singular value
COND_TOL = 1e-12


def as_cmatrix(data: ArrayLike) -> CMatrix:
    """Copy ``data`` into a 2-D complex128 array, rejecting NaN/Inf."""
    a = np.array(data, dtype=np.complex128)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def _require_square(a: np.ndarray, name: str = "matrix") -> int:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    return a.shape[0]


def hermitian_check(a: ArrayLike, tol: float = 0.0) -> bool:
    """True iff ``max |a_ij - conj(a_ji)| <= tol``."""
    a = np.asarray(a)
    _require_square(a)
    if a.size == 0:
        return True
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def solve_lower_unit(L: ArrayLike, B: ArrayLike) -> CMatrix:
    """Forward substitution for ``L X = B`` with ``L`` unit lower triangular.

    Only the strictly lower part of ``L`` is read; the diagonal is taken as 1.
    Rows of ``X`` are produced in order, each from the rows above it.
    """
    L = np.asarray(L)
    B = np.asarray(B)
    n = _require_square(L, "L")
    vector = B.ndim == 1
    X = np.array(B.reshape(n, -1) if vector else B, dtype=np.complex128)
    if X.shape[0] != n:
        raise DimensionError(f"L is {n}x{n} but B has {X.shape[0]} rows")
    for i in range(1, n):
        X[i] -= L[i, :i] @ X[:i]
    return X.ravel() if vector else X


def solve_upper_unit(U: ArrayLike, B: ArrayLike) -> CMatrix:
    """Back substitution for ``U X = B`` with ``U`` unit upper triangular."""
    U = np.asarray(U)
    B = np.asarray(B)
    n = _require_square(U, "U")
    vector = B.ndim == 1
    X = np.array(B.reshape(n, -1) if vector else B, dtype=np.complex128)
    if X.shape[0] != n:
        raise DimensionError(f"U is {n}x{n} but B has {X.shape[0]} rows")
    for i in range(n - 2, -1, -1):
        X[i] -= U[i, i + 1 :] @ X[i + 1 :]
    return X.ravel() if vector else X


@dataclass(frozen=True)
class LdlFactors:
    """``R = L blockdiag(D) L^H`` with unit (block) lower triangular ``L``.

    ``L`` is ``NM x NM``; ``D`` holds ``N`` Hermitian ``M x M`` blocks. The
    scalar factorizations are the ``block_size == 1`` case.
    """

    L: CMatrix
    D: tuple
    block_size: int

    def __post_init__(self):
        L = np.asarray(self.L, dtype=np.complex128)
        D = tuple(np.asarray(d, dtype=np.complex128).reshape(self.block_size, self.block_size) for d in self.D)
        M = self.block_size
        n = _require_square(L, "L")
        if M < 1 or n != M * len(D):
            raise DimensionError(f"L is {n}x{n} but D holds {len(D)} blocks of size {M}")
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "D", D)

    @property
    def depth(self) -> int:
        return len(self.D)

    def d_matrix(self) -> CMatrix:
        """Block-diagonal ``D`` as a dense matrix."""
        M = self.block_size
        out = np.zeros_like(self.L)
        for k, d in enumerate(self.D):
            out[k * M : (k + 1) * M, k * M : (k + 1) * M] = d
        return out

    def check_invariants(self, tol: float = 1e-12) -> None:
        """Raise ``AssertionError`` if the structural invariants are violated."""
        M = self.block_size
        assert not np.any(np.triu(self.L, 1)), "L has nonzero strictly-upper entries"
        eye = np.eye(M)
        for k, d in enumerate(self.D):
            blk = self.L[k * M : (k + 1) * M, k * M : (k + 1) * M]
            assert np.array_equal(blk, eye), f"diagonal block {k} of L is not the identity"
            assert hermitian_check(d, tol), f"D block {k} is not Hermitian"


def reconstruct(f: LdlFactors) -> CMatrix:
    """``L blockdiag(D) L^H``."""
    return f.L @ f.d_matrix() @ f.L.conj().T


def _check_invertible(d: np.ndarray, index: int, cond_tol: float) -> None:
    s = np.linalg.svd(d, compute_uv=False)
    if s[0] == 0.0 or s[-1] <= cond_tol * s[0]:
        raise SingularFactorError(index, f"D block {index} is singular (singular values {s})")


def pinv_from_ldl(f: LdlFactors, cond_tol: float = COND_TOL) -> CMatrix:
    """``L^-H D^-1 L^-1`` via forward solve, block-diagonal solve, back solve.

    The result is Hermitian-symmetrized before it is returned. Raises
    :class:`SingularFactorError` (1-based block index) for a near-singular D block.
    """
    M = f.block_size
    for k, d in enumerate(f.D, start=1):
        _check_invertible(d, k, cond_tol)
    n = f.L.shape[0]
    Y = solve_lower_unit(f.L, np.eye(n, dtype=np.complex128))
    for k, d in enumerate(f.D):
        rows = slice(k * M, (k + 1) * M)
        Y[rows] = np.linalg.solve(d, Y[rows])
    X = solve_upper_unit(f.L.conj().T, Y)
    return hermitize(X)
