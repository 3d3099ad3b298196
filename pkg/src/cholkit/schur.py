"""Generator (Schur) recursion for Hermitian block-Toeplitz matrices.

The target matrix ``T`` has block ``(i, j)`` equal to ``r[i - j]`` with
``r[-m] = r[m]^H``; only the first block column ``r[0..N-1]`` is ever read.
With ``Z`` the block down-shift,

    T - Z T Z^H = u D^-1 u^H - v W^-1 v^H,

where initially ``u`` is the first block column, ``v`` the same column with
its top block zeroed and ``D = W = r[0]``. Each step emits ``u`` (the column
of ``L D``), shifts ``u`` down one block and applies an unnormalized block
hyperbolic rotation that re-zeroes the leading block of ``v``. No square
roots are taken; pivots are ``M x M`` matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, NotPositiveDefiniteError, PreconditionError
from .linalg import CMatrix, LdlFactors, hermitian_check
from .opcount import matmul, solve_left, tally

PD_TOL = 1e-13


@dataclass(frozen=True)
class ToeplitzSpec:
    """First block column ``r[0..N-1]`` of a Hermitian block-Toeplitz matrix.

    ``first_col`` is stored as an ``(N, M, M)`` complex array.
    """

    first_col: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.first_col, dtype=np.complex128)
        if c.ndim == 1:
            c = c.reshape(-1, 1, 1)
        if c.ndim != 3 or c.shape[1] != c.shape[2] or c.shape[0] < 1:
            raise DimensionError(f"first_col must have shape (N, M, M), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("first_col entries must be finite")
        scale = max(float(np.max(np.abs(c[0]))), 1e-300)
        if not hermitian_check(c[0], 1e-12 * max(scale, 1.0)):
            raise PreconditionError("r[0] is not Hermitian")
        c.setflags(write=False)
        object.__setattr__(self, "first_col", c)

    @property
    def N(self) -> int:
        return self.first_col.shape[0]

    @property
    def M(self) -> int:
        return self.first_col.shape[1]


@dataclass(frozen=True)
class GeneratorPair:
    """Forward/backward generators at recursion ``step`` (1-based).

    ``fwd`` and ``bwd`` are ``(..., N, M, M)`` block columns (a leading batch
    axis is allowed); blocks ``< step - 1`` of ``fwd`` and ``< step`` of
    ``bwd`` are zero. ``fwd_weight`` and ``bwd_weight`` are the ``M x M``
    matrices ``D`` and ``W`` of the displacement identity.
    """

    fwd: np.ndarray
    bwd: np.ndarray
    fwd_weight: np.ndarray
    bwd_weight: np.ndarray
    step: int


def shift_down(col: np.ndarray) -> np.ndarray:
    """Block down-shift ``Z`` on axis -3: block ``i`` moves to ``i + 1``, top block is zero."""
    out = np.zeros_like(col)
    out[..., 1:, :, :] = col[..., :-1, :, :]
    return out


def assemble_block_toeplitz(spec: ToeplitzSpec) -> CMatrix:
    """Dense ``NM x NM`` matrix with block ``(i, j) = r[i - j]``, ``r[-m] = r[m]^H``."""
    N, M = spec.N, spec.M
    c = spec.first_col
    T = np.empty((N * M, N * M), dtype=np.complex128)
    for i in range(N):
        for j in range(N):
            T[i * M : (i + 1) * M, j * M : (j + 1) * M] = c[i - j] if i >= j else c[j - i].conj().T
    return T


def initial_generators(first_col: np.ndarray) -> GeneratorPair:
    """Generators of ``T - Z T Z^H``: the first column and the same with its top block zeroed."""
    fwd = np.array(first_col, dtype=np.complex128)
    bwd = fwd.copy()
    bwd[..., 0, :, :] = 0.0
    r0 = fwd[..., 0, :, :]
    return GeneratorPair(fwd, bwd, r0.copy(), r0.copy(), 1)


def _hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + np.swapaxes(a, -1, -2).conj())


def _solve_guarded(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Batched ``inv(a) @ b``; singular members come back as NaN instead of raising."""
    try:
        return solve_left(a, b)
    except np.linalg.LinAlgError:
        out = np.full(np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + b.shape[-2:], np.nan, dtype=np.complex128)
        a_b = np.broadcast_to(a, out.shape[:-2] + a.shape[-2:])
        b_b = np.broadcast_to(b, out.shape)
        for idx in np.ndindex(out.shape[:-2]):
            try:
                out[idx] = np.linalg.solve(a_b[idx], b_b[idx])
            except np.linalg.LinAlgError:
                pass
        return out


def schur_step(g: GeneratorPair) -> GeneratorPair:
    """Advance the generators by one step.

    With ``a = Z fwd`` and ``b = bwd`` and ``beta`` the block of ``b`` that
    must vanish (block index ``step``):

        fwd' = a - b W^-1 beta^H        D' = D - beta W^-1 beta^H
        bwd' = b - a D^-1 beta          W' = W - beta^H D^-1 beta
    """
    s = g.step
    a = shift_down(g.fwd)
    b = g.bwd
    beta = b[..., s, :, :]
    beta_h = np.swapaxes(beta, -1, -2).conj()
    # reflection coefficients W^-1 beta^H (bwd -> fwd) and D^-1 beta (fwd -> bwd)
    k = _solve_guarded(np.stack((g.bwd_weight, g.fwd_weight), axis=-3), np.stack((beta_h, beta), axis=-3))
    k_fwd, k_bwd = k[..., 0, :, :], k[..., 1, :, :]
    bwd = np.zeros_like(b)
    bwd[..., s + 1 :, :, :] = b[..., s + 1 :, :, :] - matmul(a[..., s + 1 :, :, :], k_bwd[..., None, :, :])
    fwd = a  # a is a fresh array; update in place after bwd has read it
    fwd[..., s:, :, :] -= matmul(b[..., s:, :, :], k_fwd[..., None, :, :])
    d_next = _hermitize(g.fwd_weight - matmul(beta, k_fwd))
    w_next = _hermitize(g.bwd_weight - matmul(beta_h, k_bwd))
    fwd[..., s, :, :] = d_next
    return GeneratorPair(fwd, bwd, d_next, w_next, s + 1)


def _first_bad_pivots(D: np.ndarray, floor: np.ndarray) -> np.ndarray:
    """Per batch member, 0-based index of the first non-finite or non-PD pivot (-1 if none)."""
    finite = np.all(np.isfinite(D), axis=(-2, -1))
    safe = np.where(finite[..., None, None], D, -np.eye(D.shape[-1]))
    bad = ~finite | (np.linalg.eigvalsh(safe)[..., 0] <= floor[..., None])
    return np.where(bad.any(axis=-1), np.argmax(bad, axis=-1), -1)


def schur_columns_batch(first_cols: np.ndarray):
    """Schur recursion over a batch of first block columns ``(B, N, M, M)``.

    Returns ``(A, D, bad)``: ``A`` is ``(B, N, N, M, M)`` with ``A[b, k]`` the
    k-th column of ``L D``, ``D`` is ``(B, N, M, M)`` and ``bad[b]`` the
    0-based step whose pivot failed (``-1`` when all pivots are PD).
    """
    first_cols = np.asarray(first_cols, dtype=np.complex128)
    B, N, M, _ = first_cols.shape
    r0_diag = np.abs(np.diagonal(first_cols[:, 0], axis1=-2, axis2=-1))
    floor = PD_TOL * r0_diag.max(axis=-1)
    g = initial_generators(first_cols)
    A = np.zeros((B, N, N, M, M), dtype=np.complex128)
    D = np.empty((B, N, M, M), dtype=np.complex128)
    with np.errstate(all="ignore"):
        for k in range(N):
            A[:, k] = g.fwd
            D[:, k] = g.fwd_weight
            if k + 1 < N:
                g = schur_step(g)
    return A, D, _first_bad_pivots(D, floor)


def schur_columns(spec: ToeplitzSpec):
    """Single-spec recursion; returns ``(A, D)`` of shapes ``(N, N, M, M)`` and ``(N, M, M)``."""
    A, D, bad = schur_columns_batch(spec.first_col[None])
    if bad[0] >= 0:
        raise NotPositiveDefiniteError(int(bad[0]) + 1)
    return A[0], D[0]


def columns_to_factors(A: np.ndarray, D: np.ndarray) -> LdlFactors:
    """Turn ``L D`` block columns into :class:`LdlFactors` (``L_k = A_k D_k^-1``)."""
    N, _, M, _ = A.shape
    tally(N * (M**3 // 3) + (N * (N - 1) // 2) * M**3)
    # X[k, i] = A[k, i] @ inv(D[k]), all columns in one batched solve
    X = np.linalg.solve(D.transpose(0, 2, 1)[:, None], A.transpose(0, 1, 3, 2)).transpose(0, 1, 3, 2)
    X *= np.tri(N, N, -1).T[:, :, None, None]  # keep blocks strictly below the diagonal
    idx = np.arange(N)
    X[idx, idx] = np.eye(M)
    L = X.transpose(1, 2, 0, 3).reshape(N * M, N * M)
    Dh = 0.5 * (D + D.conj().transpose(0, 2, 1))
    return LdlFactors(L, tuple(Dh), M)


def schur_decompose(spec: ToeplitzSpec) -> LdlFactors:
    """Block ``L D L^H`` of the Toeplitz matrix implied by ``spec``.

    Column ``k`` of the factor comes out of recursion step ``k``; only
    ``spec.first_col`` is read. Raises :class:`NotPositiveDefiniteError`
    carrying the 1-based step whose pivot is not Hermitian positive definite.
    """
    A, D = schur_columns(spec)
    return columns_to_factors(A, D)
