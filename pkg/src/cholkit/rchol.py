"""Recursive time update of block ``L D L^H`` factors (RChol).

Consecutive stacked correlation matrices share structure: the trailing
``(N-1)`` block principal submatrix of ``R_N(n)`` is the leading one of
``R_N(n-1)``. The updater exploits it and consumes only the new first
block column per instant:

* column 1 is the observed first block column itself, ``D_1 = r00``;
* column 2 comes from one reflection step that couples the previous
  column 1 with the current one;
* columns ``k > 2`` are the previous instant's columns ``k - 1`` shifted
  down one block.

The state keeps factor columns in unnormalized form ``A_k = L_k D_k`` so
no square roots are taken. The very first state is seeded by a Schur run
on the initial observation treated as stationary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, PreconditionError, SingularFactorError
from .linalg import COND_TOL, CMatrix, LdlFactors, hermitian_check, hermitize, pinv_from_ldl
from .opcount import matmul, solve_right
from .schur import ToeplitzSpec, columns_to_factors, schur_columns, shift_down

SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class FirstColumnObservation:
    """Per-instant input to the updater.

    ``blocks[i]`` is ``r^n_{i0} = E[y(n-i) y(n)^H]`` for ``i = 0..N-1``
    (shape ``(N, M, M)``); ``tilde_d`` is ``r^n_{11}``, the zero-lag block of
    the one-step-delayed signal.
    """

    time: int
    blocks: np.ndarray = field(repr=False)
    tilde_d: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.array(self.blocks, dtype=np.complex128)
        if b.ndim == 1:
            b = b.reshape(-1, 1, 1)
        td = np.array(self.tilde_d, dtype=np.complex128)
        if td.ndim < 2:
            td = td.reshape(1, 1)
        if b.ndim != 3 or b.shape[1] != b.shape[2] or td.shape != b.shape[1:]:
            raise DimensionError(f"inconsistent observation shapes {b.shape} / {td.shape}")
        for name, blk in (("r00", b[0]), ("tilde_d", td)):
            if not hermitian_check(blk, 1e-10 * max(1.0, float(np.max(np.abs(blk))))):
                raise PreconditionError(f"{name} is not Hermitian")
        b.setflags(write=False)
        td.setflags(write=False)
        object.__setattr__(self, "blocks", b)
        object.__setattr__(self, "tilde_d", td)

    @property
    def N(self) -> int:
        return self.blocks.shape[0]

    @property
    def M(self) -> int:
        return self.blocks.shape[1]


@dataclass(frozen=True)
class RcholState:
    """Factor columns at ``time``.

    ``A`` has shape ``(N, N, M, M)``: ``A[k]`` is block column ``k + 1`` of
    ``L D`` with blocks above ``k`` zero and ``A[k][k] == D[k]``. ``prev_A``
    and ``prev_D`` are the arrays of ``time - 1`` (``None`` right after
    initialization). ``k_ref`` / ``k_tilde`` are the reflection coefficients
    of the last update.
    """

    M: int
    N: int
    A: np.ndarray = field(repr=False)
    D: np.ndarray = field(repr=False)
    time: int
    prev_A: np.ndarray | None = field(default=None, repr=False)
    prev_D: np.ndarray | None = field(default=None, repr=False)
    k_ref: np.ndarray | None = field(default=None, repr=False)
    k_tilde: np.ndarray | None = field(default=None, repr=False)


def _check_shape(obs: FirstColumnObservation, M: int, N: int) -> None:
    if obs.M != M or obs.N != N:
        raise DimensionError(f"observation is N={obs.N}, M={obs.M}; expected N={N}, M={M}")


def _require_invertible(block: np.ndarray, what: str) -> None:
    s = np.linalg.svd(block, compute_uv=False)
    if s[0] == 0.0 or s[-1] <= SINGULAR_TOL * s[0]:
        raise SingularFactorError(1, f"{what} is singular")


def rchol_init(obs: FirstColumnObservation, M: int, N: int) -> RcholState:
    """Initial state from one observation.

    Column 1 is ``obs.blocks`` with ``D_1 = r00``; columns ``2..N`` come from a
    Schur run on ``obs`` as if the stream were stationary.
    """
    _check_shape(obs, M, N)
    A, D = schur_columns(ToeplitzSpec(obs.blocks))
    return RcholState(M, N, A, D, obs.time)


def rchol_update(state: RcholState, obs: FirstColumnObservation) -> RcholState:
    """Advance ``state`` from ``n - 1`` to ``n = obs.time``.

    ``k_ref = r^n_{10} (r^{n-1}_{00})^-1`` and
    ``k_tilde = k_ref^H D_1(n-1) tilde_d^-1`` couple the shifted previous
    column 1 with the current one:

        A_2(n) = Z A_1(n-1) - A~_1(n) k_tilde

    ``A~_1`` being column 1 with its top block zeroed. ``D_2(n)`` is the
    pivot block of ``A_2(n)``, i.e. ``D_1(n-1) - r^n_{10} k_tilde``; for
    ``M = 1`` this equals ``D_1(n-1) (1 - k_ref k_tilde)``. Columns
    ``k > 2`` are ``Z A_{k-1}(n-1)`` with ``D_k(n) = D_{k-1}(n-1)``.
    """
    M, N = state.M, state.N
    _check_shape(obs, M, N)
    if obs.time != state.time + 1:
        raise PreconditionError(f"state is at time {state.time}, observation at {obs.time}")
    col1 = obs.blocks
    d1_prev = state.D[0]
    A = np.zeros_like(state.A)
    D = np.zeros_like(state.D)
    A[0] = col1
    D[0] = col1[0]
    k_ref = k_tilde = None
    if N > 1:
        _require_invertible(d1_prev, "previous r00 block")
        _require_invertible(obs.tilde_d, "tilde_d block")
        tilde_col = col1[1:]  # A~_1(n) without its zero top block
        k_ref = solve_right(tilde_col[0], d1_prev)
        k_tilde = solve_right(matmul(k_ref.conj().T, d1_prev), obs.tilde_d)
        a2 = shift_down(state.A[0])
        a2[1:] -= matmul(tilde_col, k_tilde)
        a2[1] = hermitize(a2[1])
        A[1] = a2
        D[1] = a2[1]
        for k in range(2, N):
            A[k] = shift_down(state.A[k - 1])
            D[k] = state.D[k - 1]
    return RcholState(M, N, A, D, obs.time, state.A, state.D, k_ref, k_tilde)


def factors_of(state: RcholState) -> LdlFactors:
    """``L`` block columns ``A_k D_k^-1`` and ``D`` as stored."""
    s = np.linalg.svd(state.D, compute_uv=False)
    bad = np.flatnonzero((s[:, 0] == 0.0) | (s[:, -1] <= COND_TOL * s[:, 0]))
    if bad.size:
        raise SingularFactorError(int(bad[0]) + 1)
    return columns_to_factors(state.A, state.D)


def rchol_pinv(state: RcholState) -> CMatrix:
    """Pseudo-inverse ``L^-H D^-1 L^-1`` straight from the recursive factors."""
    return pinv_from_ldl(factors_of(state))
