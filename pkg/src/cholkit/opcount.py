"""Multiply counters used as cost witnesses.

The recursions route their dense products and small solves through
:func:`matmul` and :func:`solve_right` so that a surrounding
:func:`counting` block can tally complex multiplies without timing noise.
"""

from __future__ import annotations

import contextvars
import math
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np


@dataclass
class MulCounter:
    multiplies: int = 0


_active: contextvars.ContextVar[MulCounter | None] = contextvars.ContextVar(
    "cholkit_mul_counter", default=None
)


@contextmanager
def counting():
    """Count multiplies performed inside the ``with`` block.

    >>> with counting() as c:
    ...     _ = matmul(np.ones((2, 3)), np.ones((3, 4)))
    >>> c.multiplies
    24
    """
    counter = MulCounter()
    token = _active.set(counter)
    try:
        yield counter
    finally:
        _active.reset(token)


def tally(n: int) -> None:
    counter = _active.get()
    if counter is not None:
        counter.multiplies += n


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a @ b`` with broadcasting over leading axes of ``a``; counts m*k*n per product."""
    *batch, m, k = a.shape
    n = b.shape[-1]
    tally(math.prod(batch) * m * k * n)
    return a @ b


def solve_right(b: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Return ``b @ inv(a)`` for square ``a`` without forming the inverse.

    Counted as an LU of ``a`` (m**3 / 3) plus two triangular sweeps per row of ``b``.
    """
    m = a.shape[0]
    rows = math.prod(b.shape[:-1])
    tally(m**3 // 3 + rows * m * m)
    return np.linalg.solve(a.T, b.reshape(-1, m).T).T.reshape(b.shape)


def solve_left(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Return ``inv(a) @ b`` for square ``a`` (or a stack of them).

    Counted like :func:`solve_right`, once per matrix in the stack.
    """
    m = a.shape[-1]
    batch = math.prod(a.shape[:-2])
    tally(batch * (m**3 // 3 + b.shape[-1] * m * m))
    return np.linalg.solve(a, b)
