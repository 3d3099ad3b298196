"""Time-varying SIMO channel and received-signal correlations.

The received ``M``-vector is ``y(n) = sum_l h(n; l) s(n - l) + v(n)`` with a
single transmit antenna. Taps follow a first-order Gauss-Markov recursion
``h(n; l) = alpha h(n-1; l) + sqrt(1 - alpha^2) w(n; l)`` started from its
stationary law; tap variance ``1/Lc`` and unit-power symbols give
``SNR = 1 / noise_var``. Signal and noise are zero before ``n = 0``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.signal import lfilter

from .errors import RangeError
from .rchol import FirstColumnObservation

CONSTELLATIONS = ("BPSK", "QPSK")


@dataclass(frozen=True)
class ChannelParams:
    M: int = 2
    Lc: int = 3
    T: int = 5000
    alpha: float = 0.999
    noise_var: float = 0.01
    seed: int = 1
    constellation: str = "QPSK"

    def __post_init__(self):
        if self.M < 1 or self.Lc < 1 or self.T < 1:
            raise ValueError("M, Lc and T must be positive")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.noise_var < 0:
            raise ValueError("noise_var must be nonnegative")
        if self.constellation not in CONSTELLATIONS:
            raise ValueError(f"unknown constellation {self.constellation!r}")


@dataclass(frozen=True)
class ChannelRealization:
    """``taps`` is ``(T, Lc, M)``, ``symbols`` ``(T,)``, ``noise`` ``(T, M)``."""

    params: ChannelParams
    taps: np.ndarray = field(repr=False)
    symbols: np.ndarray = field(repr=False)
    noise: np.ndarray = field(repr=False)


def _complex_normal(rng: np.random.Generator, shape, var: float) -> np.ndarray:
    scale = np.sqrt(var / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def generate_channel(p: ChannelParams) -> ChannelRealization:
    """Draw taps, symbols and noise from a Philox stream keyed by ``p.seed``."""
    rng = np.random.Generator(np.random.Philox(p.seed))
    drive = _complex_normal(rng, (p.T, p.Lc, p.M), 1.0 / p.Lc)
    drive[1:] *= np.sqrt(1.0 - p.alpha**2)
    taps = lfilter([1.0], [1.0, -p.alpha], drive, axis=0)
    bits = rng.integers(0, 2, size=(p.T, 2))
    if p.constellation == "BPSK":
        symbols = (2.0 * bits[:, 0] - 1.0).astype(np.complex128)
    else:
        symbols = ((2.0 * bits[:, 0] - 1.0) + 1j * (2.0 * bits[:, 1] - 1.0)) / np.sqrt(2.0)
    noise = _complex_normal(rng, (p.T, p.M), p.noise_var)
    return ChannelRealization(p, taps, symbols, noise)


def receive(ch: ChannelRealization) -> np.ndarray:
    """Received sequence, shape ``(T, M)``; ``s(m) = 0`` for ``m < 0``."""
    T, Lc, _ = ch.taps.shape
    y = np.array(ch.noise, dtype=np.complex128)
    for l in range(min(Lc, T)):
        y[l:] += ch.taps[l:, l, :] * ch.symbols[: T - l, None]
    return y


def channel_matrix(ch: ChannelRealization, depth: int, n: int) -> np.ndarray:
    """``H`` with ``[y(n); ...; y(n-depth+1)] = H [s(n); s(n-1); ...] + noise``.

    Shape ``(depth * M, depth + Lc - 1)``; rows and columns referring to
    negative times are zero.
    """
    T, Lc, M = ch.taps.shape
    H = np.zeros((depth, M, depth + Lc - 1), dtype=np.complex128)
    for i in range(min(depth, n + 1)):
        H[i, :, i : i + Lc] = ch.taps[n - i].T
    if n + 1 < H.shape[2]:
        H[:, :, n + 1 :] = 0.0
    return H.reshape(depth * M, -1)


@dataclass(frozen=True)
class CorrelationSnapshot:
    """Exact correlations at one instant: full ``R_N(n)`` plus the observation."""

    time: int
    R: np.ndarray = field(repr=False)
    obs: FirstColumnObservation


def exact_correlation(ch: ChannelRealization, N: int, n: int, noise_var: float | None = None) -> CorrelationSnapshot:
    """``r^n_{ij} = E[y(n-i) y(n-j)^H]`` over symbols and noise, taps fixed.

    Requires ``N + Lc - 2 <= n < T`` so that every referenced symbol exists.
    """
    T, Lc, M = ch.taps.shape
    if noise_var is None:
        noise_var = ch.params.noise_var
    if n < N + Lc - 2 or n >= T:
        raise RangeError(f"time {n} outside [{N + Lc - 2}, {T})")
    depth = max(N, 2)
    H = channel_matrix(ch, depth, n)
    R = H @ H.conj().T
    live = np.repeat(np.arange(depth) <= n, M)
    R[np.diag_indices_from(R)] += noise_var * live
    R = 0.5 * (R + R.conj().T)
    blocks = R[:, :M].reshape(depth, M, M)[:N]
    obs = FirstColumnObservation(n, blocks, R[M : 2 * M, M : 2 * M])
    return CorrelationSnapshot(n, R[: N * M, : N * M].copy(), obs)


@dataclass(frozen=True)
class CorrelationStream:
    """Observations for consecutive instants ``start, start + 1, ...``.

    ``mode`` is ``"exact"`` or ``"sample"``; ``matrices`` holds the full
    ``R_N(n)`` in exact mode only; ``lam`` is the forgetting factor in sample mode.
    """

    mode: str
    N: int
    M: int
    start: int
    observations: tuple = field(repr=False)
    matrices: tuple | None = field(default=None, repr=False)
    lam: float | None = None

    def __len__(self) -> int:
        return len(self.observations)

    def obs(self, n: int) -> FirstColumnObservation:
        if not self.start <= n < self.start + len(self):
            raise RangeError(f"time {n} not in stream")
        return self.observations[n - self.start]

    def matrix(self, n: int) -> np.ndarray:
        if self.matrices is None:
            raise ValueError("full matrices are only kept in exact mode")
        if not self.start <= n < self.start + len(self):
            raise RangeError(f"time {n} not in stream")
        return self.matrices[n - self.start]


def exact_correlation_stream(ch: ChannelRealization, N: int, start: int | None = None, stop: int | None = None) -> CorrelationStream:
    T, Lc, M = ch.taps.shape
    start = N + Lc - 2 if start is None else start
    stop = T if stop is None else stop
    snaps = [exact_correlation(ch, N, n) for n in range(start, stop)]
    return CorrelationStream(
        "exact", N, M, start, tuple(s.obs for s in snaps), tuple(s.R for s in snaps)
    )


def sample_correlation_stream(y: np.ndarray, N: int, lam: float) -> CorrelationStream:
    """Exponentially forgotten estimates of the first block column and ``r_11``.

    ``r^n_{i0} = lam r^{n-1}_{i0} + (1 - lam) y(n-i) y(n)^H`` from a zero start;
    ``r^n_{11}`` is filtered the same way from ``y(n-1) y(n-1)^H``. The full
    ``R_N(n)`` is never formed.
    """
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"lambda must lie in (0, 1], got {lam}")
    y = np.asarray(y, dtype=np.complex128)
    T, M = y.shape
    padded = np.zeros((T + N, M), dtype=np.complex128)
    padded[N:] = y
    # lagged[n, i] = y(n - i)
    lagged = np.stack([padded[N - i : N - i + T] for i in range(max(N, 2))], axis=1)
    inst = lagged[:, :N, :, None] * y[:, None, None, :].conj()
    inst_11 = lagged[:, 1, :, None] * lagged[:, 1, None, :].conj()
    est = lfilter([1.0 - lam], [1.0, -lam], inst, axis=0)
    est_11 = lfilter([1.0 - lam], [1.0, -lam], inst_11, axis=0)
    observations = tuple(FirstColumnObservation(n, est[n], est_11[n]) for n in range(T))
    return CorrelationStream("sample", N, M, 0, observations, None, lam)


def write_stream_csv(y: np.ndarray, out: io.TextIOBase | str) -> None:
    """Dump ``y`` as CSV: ``n, y0_re, y0_im, y1_re, ...`` with 17 significant digits."""
    y = np.asarray(y)
    header = ["n"] + [f"y{m}_{part}" for m in range(y.shape[1]) for part in ("re", "im")]
    rows: Iterable = (
        [str(n)] + [f"{v:.17g}" for z in row for v in (z.real, z.imag)] for n, row in enumerate(y)
    )
    if isinstance(out, str):
        with open(out, "w", newline="") as fh:
            _write(fh, header, rows)
    else:
        _write(out, header, rows)


def _write(fh, header, rows) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
