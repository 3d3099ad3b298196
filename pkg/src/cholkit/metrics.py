"""Elementwise difference / ratio comparison of a reference and an estimate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

DEFAULT_GUARD = 1e-9


@dataclass(frozen=True)
class ComparisonReport:
    max_abs_diff: float
    max_ratio: float
    frob_rel_err: float
    n_guarded: int


def compare(reference, estimate, guard: float = DEFAULT_GUARD) -> ComparisonReport:
    """Extremes of ``|ref - est|`` and ``|ref| / |est|``.

    The ratio only runs over entries with ``|est| > guard * max|ref|``; the
    rest are counted in ``n_guarded``. With no eligible entry ``max_ratio``
    is 0.
    """
    ref = np.asarray(reference)
    est = np.asarray(estimate)
    if ref.shape != est.shape:
        raise DimensionError(f"shape mismatch {ref.shape} vs {est.shape}")
    if guard <= 0:
        raise ValueError("guard must be positive")
    diff = np.abs(ref - est)
    max_abs_diff = float(diff.max()) if diff.size else 0.0
    mag_ref = np.abs(ref)
    mag_est = np.abs(est)
    ok = mag_est > guard * (mag_ref.max() if mag_ref.size else 0.0)
    max_ratio = float(np.max(mag_ref[ok] / mag_est[ok])) if ok.any() else 0.0
    ref_norm = np.linalg.norm(ref)
    frob = float(np.linalg.norm(ref - est) / ref_norm) if ref_norm > 0 else 0.0
    return ComparisonReport(max_abs_diff, max_ratio, frob, int(ok.size - ok.sum()))
