"""Known-R / unknown-R comparison of RChol and Schur on a simulated channel.

For every instant ``n`` in ``[N + Lc - 1, T)`` the exact ``R_N(n)`` is the
reference; each algorithm's reconstruction ``L D L^H`` is compared with it
(:func:`cholkit.metrics.compare`). In known mode the algorithms are fed exact
correlations, in unknown mode exponentially forgotten sample estimates.

Output CSV (fixed header)::

    n,algo,mode,status,max_abs_diff,max_ratio,n_guarded,frob_rel_err

one row per ``(n, algo)`` followed by one ``n = SUMMARY`` row per algorithm
holding the maximum of each column over the successful rows. A failed
factorization writes ``status = error:<ExceptionName>`` and ``nan`` fields;
its summary status is ``failed=<count>``. Floats use 17 significant digits.

Config files are flat ``key = value`` lines with ``#`` comments and the same
keys as the flags (``snr-db`` or ``snr_db``). Flags override the file.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from .channel import ChannelParams, exact_correlation, generate_channel, receive, sample_correlation_stream, write_stream_csv
from .errors import CholkitError, NotPositiveDefiniteError, UsageError
from .factor import cholesky_gaxpy
from .linalg import reconstruct
from .metrics import compare
from .rchol import factors_of, rchol_init, rchol_update
from .schur import columns_to_factors, schur_columns_batch

HEADER = ("n", "algo", "mode", "status", "max_abs_diff", "max_ratio", "n_guarded", "frob_rel_err")
ALGOS = ("rchol", "schur")


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str = "known"
    algos: tuple = ALGOS
    M: int = 2
    N: int = 8
    Lc: int = 3
    T: int = 5000
    alpha: float = 0.999
    snr_db: float = 20.0
    lam: float = 0.98
    seed: int = 1
    guard: float = 1e-9
    out: str = "-"
    dump_stream: str = ""

    @property
    def noise_var(self) -> float:
        return 10.0 ** (-self.snr_db / 10.0)


# config key -> dataclass field
_KEYS = {
    "mode": "mode", "algos": "algos", "M": "M", "N": "N", "Lc": "Lc", "T": "T",
    "alpha": "alpha", "snr-db": "snr_db", "snr_db": "snr_db", "lambda": "lam",
    "seed": "seed", "guard": "guard", "out": "out", "dump-stream": "dump_stream",
    "dump_stream": "dump_stream",
}


def _as_int(key, raw, lo):
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(key, f"expected an integer, got {raw!r}") from None
    if v < lo:
        raise UsageError(key, f"must be >= {lo}, got {v}")
    return v


def _as_float(key, raw):
    try:
        v = float(raw)
    except ValueError:
        raise UsageError(key, f"expected a number, got {raw!r}") from None
    if not math.isfinite(v):
        raise UsageError(key, f"must be finite, got {raw!r}")
    return v


def _coerce(key: str, raw: str):
    name = _KEYS[key]
    raw = raw.strip()
    if name == "mode":
        if raw not in ("known", "unknown"):
            raise UsageError(key, f"expected 'known' or 'unknown', got {raw!r}")
        return raw
    if name == "algos":
        algos = tuple(a.strip() for a in raw.split(",") if a.strip())
        bad = [a for a in algos if a not in ALGOS]
        if not algos or bad or len(set(algos)) != len(algos):
            raise UsageError(key, f"expected a comma list drawn from {','.join(ALGOS)}, got {raw!r}")
        return algos
    if name in ("M", "N", "Lc", "T"):
        return _as_int(key, raw, 1)
    if name == "seed":
        return _as_int(key, raw, 0)
    if name in ("out", "dump_stream"):
        return raw
    v = _as_float(key, raw)
    if name == "alpha" and not 0.0 <= v <= 1.0:
        raise UsageError(key, f"must lie in [0, 1], got {v}")
    if name == "lam" and not 0.0 < v <= 1.0:
        raise UsageError(key, f"must lie in (0, 1], got {v}")
    if name == "guard" and not v > 0.0:
        raise UsageError(key, f"must be positive, got {v}")
    return v


def read_config_file(path: str) -> dict:
    """Parse ``key = value`` lines; unknown keys raise :class:`UsageError`."""
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}", f"expected key = value, got {line!r}")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in _KEYS:
                raise UsageError(key, "unknown key")
            values[key] = raw
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("argv", message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cholkit-bench", description=__doc__.split("\n\n")[0],
                argument_default=argparse.SUPPRESS)
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--mode", help="known | unknown (default known)")
    p.add_argument("--algos", help="comma list of rchol,schur (default both)")
    for key, default in (("M", 2), ("N", 8), ("Lc", 3), ("T", 5000)):
        p.add_argument(f"--{key}", help=f"default {default}")
    p.add_argument("--alpha", help="tap correlation per symbol (default 0.999)")
    p.add_argument("--snr-db", dest="snr-db", help="default 20")
    p.add_argument("--lambda", dest="lambda", help="forgetting factor, unknown mode (default 0.98)")
    p.add_argument("--seed", help="default 1")
    p.add_argument("--guard", help="ratio guard (default 1e-9)")
    p.add_argument("--out", help="CSV path, '-' for stdout (default)")
    p.add_argument("--dump-stream", dest="dump-stream", help="also write y(n) as CSV here")
    return p


def parse_config(argv=None) -> ExperimentConfig:
    """Defaults, overridden by ``--config`` file values, overridden by flags."""
    ns, extra = _build_parser().parse_known_args([] if argv is None else list(argv))
    if extra:
        raise UsageError(extra[0], "unknown option")
    raw = {}
    flags = vars(ns)
    if "config" in flags:
        raw.update(read_config_file(flags.pop("config")))
    raw.update(flags)
    values = {_KEYS[k]: _coerce(k, v) for k, v in raw.items()}
    cfg = replace(ExperimentConfig(), **values)
    if cfg.T < cfg.N + cfg.Lc:
        raise UsageError("T", f"must be >= N + Lc = {cfg.N + cfg.Lc}, got {cfg.T}")
    return cfg


@dataclass(frozen=True)
class Row:
    n: object  # int, or "SUMMARY"
    algo: str
    mode: str
    status: str
    max_abs_diff: float = math.nan
    max_ratio: float = math.nan
    n_guarded: float = math.nan
    frob_rel_err: float = math.nan

    def cells(self) -> list:
        def num(x):
            if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
                return str(int(x))
            return "nan" if math.isnan(x) else f"{x:.17g}"

        return [str(self.n), self.algo, self.mode, self.status,
                num(self.max_abs_diff), num(self.max_ratio), num(self.n_guarded), num(self.frob_rel_err)]


def _report_row(n, algo, mode, ref, est, guard) -> Row:
    r = compare(ref, est, guard)
    return Row(n, algo, mode, "ok", r.max_abs_diff, r.max_ratio, r.n_guarded, r.frob_rel_err)


def _error_row(n, algo, mode, exc) -> Row:
    return Row(n, algo, mode, f"error:{type(exc).__name__}")


def summarize(rows, algos, mode) -> list:
    out = []
    for algo in algos:
        mine = [r for r in rows if r.algo == algo]
        good = [r for r in mine if r.status == "ok"]
        failed = len(mine) - len(good)
        status = "ok" if failed == 0 else f"failed={failed}"
        if good:
            out.append(Row("SUMMARY", algo, mode, status,
                           max(r.max_abs_diff for r in good), max(r.max_ratio for r in good),
                           max(r.n_guarded for r in good), max(r.frob_rel_err for r in good)))
        else:
            out.append(Row("SUMMARY", algo, mode, status))
    return out


def _schur_all(observations, chunk: int = 1024):
    """Schur factors for every instant, each first block column treated as stationary."""
    cols = np.stack([o.blocks for o in observations])
    parts = [schur_columns_batch(cols[i : i + chunk]) for i in range(0, len(cols), chunk)]
    return tuple(np.concatenate(p) for p in zip(*parts))


def run_experiment(cfg: ExperimentConfig) -> list:
    """Per-instant rows followed by per-algorithm summary rows."""
    params = ChannelParams(cfg.M, cfg.Lc, cfg.T, cfg.alpha, cfg.noise_var, cfg.seed)
    ch = generate_channel(params)
    y = receive(ch) if (cfg.mode == "unknown" or cfg.dump_stream) else None
    if cfg.dump_stream:
        write_stream_csv(y, cfg.dump_stream)
    sample = sample_correlation_stream(y, cfg.N, cfg.lam) if cfg.mode == "unknown" else None

    n_init = cfg.N + cfg.Lc - 2
    snaps = [exact_correlation(ch, cfg.N, n) for n in range(n_init, cfg.T)]
    observations = [s.obs for s in snaps] if sample is None else [sample.obs(s.time) for s in snaps]
    schur_out = _schur_all(observations) if "schur" in cfg.algos else None

    rows = []
    state = None
    for idx, (snap, obs) in enumerate(zip(snaps, observations)):
        n = snap.time
        measured = n > n_init
        ref_error = None
        if measured:
            try:
                cholesky_gaxpy(snap.R)
            except CholkitError as exc:
                ref_error = exc
        for algo in cfg.algos:
            if algo == "rchol":
                try:
                    state = rchol_init(obs, cfg.M, cfg.N) if state is None else rchol_update(state, obs)
                    est = reconstruct(factors_of(state)) if measured else None
                except CholkitError as exc:
                    state = None
                    if measured:
                        rows.append(_error_row(n, algo, cfg.mode, exc))
                    continue
            elif measured:
                A, D, bad = schur_out
                if bad[idx] >= 0:
                    rows.append(_error_row(n, algo, cfg.mode, NotPositiveDefiniteError(int(bad[idx]) + 1)))
                    continue
                est = reconstruct(columns_to_factors(A[idx], D[idx]))
            if not measured:
                continue
            if ref_error is not None:
                rows.append(_error_row(n, algo, cfg.mode, ref_error))
            else:
                rows.append(_report_row(n, algo, cfg.mode, snap.R, est, cfg.guard))
    return rows + summarize(rows, cfg.algos, cfg.mode)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    w.writerows(r.cells() for r in rows)
    return buf.getvalue()


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"usage error: config: {exc}", file=sys.stderr)
        return 2
    text = rows_to_csv(run_experiment(cfg))
    if cfg.out in ("", "-"):
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
