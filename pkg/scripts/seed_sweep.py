"""Known/unknown-mode sweep over seeds, summarizing RChol against Schur.

Writes one CSV per (mode, seed) into ``--outdir`` and prints the summary rows.

    python scripts/seed_sweep.py --seeds 1-10 --outdir results/
"""

import argparse
import csv
import io
from pathlib import Path

from cholkit.bench import parse_config, rows_to_csv, run_experiment


def seed_range(text):
    lo, _, hi = text.partition("-")
    return range(int(lo), int(hi or lo) + 1)


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--seeds", type=seed_range, default=seed_range("1-10"))
    ap.add_argument("--modes", default="known,unknown")
    ap.add_argument("--outdir", type=Path, default=Path("results"))
    ap.add_argument("extra", nargs=argparse.REMAINDER, help="further bench flags, e.g. -- --T 2000")
    args = ap.parse_args()
    extra = [a for a in args.extra if a != "--"]
    args.outdir.mkdir(parents=True, exist_ok=True)

    print("mode,seed,algo,status,max_abs_diff,max_ratio,frob_rel_err")
    for mode in args.modes.split(","):
        for seed in args.seeds:
            text = rows_to_csv(run_experiment(parse_config(["--mode", mode, "--seed", str(seed), *extra])))
            (args.outdir / f"sweep_{mode}_seed{seed}.csv").write_text(text)
            for row in csv.DictReader(io.StringIO(text)):
                if row["n"] == "SUMMARY":
                    print(f"{mode},{seed},{row['algo']},{row['status']},"
                          f"{float(row['max_abs_diff']):.4g},{float(row['max_ratio']):.4g},{float(row['frob_rel_err']):.4g}")


if __name__ == "__main__":
    main()
