"""Counted multiplies of one RChol update against one full Schur factorization.

    python scripts/cost_scaling.py --M 2 --depths 8 16 32 64 128
"""

import argparse

import numpy as np
from scipy.linalg import solve_discrete_lyapunov

from cholkit import FirstColumnObservation, ToeplitzSpec, rchol_init, rchol_update, schur_decompose
from cholkit.opcount import counting


def stationary_blocks(N, M, rng):
    # VAR(1) process y(n) = F y(n-1) + w(n): blocks r0 (F^H)^i with r0 from the Lyapunov equation
    F = rng.standard_normal((M, M)) + 1j * rng.standard_normal((M, M))
    F *= 0.7 / np.max(np.abs(np.linalg.eigvals(F)))
    r0 = solve_discrete_lyapunov(F, np.eye(M))
    blocks = np.empty((N, M, M), dtype=complex)
    blocks[0] = 0.5 * (r0 + r0.conj().T)
    for i in range(1, N):
        blocks[i] = blocks[i - 1] @ F.conj().T
    return blocks


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--M", type=int, default=2)
    ap.add_argument("--depths", type=int, nargs="+", default=[8, 16, 32, 64])
    args = ap.parse_args()
    rng = np.random.default_rng(0)

    print("N,update_mults,schur_mults,ratio")
    depths, ratios = [], []
    for N in args.depths:
        blocks = stationary_blocks(N, args.M, rng)
        state = rchol_init(FirstColumnObservation(0, blocks, blocks[0]), args.M, N)
        with counting() as upd:
            rchol_update(state, FirstColumnObservation(1, blocks, blocks[0]))
        with counting() as full:
            schur_decompose(ToeplitzSpec(blocks))
        depths.append(N)
        ratios.append(upd.multiplies / full.multiplies)
        print(f"{N},{upd.multiplies},{full.multiplies},{ratios[-1]:.5f}")
    if len(depths) > 1:
        slope = np.polyfit(np.log(depths), np.log(ratios), 1)[0]
        print(f"# log-log slope of the ratio: {slope:.3f}")


if __name__ == "__main__":
    main()
