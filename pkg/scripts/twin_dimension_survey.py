#!/usr/bin/env python3
"""Survey twin-space dimensions of random states as a function of rank.

Samples random bipartite states at every rank for the requested
dimensions and tabulates the observed twin-space dimensions, splitting
them into detectable and undetectable contributions.  Nonsingular
states land in the scalars-only row; low ranks show where nontrivial
twins appear.
"""

import argparse
from collections import Counter

import numpy as np

from twinobs import BipartiteState, solve_twin_space


def random_state(rng, d_plus, d_minus, rank):
    dim = d_plus * d_minus
    vecs = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    w = rng.uniform(0.2, 1.0, size=rank)
    rho = sum(
        wi * np.outer(v, v.conj()) / np.linalg.norm(v) ** 2
        for wi, v in zip(w, vecs.T)
    )
    rho /= np.trace(rho).real
    return BipartiteState(d_plus, d_minus, rho)


def survey(d_plus, d_minus, samples, rng):
    dim = d_plus * d_minus
    print(f"== {d_plus}x{d_minus} ({samples} samples per rank) ==")
    print(f"  {'rank':>4}  {'total dims seen':<24} {'detectable':<16} undetectable(+,-)")
    for rank in range(1, dim + 1):
        totals, detect, undet = Counter(), Counter(), Counter()
        for _ in range(samples):
            space = solve_twin_space(random_state(rng, d_plus, d_minus, rank))
            totals[space.dim_total] += 1
            detect[space.dim_detectable] += 1
            undet[(space.dim_undetectable_plus, space.dim_undetectable_minus)] += 1
        fmt = lambda c: ", ".join(f"{k}:{v}" for k, v in sorted(c.items()))
        print(f"  {rank:>4}  {fmt(totals):<24} {fmt(detect):<16} {fmt(undet)}")
    print()


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--dims", nargs="+", default=["2x2", "2x3", "3x3"],
                        help="subsystem dimensions, e.g. 2x3")
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    for dims_arg in args.dims:
        dp, dm = (int(x) for x in dims_arg.lower().split("x"))
        survey(dp, dm, args.samples, rng)


if __name__ == "__main__":
    main()
