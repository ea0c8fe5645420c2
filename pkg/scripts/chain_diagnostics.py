#!/usr/bin/env python3
"""Quick look at chain equilibration and autocorrelation at one size.

Prints the acceptance rate and the binning-error plateau of the average
degree, the observable used to justify the default burn-in/thinning
schedule.
"""

import argparse

import numpy as np

from akltsim import (ChainParams, build_honeycomb, contract_domains,
                     mod2_reduce, sample_chain)

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--L", type=int, default=60)
    ap.add_argument("--samples", type=int, default=400)
    ap.add_argument("--thinning", type=int, default=1)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    lat = build_honeycomb(args.L, "periodic")
    params = ChainParams(seed=args.seed, n_samples=args.samples,
                         burn_in=2000, thinning=args.thinning)
    degree = []
    acc = []
    for snap in sample_chain(lat, params):
        part, mg = contract_domains(lat.n_sites, lat.edges, snap.outcomes)
        g = mod2_reduce(mg)
        degree.append(2 * g.n_edges / part.n_domains)
        acc.append(snap.acceptance_rate)
    x = np.array(degree)
    print(f"L={args.L} thinning={args.thinning}: "
          f"acceptance {np.mean(acc):.3f}, mean degree {x.mean():.4f}")
    bsize = 1
    while x.size // bsize >= 8:
        nb = x.size // bsize
        means = x[:nb * bsize].reshape(nb, bsize).mean(axis=1)
        err = means.std(ddof=1) / np.sqrt(nb)
        print(f"  bin {bsize:4d}: stderr {err:.6f}")
        bsize *= 2
