"""Histogram of Poisson-Dirichlet atoms against the Watterson first correlation
function t x^-1 (1-x)^(t-1), for several t."""
import argparse
import csv
import sys

import numpy as np

from zmeasures.ewens_pd import EwensParams, sample_pd_batch, watterson_rho
from zmeasures.sampling import empirical_density, make_bins


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", nargs="+", default=["1/2", "1", "2"])
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--width", type=float, default=0.05)
    args = ap.parse_args(argv)

    lo = args.width
    bins = make_bins(lo, 1.0 - args.width, args.width)
    keep = int(np.ceil(1 / lo))
    nodes, weights = np.polynomial.legendre.leggauss(20)
    w = csv.writer(sys.stdout)
    w.writerow(["t", "bin_lo", "bin_hi", "empirical", "stderr", "watterson", "z_score"])
    for t in args.t:
        params = EwensParams(t)
        alphas, _ = sample_pd_batch(params, args.samples, args.seed, keep=keep)
        owner = np.repeat(np.arange(len(alphas)), alphas.shape[1])
        hist = empirical_density((alphas.ravel(), owner, len(alphas)), bins)
        for (a, b), est, se in zip(bins, hist.estimate, hist.stderr):
            u = 0.5 * (b - a) * nodes + 0.5 * (b + a)
            ref = 0.5 * sum(wi * watterson_rho([ui], params) for wi, ui in zip(weights, u))
            w.writerow([t, f"{a:.3f}", f"{b:.3f}", f"{est:.5f}", f"{se:.5f}", f"{ref:.5f}",
                        f"{(est - ref) / se:+.2f}"])


if __name__ == "__main__":
    main()
