"""Tabulate rho_1 on a grid with the integral route, plus the corrected series where it converges."""
import argparse
import csv
import sys

import numpy as np

from zmeasures.density import rho1
from zmeasures.special import DomainError
from zmeasures.zmeasure import ZParams


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--z", default="1/2")
    ap.add_argument("--zp", default="1/2")
    ap.add_argument("--step", type=float, default=0.05)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    params = ZParams(args.z, args.zp)
    half = np.arange(args.step, 1.0, args.step)
    xs = np.concatenate([-half[::-1], half])
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(out)
    w.writerow(["x", "rho1_integral", "rho1_corrected_series", "abs_x_rho1"])
    for x in map(float, xs):
        ref = rho1(x, params).value
        try:
            series = repr(rho1(x, params, "lauricella_corrected").value)
        except DomainError:
            series = ""
        w.writerow([f"{x:.4f}", repr(ref), series, repr(abs(x) * ref)])
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
