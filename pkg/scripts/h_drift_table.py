"""Drift between the modulus integral and its closed form, over a range of radii."""

import argparse

import numpy as np

from cuspmap.cusp import load_domain
from cuspmap.verify import verify_h_quadrature


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--domain", default="example_2_6")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--precision", type=int, default=None, help="mpmath digits (default: automatic)")
    args = p.parse_args()

    res = verify_h_quadrature(load_domain(args.domain), list(np.geomspace(1e-2, 1e-4, 9)), args.tol,
                              precision=args.precision)
    print("t,h_closed,h_quad,drift")
    for t, closed, quad, _, _, drift in res.rows:
        print(f"{t:.3e},{closed:.17g},{quad:.17g},{drift:.17g}")
    print(res.summary)


if __name__ == "__main__":
    main()
