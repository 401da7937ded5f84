"""Zipper vs closed-form map on tangent circles as the node count grows."""

import argparse
import time

import numpy as np

from cuspmap.cusp import load_domain
from cuspmap.oracles import catalog_map
from cuspmap.verify import build_zipper


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--nodes", type=int, nargs="+", default=[256, 512, 1024, 2048, 4096])
    args = p.parse_args()

    spec = load_domain(f"tangent_circles:{args.r}")
    ref = catalog_map("tangent_circles", args.r)
    z = ref.cusp.midray(np.linspace(0.1, 0.3, 10) * args.r / 0.5)
    print("nodes,max_rel_dev,build_seconds")
    for n in args.nodes:
        t0 = time.perf_counter()
        orc = build_zipper(spec, nodes=n)
        dt = time.perf_counter() - t0
        dev = np.max(np.abs(orc.forward(z) / ref.forward(z) - 1))
        print(f"{n},{dev:.3e},{dt:.2f}")


if __name__ == "__main__":
    main()
