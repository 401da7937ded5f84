"""example_2_6 zipper: mid-ray argument and modulus ratio as the cut radius R varies."""

import math

import numpy as np

from cuspmap import asymptotics as A
from cuspmap.cusp import compute_tuple, load_domain
from cuspmap.verify import build_zipper


def main():
    ts = np.linspace(0.1, 0.3, 10)
    print("R,max_arg_dev,ratio_variation,hcorr_variation")
    for R in (0.5, 0.6, 0.7, 0.8, 0.9):
        spec = load_domain(f"example_2_6:{R}")
        cusp = spec.cusp
        w = build_zipper(spec, nodes=2048).forward(cusp.midray(ts))
        tup, full = compute_tuple(cusp), compute_tuple(cusp, 14)
        ratio = np.abs(w) / np.array([A.modulus_asymptote(tup, t) for t in ts])
        hcorr = np.abs(w) / np.exp([A.h_closed_form(full, t, 0.5) for t in ts])
        arg = np.max(np.abs(np.angle(w) - math.pi / 2))
        print(f"{R},{arg:.3e},{ratio.max() / ratio.min() - 1:.3f},{hcorr.max() / hcorr.min() - 1:.3f}")


if __name__ == "__main__":
    main()
