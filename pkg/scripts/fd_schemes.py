"""Literal real-axis finite differences against the rotated stencil, for F and G."""

import cmath

from cuspmap import asymptotics as A
from cuspmap.cusp import compute_tuple, example_2_6
from cuspmap.oracles import finite_difference
from cuspmap.verify import f_stencil_step


def main():
    cusp = example_2_6()
    tup = compute_tuple(cusp)
    z = complex(cusp.midray(0.2))
    F = lambda w: A.eval_F(tup, w)  # noqa: E731
    G = lambda w: A.eval_G(1, 1.0, w, branch="principal")  # noqa: E731
    print("function,k,literal_rel_err,rotated_rel_err")
    for name, f, exact, zz, h in (("F", F, lambda k: A.eval_F_derivative(tup, k, z), z, f_stencil_step(tup, z)),
                                  ("G", G, lambda k: A.eval_G_derivative(1, 1.0, k, 0.1j), 0.1j, None)):
        for k in range(1, 6):
            ref = exact(k)
            lit = finite_difference(f, zz, k, h=1e-2 * abs(zz), halvings=4, directions=1)
            rot = finite_difference(f, zz, k, h=h)
            print(f"{name},{k},{abs(lit / ref - 1):.3e},{abs(rot / ref - 1):.3e}")


if __name__ == "__main__":
    main()
