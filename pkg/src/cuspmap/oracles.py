"""Independent reference computations: adaptive quadrature of the modulus
integral, closed-form mapping functions, and numerical differentiation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import mpmath
import numpy as np

from .cusp import NormalizedCusp, tangent_circles, tangent_circles_sqrt


class QuadratureError(RuntimeError):
    pass


class StencilError(ValueError):
    """A finite-difference stencil point falls outside the function's domain."""


# Adaptive quadrature ----------------------------------------------------------


@lru_cache(maxsize=None)
def _cc_rule(n: int, precision: int | None):
    """Clenshaw-Curtis nodes/weights on [-1, 1] with n+1 points (n even)."""
    if precision is not None:
        with mpmath.workdps(precision):
            return _cc_build(n, mpmath.cos, mpmath.pi, mpmath.mpf(1))
    return _cc_build(n, math.cos, math.pi, 1.0)


def _cc_build(n, cos, pi, one):
    nodes, weights = [], []
    for j in range(n + 1):
        theta = j * pi / n
        acc = one
        for k in range(1, n // 2 + 1):
            bk = one if 2 * k == n else 2 * one
            acc -= bk * cos(2 * k * theta) / (4 * k * k - 1)
        cj = one if j in (0, n) else 2 * one
        nodes.append(cos(theta))
        weights.append(cj * acc / n)
    return tuple(nodes), tuple(weights)


def adaptive_integrate(f: Callable, a, b, tol: float = 1e-10, max_depth: int = 60, precision: int | None = None):
    """Integrate ``f`` over ``[a, b]`` by interval halving.

    Each panel is integrated with the 17-point Clenshaw-Curtis rule; the
    embedded 9-point rule (every other node) gives the error estimate.  A panel
    is accepted once its estimate is below its share of ``tol``.
    """
    if precision is not None:
        with mpmath.workdps(precision):
            return _adaptive(f, mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(tol), max_depth, precision)
    return _adaptive(f, a, b, tol, max_depth, None)


def _adaptive(f, a, b, tol, max_depth, precision):
    nodes, w_fine = _cc_rule(16, precision)
    _, w_coarse = _cc_rule(8, precision)
    total_width = b - a
    result = 0
    stack = [(a, b, 0)]
    while stack:
        lo, hi, depth = stack.pop()
        mid, half = (lo + hi) / 2, (hi - lo) / 2
        vals = [f(mid + half * x) for x in nodes]
        fine = half * sum(w * v for w, v in zip(w_fine, vals))
        coarse = half * sum(w * v for w, v in zip(w_coarse, vals[::2]))
        err = abs(fine - coarse)
        if err <= tol * (hi - lo) / total_width:
            result += fine
        elif depth >= max_depth:
            raise QuadratureError(f"adaptive refinement did not converge on [{lo}, {hi}] (depth {depth})")
        else:
            stack.append((mid, hi, depth + 1))
            stack.append((lo, mid, depth + 1))
    return result


def quadrature_h(cusp: NormalizedCusp, r: float, delta: float, tol: float = 1e-10, precision: int | None = None):
    """``-pi * integral_r^delta d rho / (rho * angle(rho))`` by adaptive quadrature.

    The integrand is evaluated from the angle series itself (never from its
    reciprocal), in the variable ``u = log rho``.
    """
    if not 0 < r < delta < cusp.radius:
        raise ValueError("need 0 < r < delta < radius")
    coeffs = [float(c) for c in cusp.angle.coeffs]
    if precision is None:
        def integrand(u):
            x, acc = math.exp(u), 0.0
            for c in reversed(coeffs):
                acc = acc * x + c
            return -math.pi / acc

        return adaptive_integrate(integrand, math.log(r), math.log(delta), tol=tol)

    with mpmath.workdps(precision):
        mcoeffs = [mpmath.mpf(c) for c in coeffs]

        def integrand(u):
            x, acc = mpmath.exp(u), mpmath.mpf(0)
            for c in reversed(mcoeffs):
                acc = acc * x + c
            return -mpmath.pi / acc

        return adaptive_integrate(integrand, mpmath.log(r), mpmath.log(delta), tol=tol, precision=precision)


# Conformal oracles -------------------------------------------------------------


@dataclass(frozen=True)
class ConformalOracle:
    """Reference mapping function ``forward: domain -> H`` and its inverse.

    ``log_forward`` (closed forms only) returns ``log Phi`` without underflow.
    """

    kind: str
    forward: Callable
    inverse: Callable
    cusp: NormalizedCusp | None
    meta: dict = field(default_factory=dict)
    log_forward: Callable | None = None


def catalog_map(name: str, r: float = 0.5) -> ConformalOracle:
    """Domains with elementary mapping functions.

    ``tangent_circles``: ``z -> 1/z`` turns the region into a horizontal strip
    of height ``1/(2r)``, and ``w -> exp(-2 pi r w)`` opens the strip, so
    ``Phi(z) = exp(-2 pi r / z)``.  ``tangent_circles_sqrt`` is its pull-back
    under ``z -> z**2``.
    """
    if name == "tangent_circles":
        def forward(z):
            return np.exp(-2 * np.pi * r / np.asarray(z, dtype=complex))

        def inverse(w):
            return -2 * np.pi * r / np.log(np.asarray(w, dtype=complex))

        def log_forward(z):
            return -2 * np.pi * r / np.asarray(z, dtype=complex)

        return ConformalOracle("closed-form", forward, inverse, tangent_circles(r), {"name": name, "r": r}, log_forward)
    if name == "tangent_circles_sqrt":
        def forward(z):
            return np.exp(-2 * np.pi * r / np.asarray(z, dtype=complex) ** 2)

        def inverse(w):
            return np.sqrt(-2 * np.pi * r / np.log(np.asarray(w, dtype=complex)))

        def log_forward(z):
            return -2 * np.pi * r / np.asarray(z, dtype=complex) ** 2

        return ConformalOracle("closed-form", forward, inverse, tangent_circles_sqrt(r), {"name": name, "r": r},
                               log_forward)
    raise ValueError(f"unknown catalog preset {name!r}; choose tangent_circles or tangent_circles_sqrt")


# Numerical differentiation -------------------------------------------------------


def finite_difference(f: Callable, z: complex, k: int, h: float | None = None, halvings: int = 1,
                      directions: int = 8, inside: Callable | None = None) -> complex:
    """k-th derivative of a holomorphic ``f`` at ``z`` from central differences.

    The central k-th difference is taken along ``directions`` equally spaced
    directions ``exp(i pi d / directions)`` and averaged, which cancels the
    truncation terms of order below ``2*directions``; Richardson extrapolation
    over ``halvings`` step halvings removes the next ones.  ``directions=1``,
    ``h=1e-2*|z|``, ``halvings=4`` is the textbook real-axis scheme (roundoff
    limited for k >= 4).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    z = complex(z)
    if k == 0:
        return complex(f(z))
    if h is None:
        h = 0.1 * abs(z)
    rot = [cmath.exp(1j * math.pi * d / directions) for d in range(directions)]
    offsets = [(k / 2 - m, (-1) ** m * math.comb(k, m)) for m in range(k + 1)]

    def central(step):
        acc = 0
        for w in rot:
            hw = step * w
            pts = [(z + off * hw, coef) for off, coef in offsets]
            if inside is not None and not all(inside(p) for p, _ in pts):
                raise StencilError(f"stencil of radius {k * step / 2:g} around {z} leaves the domain")
            try:
                acc += sum(coef * f(p) for p, coef in pts) / hw**k
            except ValueError as exc:
                raise StencilError(f"stencil around {z} left the domain: {exc}") from exc
        return acc / directions

    table = [central(h / 2**i) for i in range(halvings + 1)]
    for j in range(1, halvings + 1):
        p = 2 * directions * j if directions > 1 else 2 * j
        table = [(2**p * table[i + 1] - table[i]) / (2**p - 1) for i in range(len(table) - 1)]
    return complex(table[0])
