"""Verification pipelines: asymptotic evaluators against independent oracles.

Each pipeline returns a :class:`VerifyResult` holding one row per sample
point (``t, asymptotic_value, oracle_value, ratio_abs, ratio_arg, drift``)
and a pass/fail decision with the measured extremes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics as A
from .cusp import DomainSpec, compute_tuple
from .oracles import catalog_map, finite_difference, quadrature_h
from .zipper import sample_boundary, zipper_map

COLUMNS = ("t", "asymptotic_value", "oracle_value", "ratio_abs", "ratio_arg", "drift")

DEFAULT_TOL = {"h-quadrature": 1e-8, "catalog": 1e-12, "zipper": 0.10, "finite-diff": 1e-6}


@dataclass
class VerifyResult:
    oracle: str
    rows: list
    passed: bool
    summary: str
    extras: dict = field(default_factory=dict)


def _wrap(x: float) -> float:
    return math.remainder(x, 2 * math.pi)


def verify_h_quadrature(spec: DomainSpec, ts, tol: float, delta: float | None = None,
                        precision: int | None = None) -> VerifyResult:
    """Drift ``quadrature_h - h_closed_form`` must be constant across ``ts``."""
    cusp = spec.cusp
    tup = compute_tuple(cusp, len(cusp.angle.coeffs) - cusp.N - 1)
    delta = min(0.25, 0.5 * cusp.radius) if delta is None else delta
    if precision is None:
        scale = abs(A.h_closed_form(tup, min(ts), delta))
        precision = 30 if scale * 2.2e-16 > tol / 10 else None
    rows = []
    for t in ts:
        closed = A.h_closed_form(tup, t, delta, precision=precision)
        quad = quadrature_h(cusp, t, delta, precision=precision)
        drift = quad - closed
        rows.append((t, float(closed), float(quad), float(quad / closed), 0.0, float(drift)))
    drifts = [r[5] for r in rows]
    spread = max(drifts) - min(drifts)
    passed = spread <= tol
    summary = (f"{'PASS' if passed else 'FAIL'} h-quadrature: drift spread {spread:.3e} (tol {tol:g}), "
               f"drift in [{min(drifts):.17g}, {max(drifts):.17g}], precision={precision or 'double'}")
    return VerifyResult("h-quadrature", rows, passed, summary, {"spread": spread, "precision": precision})


def _catalog_for(spec: DomainSpec):
    if spec.preset not in ("tangent_circles", "tangent_circles_sqrt"):
        raise ValueError("the catalog oracle needs a tangent_circles or tangent_circles_sqrt preset domain")
    return catalog_map(spec.preset, spec.params.get("r", 0.5))


def verify_catalog(spec: DomainSpec, ts, ray: float, tol: float) -> VerifyResult:
    """Pipeline ``angle -> tuple -> eval_F`` against the closed-form map."""
    oracle = _catalog_for(spec)
    cusp = spec.cusp
    tup = compute_tuple(cusp)
    rows, devs = [], []
    for t in ts:
        z = complex(cusp.midray(t, ray))
        log_asym = A.eval_logF(tup, z)
        log_ref = complex(oracle.log_forward(z))
        q = cmath.exp(log_asym - log_ref)
        dev = abs(q - 1)
        devs.append(dev)
        rows.append((t, math.exp(log_asym.real), math.exp(log_ref.real), abs(q), cmath.phase(q), dev))
    worst = max(devs)
    passed = worst <= tol
    summary = f"{'PASS' if passed else 'FAIL'} catalog: max |F/Phi_ref - 1| = {worst:.3e} (tol {tol:g})"
    return VerifyResult("catalog", rows, passed, summary, {"max_dev": worst})


def build_zipper(spec: DomainSpec, nodes: int = 4096, clustering: float = 0.85):
    """Zipper oracle for the domain; catalog domains are normalized to match Phi_ref at the marked point."""
    boundary = sample_boundary(spec.cusp, nodes, clustering)
    target = 1j
    if spec.preset in ("tangent_circles", "tangent_circles_sqrt"):
        target = complex(_catalog_for(spec).forward(boundary.marked))
    return zipper_map(boundary, target=target)


def verify_zipper(spec: DomainSpec, ts, ray: float, tol: float, nodes: int = 4096, clustering: float = 0.85,
                  arg_tol: float = 0.05) -> VerifyResult:
    """Mid-ray checks of the numerical map.

    ``ratio_abs = |Phi_zipper| / modulus_asymptote``, its relative spread must
    stay below ``tol`` (the plateau); ``ratio_arg = arg Phi_zipper - pi*ray``
    must stay below ``arg_tol``.  ``drift`` is the ratio relative to the first
    row.
    """
    cusp = spec.cusp
    tup = compute_tuple(cusp)
    oracle = build_zipper(spec, nodes, clustering)
    z = np.array([complex(cusp.midray(t, ray)) for t in ts])
    phi = oracle.forward(z)
    rows = []
    for t, w in zip(ts, phi):
        asym = A.modulus_asymptote(tup, t)
        rows.append([t, asym, abs(w), abs(w) / asym, _wrap(cmath.phase(w) - math.pi * ray), 0.0])
    base = rows[0][3]
    for r in rows:
        r[5] = r[3] / base - 1
    ratios = [r[3] for r in rows]
    spread = max(ratios) / min(ratios) - 1
    arg_dev = max(abs(r[4]) for r in rows)
    passed = spread < tol and arg_dev < arg_tol
    summary = (f"{'PASS' if passed else 'FAIL'} zipper: modulus-ratio spread {spread:.3e} (tol {tol:g}), "
               f"max |arg - pi*ray| {arg_dev:.3e} (tol {arg_tol:g}), ratio in [{min(ratios):.6g}, {max(ratios):.6g}]")
    return VerifyResult("zipper", [tuple(r) for r in rows], passed, summary,
                        {"spread": spread, "arg_dev": arg_dev, "oracle": oracle})


def g_point(t: float, ray: float) -> complex:
    """Point ``t * exp(i pi ray)`` of the upper half-plane used for G samples."""
    return t * cmath.exp(1j * math.pi * ray)


def f_stencil_step(tup, z: complex) -> float:
    """Finite-difference step for ``F``: ``0.1|z|``, capped by the scale ``1/|H'(z)|`` on which ``F`` varies."""
    h1 = abs(A.faa_di_bruno(A.HFunction(tup), 1)(z))
    return min(0.1 * abs(z), 1.0 / h1)


def verify_finite_diff(spec: DomainSpec, ts, ray: float, tol: float, k: int, what: str = "F") -> VerifyResult:
    """Exact derivative expansions against rotated-stencil finite differences."""
    if k < 1:
        raise ValueError("--k must be >= 1 for the finite-difference oracle")
    cusp = spec.cusp
    tup = compute_tuple(cusp)
    rows, devs = [], []
    for t in ts:
        if what.startswith("G"):
            z = g_point(t, ray)
            exact = A.eval_G_derivative(tup.N, tup.a, k, z)
            fd = finite_difference(lambda w: A.eval_G(tup.N, tup.a, w, branch="principal"), z, k)
        else:
            z = complex(cusp.midray(t, ray))
            exact = A.eval_F_derivative(tup, k, z)
            fd = finite_difference(lambda w: A.eval_F(tup, w), z, k, h=f_stencil_step(tup, z))
        q = fd / exact
        dev = abs(q - 1)
        devs.append(dev)
        rows.append((t, abs(exact), abs(fd), abs(q), cmath.phase(q), dev))
    worst = max(devs)
    passed = worst <= tol
    summary = f"{'PASS' if passed else 'FAIL'} finite-diff ({what}, k={k}): max rel err {worst:.3e} (tol {tol:g})"
    return VerifyResult("finite-diff", rows, passed, summary, {"max_dev": worst})
