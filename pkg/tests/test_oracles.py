import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cuspmap import asymptotics as A
from cuspmap import series as S
from cuspmap.cusp import NormalizedCusp, compute_tuple, example_2_6, load_domain, parse_domain
from cuspmap.oracles import QuadratureError, StencilError, adaptive_integrate, catalog_map, finite_difference, quadrature_h
from cuspmap.verify import verify_catalog, verify_finite_diff, verify_h_quadrature


def monomial_cusp(a, N, radius=0.9):
    return NormalizedCusp(S.TruncatedSeries.monomial(a, N, 12), radius)


# quadrature -------------------------------------------------------------------------------


def test_adaptive_integrate_basics():
    assert adaptive_integrate(math.sin, 0, math.pi) == pytest.approx(2.0, abs=1e-12)
    assert adaptive_integrate(lambda x: math.sqrt(x), 0, 1, tol=1e-12) == pytest.approx(2 / 3, abs=1e-11)
    with pytest.raises(QuadratureError):
        adaptive_integrate(lambda x: 1 / x if x else 0.0, 0, 1, max_depth=8)


def test_quadrature_identity_angle():
    assert quadrature_h(monomial_cusp(1.0, 1), 0.1, 0.5) == pytest.approx(-8 * math.pi, abs=1e-10)


@pytest.mark.parametrize("a,N", [(1.0, 1), (2.0, 3), (0.5, 2)])
def test_quadrature_monomial(a, N):
    r, d = 0.05, 0.3
    exact = -(math.pi / (a * N)) * (r**-N - d**-N)
    assert quadrature_h(monomial_cusp(a, N), r, d) == pytest.approx(exact, rel=1e-12)


def test_quadrature_matches_closed_form_example_2_6():
    # with 40 known terms the neglected tail sum_{j>M} b_j delta^(j-1)/(j-1) is below 1e-20
    cusp = example_2_6(trunc=40)
    tup = compute_tuple(cusp, 38)
    assert quadrature_h(cusp, 0.01, 0.25) == pytest.approx(A.h_closed_form(tup, 0.01, 0.25), abs=1e-9)


def test_quadrature_drift_is_constant_example_2_6():
    cusp = example_2_6()
    tup = compute_tuple(cusp, 14)
    drift = [quadrature_h(cusp, r, 0.25) - A.h_closed_form(tup, r, 0.25) for r in (1e-2, 3e-3, 1e-3, 3e-4, 1e-4)]
    assert max(drift) - min(drift) < 1e-8


def test_quadrature_precision_mode():
    val = quadrature_h(monomial_cusp(0.5, 3), 1e-3, 0.25, precision=30)
    exact = -(math.pi / 1.5) * (1e9 - 0.25**-3)
    assert float(val) == pytest.approx(exact, rel=1e-15)


def test_quadrature_interval_checks():
    with pytest.raises(ValueError):
        quadrature_h(example_2_6(), 0.3, 0.2)
    with pytest.raises(ValueError):
        quadrature_h(example_2_6(), 0.1, 0.9)


# catalog ------------------------------------------------------------------------------------


@pytest.mark.parametrize("r", [0.25, 0.5, 1.0])
def test_catalog_boundary_images(r):
    orc = catalog_map("tangent_circles", r)
    t = np.linspace(0.05, 0.9, 100) * r
    real_side = orc.forward(t)
    assert np.all(np.abs(real_side.imag) < 1e-10) and np.all(real_side.real > 0)
    # circle |z - i r| = r, traversed near 0
    phi = np.linspace(0.05, 1.5, 100)
    circle = 1j * r + r * np.exp(1j * (-math.pi / 2 + phi))
    arc_side = orc.forward(circle)
    assert np.all(np.abs(arc_side.imag) < 1e-10) and np.all(arc_side.real < 0)


def test_catalog_sqrt_boundary_images():
    orc = catalog_map("tangent_circles_sqrt", 0.5)
    t = np.linspace(0.05, 0.6, 100)
    assert np.all(np.abs(orc.forward(t).imag) < 1e-10)
    edge = t * np.exp(1j * orc.cusp.angle_at(t))
    # on the truncated angle function the image is real to the series truncation error
    assert np.all(orc.forward(edge).real <= 0)


@pytest.mark.parametrize("name", ["tangent_circles", "tangent_circles_sqrt"])
@pytest.mark.parametrize("r", [0.25, 0.5, 1.0])
def test_catalog_consistency(name, r):
    orc = catalog_map(name, r)
    tup = compute_tuple(orc.cusp)
    rng = np.random.default_rng(7)
    R = orc.cusp.radius
    for t, frac in zip(rng.uniform(0.05, 0.9, 20) * R, rng.uniform(0.05, 0.95, 20)):
        z = complex(orc.cusp.midray(t, frac))
        q = cmath.exp(A.eval_logF(tup, z) - complex(orc.log_forward(z)))
        assert abs(q - 1) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["tangent_circles", "tangent_circles_sqrt"]), st.floats(0.2, 0.8), st.floats(0.1, 0.9))
def test_catalog_round_trip_and_half_plane(name, t, frac):
    orc = catalog_map(name, 0.5)
    z = complex(orc.cusp.midray(t * orc.cusp.radius, frac))
    w = orc.forward(z)
    assert w.imag > 0
    assert abs(orc.inverse(w) - z) < 1e-12 * abs(z) * max(1.0, abs(math.log(abs(w))))


def test_catalog_unknown():
    with pytest.raises(ValueError):
        catalog_map("moon")


# finite differences -------------------------------------------------------------------------


def test_finite_difference_examples():
    assert finite_difference(lambda z: z * z, 1.0, 1) == pytest.approx(2.0, rel=1e-12)
    f = lambda z: cmath.exp(-math.pi / z)  # noqa: E731
    assert finite_difference(f, 0.5, 1) == pytest.approx(math.pi / 0.25 * math.exp(-2 * math.pi), rel=1e-10)
    assert finite_difference(lambda z: z**3, 1.0, 2) == pytest.approx(6.0, rel=1e-12)
    assert finite_difference(lambda z: z**3, 1.0, 0) == 1.0


def test_literal_real_axis_scheme_is_fine_for_low_order():
    f = lambda z: cmath.exp(-math.pi / z)  # noqa: E731
    exact = math.pi / 0.25 * math.exp(-2 * math.pi)
    got = finite_difference(f, 0.5, 1, h=1e-2 * 0.5, halvings=4, directions=1)
    assert got == pytest.approx(exact, rel=1e-9)


def test_stencil_errors():
    with pytest.raises(StencilError):
        finite_difference(lambda z: z, 0.1j, 2, inside=lambda z: z.imag > 0.09)
    with pytest.raises(StencilError):
        finite_difference(lambda w: A.eval_G(1, 1.0, w, branch="principal"), 0.1 * cmath.exp(0.01j), 3)


# verification pipelines ------------------------------------------------------------------------


def test_verify_h_quadrature_passes():
    res = verify_h_quadrature(load_domain("example_2_6"), [1e-2, 1e-3, 1e-4], 1e-8)
    assert res.passed and res.extras["precision"] is None
    assert len(res.rows) == 3 and all(len(r) == 6 for r in res.rows)


def test_verify_h_quadrature_switches_precision():
    spec = load_domain("example_2_6")
    cube = {"kind": "angle_function", "angle": {"coeffs": [0, 0, 0, 0.5]}, "radius": 0.6}
    res = verify_h_quadrature(parse_domain(cube), [1e-2, 1e-4], 1e-8)
    assert res.passed and res.extras["precision"] == 30
    assert verify_h_quadrature(spec, [1e-2], 1e-8).passed


def test_verify_catalog_passes():
    res = verify_catalog(load_domain("tangent_circles:0.5"), np.linspace(0.05, 0.45, 5), 0.5, 1e-12)
    assert res.passed
    with pytest.raises(ValueError):
        verify_catalog(load_domain("example_2_6"), [0.1], 0.5, 1e-12)


@pytest.mark.parametrize("what,k", [("F", 1), ("F", 5), ("G", 5)])
def test_verify_finite_diff_passes(what, k):
    res = verify_finite_diff(load_domain("example_2_6"), [0.2] if what == "F" else [0.1], 0.5, 1e-6, k, what)
    assert res.passed, res.summary

