import json
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from cuspmap import series as S
from cuspmap.cusp import (ArcPair, DomainError, NormalizedCusp, compute_tuple, example_2_6, is_small_perturbation,
                          load_domain, normalize, parse_domain, sqrt_transform, tangent_circles, tangent_circles_sqrt)
from cuspmap.series import TruncatedSeries

from helpers import cusps

T = TruncatedSeries.from_coeffs
tsym = sp.symbols("t")
TR = 12


def taylor(expr, n=TR):
    poly = sp.series(expr, tsym, 0, n).removeO()
    return T([float(poly.coeff(tsym, j)) for j in range(n)])


def arcs(gamma_re, gamma_im, gt_re=None, gt_im=None, eps=0.5):
    gt_re = S.identity(TR) if gt_re is None else gt_re
    gt_im = T([0.0] * TR) if gt_im is None else gt_im
    return ArcPair(gamma_re, gamma_im, gt_re, gt_im, eps)


def angle_of(cusp, n):
    return np.asarray(cusp.angle.coeffs[:n], dtype=float)


# normalize ------------------------------------------------------------------------


def test_normalize_parabola():
    cusp = normalize(arcs(S.identity(TR), T([0, 0, 1] + [0] * (TR - 3))))
    assert angle_of(cusp, 4) == pytest.approx([0, 1, 0, -5 / 6], abs=1e-14)
    assert not cusp.relabeled


def test_normalize_parabola_against_sympy_chain():
    # |gamma| = t sqrt(1 + t^2), eta = arctan(t); angle = eta(|gamma|^{-1}(s))
    mod = sp.series(tsym * sp.sqrt(1 + tsym**2), tsym, 0, TR).removeO()
    cusp = normalize(arcs(S.identity(TR), T([0, 0, 1] + [0] * (TR - 3))))
    rev = S.revert(T([float(mod.coeff(tsym, j)) for j in range(TR)]))
    ref = S.compose(S.arctan_series(TR), rev)
    n = min(cusp.angle.trunc, ref.trunc)
    assert angle_of(cusp, n) == pytest.approx(ref.coeffs[:n], abs=1e-12)


def test_normalize_polar_form_round_trip():
    phase = tsym - tsym**2
    cusp = normalize(arcs(taylor(tsym * sp.cos(phase)), taylor(tsym * sp.sin(phase))))
    n = cusp.angle.trunc
    expected = np.zeros(n)
    expected[1], expected[2] = 1, -1
    assert angle_of(cusp, n) == pytest.approx(expected, abs=1e-12)


def test_normalize_reparameterized_identity_arc():
    base = normalize(arcs(S.identity(TR), T([0, 0, 1] + [0] * (TR - 3))))
    twice = normalize(arcs(S.identity(TR), T([0, 0, 1] + [0] * (TR - 3)), gt_re=S.scalar_mul(S.identity(TR), 2.0)))
    n = min(base.angle.trunc, twice.angle.trunc)
    assert angle_of(twice, n) == pytest.approx(angle_of(base, n), abs=1e-12)


def test_normalize_relabels_negative_angle():
    cusp = normalize(arcs(S.identity(TR), T([0, 0, -1] + [0] * (TR - 3))))
    assert cusp.relabeled
    assert cusp.a > 0


@pytest.mark.parametrize("gamma_re,gamma_im,msg", [
    ([0, 1, 0], [0, 1, 0], "corner"),
    ([0, 0, 1], [0, 0, 0], "regular"),
    ([1, 1, 0], [0, 0, 1], "must be 0"),
    ([0, 1, 0, 0], [0, 0, 0, 0], "no cusp"),
    ([0, -1, 0], [0, 0, 1], "opposite"),
])
def test_normalize_errors(gamma_re, gamma_im, msg):
    n = len(gamma_re)
    with pytest.raises(DomainError, match=msg):
        normalize(ArcPair(T(gamma_re), T(gamma_im), S.identity(n), T([0.0] * n), 0.5))


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 2.0), st.floats(-1, 1), st.floats(-1, 1), st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
def test_normalize_parameterization_invariance(alpha, beta, gamma3, p2, p3):
    g_re = S.identity(TR)
    g_im = T([0, 0, alpha, beta, gamma3] + [0] * (TR - 5))
    p = T([0, 1, p2, p3] + [0] * (TR - 4))
    ref = normalize(arcs(g_re, g_im))
    moved = normalize(arcs(S.compose(g_re, p), S.compose(g_im, p)))
    n = min(ref.angle.trunc, moved.angle.trunc)
    assert angle_of(moved, n) == pytest.approx(angle_of(ref, n), abs=1e-10)


def test_normalize_invariant_under_gammatilde_reparameterization():
    g_im = T([0, 0, 1, 0.3] + [0] * (TR - 4))
    ref = normalize(arcs(S.identity(TR), g_im))
    moved = normalize(arcs(S.identity(TR), g_im, gt_re=T([0, 1, 0.4, -0.2] + [0] * (TR - 4))))
    n = min(ref.angle.trunc, moved.angle.trunc)
    assert angle_of(moved, n) == pytest.approx(angle_of(ref, n), abs=1e-10)


# NormalizedCusp invariants --------------------------------------------------------------


@pytest.mark.parametrize("coeffs,radius", [
    ([0, 0, 0], 0.5),
    ([1, 1, 0], 0.5),
    ([0, -1, 0], 0.5),
    ([0, 1, -1], 1.5),
    ([0, 1, 0], 0.0),
])
def test_cusp_invariants_enforced(coeffs, radius):
    with pytest.raises(DomainError):
        NormalizedCusp(T(coeffs), radius)


# tuples -------------------------------------------------------------------------------------


def test_tuple_example_2_6():
    tup = compute_tuple(example_2_6())
    assert (tup.N, tup.a) == (1, 1.0)
    assert tup.b[:2] == pytest.approx([1, 1], abs=1e-15)
    assert tup.c[0] == pytest.approx(-math.pi, abs=1e-15)
    assert tup.sigma == pytest.approx(math.pi, abs=1e-15)


@pytest.mark.parametrize("a,N", [(2.0, 3), (0.7, 1), (1.3, 2)])
def test_tuple_small_perturbation(a, N):
    c = np.zeros(16)
    c[N] = a
    c[2 * N + 1] = 0.9
    tup = compute_tuple(NormalizedCusp(T(c), 0.3))
    assert tup.c[0] == pytest.approx(-math.pi / (a * N), rel=1e-15)
    assert all(x == 0 for x in tup.c[1:])
    assert tup.sigma == 0


@pytest.mark.parametrize("r", [0.25, 0.5, 1.0])
def test_tuple_tangent_circles(r):
    tup = compute_tuple(tangent_circles(r))
    assert tup.a == pytest.approx(1 / (2 * r), rel=1e-15)
    assert tup.b[:2] == pytest.approx([2 * r, 0], abs=1e-15)
    assert tup.c[0] == pytest.approx(-2 * math.pi * r, rel=1e-15)
    assert tup.sigma == 0


def test_tuple_M_bounds():
    cusp = example_2_6()
    assert compute_tuple(cusp).M == 8
    assert compute_tuple(cusp, 14).M == 14
    with pytest.raises(ValueError):
        compute_tuple(cusp, 15)


@settings(max_examples=40, deadline=None)
@given(cusps())
def test_tuple_consistency(cusp):
    tup = compute_tuple(cusp)
    assert tup.b[0] == pytest.approx(1 / tup.a, rel=1e-15)
    for j in range(tup.N):
        assert (j - tup.N) * tup.c[j] == pytest.approx(math.pi * tup.b[j], rel=1e-12, abs=1e-12)
    assert tup.sigma == pytest.approx(math.pi * tup.b[tup.N], rel=1e-12, abs=1e-12)


# square-root transform -----------------------------------------------------------------


def test_sqrt_transform_examples():
    sq = sqrt_transform(example_2_6(radius=0.64))
    assert angle_of(sq, 5) == pytest.approx([0, 0, 0.5, 0, -0.5])
    assert sq.radius == pytest.approx(0.8)
    lin = sqrt_transform(NormalizedCusp(T([0, 1.4, 0, 0]), 0.5))
    assert lin.N == 2 and lin.a == pytest.approx(0.7)
    t0, t1 = compute_tuple(example_2_6()), compute_tuple(sqrt_transform(example_2_6()))
    assert t1.b[:3] == pytest.approx([2 * t0.b[0], 0, 2 * t0.b[1]], abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(cusps())
def test_sqrt_transform_tuple_law(cusp):
    tup = compute_tuple(cusp)
    sq = compute_tuple(sqrt_transform(cusp), 2 * tup.M)
    assert sq.N == 2 * tup.N
    for j in range(tup.M + 1):
        assert sq.b[2 * j] == pytest.approx(2 * tup.b[j], rel=1e-10, abs=1e-10)
        if 2 * j + 1 <= sq.M:
            assert abs(sq.b[2 * j + 1]) < 1e-10
    for j in range(tup.N):
        assert sq.c[2 * j] == pytest.approx(tup.c[j], rel=1e-10, abs=1e-10)
        assert abs(sq.c[2 * j + 1]) < 1e-10
    assert sq.sigma == pytest.approx(2 * tup.sigma, rel=1e-10, abs=1e-10)


def test_tangent_circles_sqrt_angle():
    r = 0.5
    sq = tangent_circles_sqrt(r)
    assert sq.N == 2
    ref = sqrt_transform(tangent_circles(r, 8))
    assert np.array_equal(sq.angle.coeffs, ref.angle.coeffs[:16])
    s = np.linspace(0.02, 0.2, 7)
    assert sq.angle_at(s) == pytest.approx(0.5 * np.arcsin(s**2 / (2 * r)), abs=1e-12)


# small perturbation ------------------------------------------------------------------------


def test_small_perturbation_examples():
    assert not is_small_perturbation(example_2_6())
    c = np.zeros(12)
    c[3], c[8] = 2, 1
    assert is_small_perturbation(NormalizedCusp(T(c), 0.3))
    c = np.zeros(12)
    c[3], c[6] = 1, 1
    assert not is_small_perturbation(NormalizedCusp(T(c), 0.3))
    with pytest.raises(ValueError):
        is_small_perturbation(NormalizedCusp(T([0, 0, 1, 0]), 0.3))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.floats(0.3, 3.0), st.lists(st.floats(-1, 1), min_size=4, max_size=4))
def test_small_perturbation_law(N, a, tail):
    c = np.zeros(16)
    c[N] = a
    c[2 * N + 1: 2 * N + 5] = tail
    cusp = NormalizedCusp(T(c), 0.2)
    assert is_small_perturbation(cusp)
    tup = compute_tuple(cusp)
    assert all(abs(b) < 1e-12 for b in tup.b[1:N + 1])
    assert all(x == 0 for x in tup.c[1:]) and tup.sigma == 0


# domain specs --------------------------------------------------------------------------------


def test_parse_domain_kinds():
    spec = parse_domain({"kind": "angle_function", "angle": {"min_exponent": 0, "coeffs": [0, 2], "trunc": 8},
                         "radius": 0.3})
    assert spec.cusp.N == 1 and spec.cusp.angle.trunc == 8
    spec = parse_domain({"kind": "arc_pair", "gamma_re": {"coeffs": [0, 1]}, "gamma_im": {"coeffs": [0, 0, 1]},
                         "gammatilde_re": {"coeffs": [0, 1]}, "gammatilde_im": {"coeffs": [0]}, "epsilon": 0.5})
    assert spec.cusp.angle.coeffs[3] == pytest.approx(-5 / 6)
    spec = parse_domain({"kind": "preset", "name": "tangent_circles", "r": 0.25})
    assert spec.preset == "tangent_circles" and spec.params == {"r": 0.25}
    assert parse_domain({"name": "example_2_6"}).cusp.radius == 0.8


def test_load_domain_shorthand_and_file(tmp_path):
    assert load_domain("example_2_6:0.5").cusp.radius == 0.5
    assert load_domain("tangent_circles:0.25").params["r"] == 0.25
    path = tmp_path / "d.json"
    path.write_text(json.dumps({"kind": "angle_function", "angle": {"coeffs": [0, 0, 0, 2]}, "radius": 0.4}))
    assert load_domain(str(path)).cusp.N == 3


@pytest.mark.parametrize("obj,msg", [
    ([], "JSON object"),
    ({"kind": "circle"}, "unknown kind"),
    ({"kind": "angle_function", "radius": 1}, "missing field 'angle'"),
    ({"kind": "angle_function", "angle": {"coeffs": [0, 1]}, "radius": "x"}, "real number"),
    ({"kind": "angle_function", "angle": {"coeffs": [0, 1], "min_exponent": -1}, "radius": 1}, "power series"),
    ({"kind": "preset", "name": "moon"}, "unknown preset"),
    ({"kind": "preset", "name": "example_2_6", "r": 2}, "no parameters"),
])
def test_parse_domain_errors(obj, msg):
    with pytest.raises(DomainError, match=msg):
        parse_domain(obj)


def test_load_domain_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "preset",\n "name": }')
    with pytest.raises(DomainError, match="line 2"):
        load_domain(str(bad))
    with pytest.raises(DomainError, match="neither"):
        load_domain("no_such_thing")
    with pytest.raises(DomainError, match="not a number"):
        load_domain("tangent_circles:abc")
