"""Cusp domains: reduction of two analytic arcs to an angle function, and the
invariants (order/coefficient of tangency, asymptotic tuple) read off from it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import series as S
from .series import INFINITE, TruncatedSeries

DEFAULT_TRUNC = 16
POSITIVITY_SAMPLES = 1024


class DomainError(ValueError):
    """Input does not describe an analytic cusp in the expected form."""


@dataclass(frozen=True)
class ArcPair:
    """Two arcs through 0, each given by the real/imaginary parts of its parameterization."""

    gamma_re: TruncatedSeries
    gamma_im: TruncatedSeries
    gammatilde_re: TruncatedSeries
    gammatilde_im: TruncatedSeries
    epsilon: float

    @property
    def gamma(self) -> TruncatedSeries:
        return _complexify(self.gamma_re, self.gamma_im)

    @property
    def gammatilde(self) -> TruncatedSeries:
        return _complexify(self.gammatilde_re, self.gammatilde_im)

    def swapped(self) -> "ArcPair":
        return ArcPair(self.gammatilde_re, self.gammatilde_im, self.gamma_re, self.gamma_im, self.epsilon)


@dataclass(frozen=True)
class NormalizedCusp:
    """Domain ``{0 < |z| <= R, 0 < arg z < angle(|z|)}``."""

    angle: TruncatedSeries
    radius: float
    relabeled: bool = False

    def __post_init__(self):
        n = S.ord(self.angle)
        if n == INFINITE:
            raise DomainError("angle function vanishes identically: no cusp")
        if n < 1:
            raise DomainError("angle function must vanish at 0 (order of tangency >= 1)")
        if not self.angle.is_real:
            raise DomainError("angle function must have real coefficients")
        if S.lc(self.angle) <= 0:
            raise DomainError("coefficient of tangency must be positive")
        if not self.radius > 0:
            raise DomainError("radius must be positive")
        t = np.linspace(0, self.radius, POSITIVITY_SAMPLES + 1)[1:]
        if np.any(S.eval_at(self.angle, t) <= 0):
            raise DomainError(f"angle function is not positive on ]0, {self.radius}[")

    @property
    def N(self) -> int:
        return int(S.ord(self.angle))

    @property
    def a(self) -> float:
        return float(S.lc(self.angle))

    def angle_at(self, t):
        return S.eval_at(self.angle, t)

    def midray(self, t, fraction: float = 0.5):
        """Point at distance ``t`` whose argument is ``fraction`` of the opening angle."""
        t = np.asarray(t, dtype=float)
        return t * np.exp(1j * fraction * self.angle_at(t))


@dataclass(frozen=True)
class AsymptoticTuple:
    N: int
    a: float
    b: tuple
    c: tuple = field(init=False)
    sigma: float = field(init=False)

    def __post_init__(self):
        if len(self.b) < self.N + 1:
            raise ValueError("need b_0 .. b_N to form the tuple")
        b = tuple(float(x) + 0.0 for x in self.b)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", tuple(math.pi * b[j] / (j - self.N) + 0.0 for j in range(self.N)))
        object.__setattr__(self, "sigma", math.pi * b[self.N])

    @property
    def M(self) -> int:
        return len(self.b) - 1

    def as_dict(self) -> dict:
        return {"N": self.N, "a": self.a, "b": list(self.b), "c": list(self.c), "sigma": self.sigma}


def _complexify(re: TruncatedSeries, im: TruncatedSeries) -> TruncatedSeries:
    m = min(re.trunc, im.trunc)
    return TruncatedSeries(re.coeffs[:m] + 1j * im.coeffs[:m])


def _arclength_reparam(curve: TruncatedSeries) -> TruncatedSeries:
    """Reparameterize a regular curve through 0 by signed arc length."""
    re, im = curve.real(), curve.imag()
    speed2 = S.add(S.mul(S.derivative(re), S.derivative(re)), S.mul(S.derivative(im), S.derivative(im)))
    speed = S.sqrt_series(speed2)
    arclen = TruncatedSeries(np.concatenate([[0.0], speed.coeffs / np.arange(1, speed.trunc + 1)]))
    return S.compose(curve, S.revert(arclen))


def normalize(arcs: ArcPair, _relabel_depth: int = 0) -> NormalizedCusp:
    """Reduce an arc pair to its angle function.

    The second arc is straightened onto the positive real axis (after being
    parameterized by arc length, so the result only depends on the traces),
    and the first arc is rewritten in polar form ``s * exp(i*mu(s))`` with
    ``s`` the distance to 0.  If ``mu`` comes out negative the arcs are swapped.
    """
    g, gt = arcs.gamma, arcs.gammatilde
    for name, curve in (("gamma", g), ("gammatilde", gt)):
        if curve.trunc < 3:
            raise DomainError(f"{name} needs at least three known coefficients")
        if curve.coeffs[0] != 0:
            raise DomainError(f"{name}(0) must be 0")
        if curve.coeffs[1] == 0:
            raise DomainError(f"{name} is not regular at 0 (vanishing derivative)")

    straighten = S.revert(_arclength_reparam(gt))
    gam = S.compose(straighten, g)
    d0 = gam.coeffs[1]
    if abs(np.imag(d0)) > 1e-12 * abs(d0):
        raise DomainError("arcs meet at a nonzero angle: corner, not a cusp")
    if np.real(d0) < 0:
        raise DomainError("arcs leave 0 in opposite directions: not a cusp")

    re, im = gam.real(), gam.imag()
    im = TruncatedSeries(np.concatenate([[0.0, 0.0], im.coeffs[2:]]))
    if S.ord(im) == INFINITE:
        raise DomainError("arcs coincide to the stored order: degenerate boundary, no cusp")

    re1, im1 = S.shift(re, 1), S.shift(im, 1)
    ratio = S.mul(im1, S.mul_inverse(re1).tail)
    eta = S.compose(S.arctan_series(ratio.trunc), ratio)
    root = S.sqrt_series(S.add(S.mul(re1, re1), S.mul(im1, im1)))
    modulus = TruncatedSeries(np.concatenate([[0.0], root.coeffs]))
    mu = S.compose(eta, S.revert(modulus))

    if S.ord(mu) == INFINITE:
        raise DomainError("angle function vanishes identically: no cusp")
    if S.lc(mu) < 0:
        if _relabel_depth:
            raise DomainError("could not orient the arcs so that the angle function is positive")
        swapped = normalize(arcs.swapped(), _relabel_depth=1)
        return NormalizedCusp(swapped.angle, swapped.radius, relabeled=True)

    speeds = min(abs(g.coeffs[1]), abs(gt.coeffs[1]))
    radius = 0.5 * arcs.epsilon * min(1.0, speeds)
    for _ in range(60):
        t = np.linspace(0, radius, POSITIVITY_SAMPLES + 1)[1:]
        if np.all(S.eval_at(mu, t) > 0):
            return NormalizedCusp(mu, radius)
        radius /= 2
    raise DomainError("angle function is not positive on any sampled interval")


def default_M(N: int) -> int:
    return max(2 * N + 2, 8)


def compute_tuple(cusp: NormalizedCusp, M: int | None = None) -> AsymptoticTuple:
    """Order/coefficient of tangency and the asymptotic tuple, with ``b_0 .. b_M``."""
    inv = S.mul_inverse(cusp.angle)
    N = cusp.N
    available = inv.trunc - 1
    if M is None:
        M = min(default_M(N), available)
    if M < N:
        raise ValueError(f"angle function is known to too few terms to reach b_{N}")
    if M > available:
        raise ValueError(f"b_{M} requested but only b_0..b_{available} are determined by the truncation")
    return AsymptoticTuple(N=N, a=cusp.a, b=tuple(inv.coeffs[: M + 1]))


def sqrt_transform(cusp: NormalizedCusp) -> NormalizedCusp:
    """Pull the domain back under ``z -> z**2``: angle ``t -> angle(t**2) / 2``."""
    return NormalizedCusp(S.scalar_mul(S.substitute_power(cusp.angle, 2), 0.5), math.sqrt(cusp.radius))


def is_small_perturbation(cusp: NormalizedCusp) -> bool:
    """True iff ``angle(t) = a t**N + o(t**(2N))``, judged on the stored coefficients."""
    N = cusp.N
    if cusp.angle.trunc <= 2 * N:
        raise ValueError(f"need coefficients up to t^{2 * N}; series is truncated at t^{cusp.angle.trunc}")
    return bool(np.all(cusp.angle.coeffs[N + 1: 2 * N + 1] == 0))


# Presets and domain-spec files -----------------------------------------------


def tangent_circles(r: float, trunc: int = DEFAULT_TRUNC) -> NormalizedCusp:
    """Region above the real axis and outside the circle of radius ``r`` tangent at 0."""
    if not r > 0:
        raise DomainError("tangent_circles needs r > 0")
    angle = S.compose(S.arcsin_series(trunc), TruncatedSeries.monomial(1 / (2 * r), 1, trunc))
    return NormalizedCusp(angle, r)


def tangent_circles_sqrt(r: float, trunc: int = DEFAULT_TRUNC) -> NormalizedCusp:
    base = tangent_circles(r, (trunc + 1) // 2)
    out = sqrt_transform(base)
    return NormalizedCusp(TruncatedSeries(out.angle.coeffs[:trunc]), out.radius)


EXAMPLE_2_6_RADIUS = 0.8


def example_2_6(trunc: int = DEFAULT_TRUNC, radius: float = EXAMPLE_2_6_RADIUS) -> NormalizedCusp:
    """``{0 < |z| < radius, 0 < arg z < |z| - |z|**2}``.

    Only the germ at 0 is prescribed; the radius decides how the domain is
    closed off, and 0.8 keeps ``|z| <= 0.3`` well away from the closure.
    """
    return NormalizedCusp(TruncatedSeries.from_coeffs([0.0, 1.0, -1.0], trunc), radius)


PRESETS = {
    "tangent_circles": tangent_circles,
    "tangent_circles_sqrt": tangent_circles_sqrt,
    "example_2_6": example_2_6,
}


@dataclass(frozen=True)
class DomainSpec:
    cusp: NormalizedCusp
    preset: str | None = None
    params: dict = field(default_factory=dict)


def _series_field(obj: dict, key: str, trunc: int | None) -> TruncatedSeries:
    if key not in obj:
        raise DomainError(f"domain spec: missing field '{key}'")
    lit = obj[key]
    try:
        if isinstance(lit, dict) and trunc is not None and "trunc" not in lit:
            lit = dict(lit, trunc=max(trunc, len(lit.get("coeffs", []))))
        s = S.from_literal(lit)
    except ValueError as exc:
        raise DomainError(f"domain spec: field '{key}': {exc}") from None
    if not isinstance(s, TruncatedSeries):
        raise DomainError(f"domain spec: field '{key}' must be a power series (min_exponent 0)")
    return s


def _real_field(obj: dict, key: str) -> float:
    if key not in obj:
        raise DomainError(f"domain spec: missing field '{key}'")
    v = obj[key]
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise DomainError(f"domain spec: field '{key}' must be a real number")
    return float(v)


def parse_domain(obj: dict, trunc: int | None = None) -> DomainSpec:
    """Build a cusp from a domain-spec object (see README for the three kinds)."""
    if not isinstance(obj, dict):
        raise DomainError("domain spec must be a JSON object")
    kind = obj.get("kind", "preset" if "name" in obj else None)
    if kind == "angle_function":
        angle = _series_field(obj, "angle", trunc or DEFAULT_TRUNC)
        return DomainSpec(NormalizedCusp(angle, _real_field(obj, "radius")))
    if kind == "arc_pair":
        t = trunc or DEFAULT_TRUNC
        arcs = ArcPair(*(_series_field(obj, k, t) for k in ("gamma_re", "gamma_im", "gammatilde_re", "gammatilde_im")),
                       epsilon=_real_field(obj, "epsilon"))
        return DomainSpec(normalize(arcs))
    if kind == "preset":
        name = obj.get("name")
        if name not in PRESETS:
            raise DomainError(f"domain spec: unknown preset {name!r}; choose from {sorted(PRESETS)}")
        params = {k: v for k, v in obj.items() if k not in ("kind", "name")}
        kwargs = {}
        if name.startswith("tangent_circles"):
            kwargs["r"] = _real_field(obj, "r") if "r" in obj else 0.5
            params["r"] = kwargs["r"]
        elif name == "example_2_6" and set(params) <= {"radius"}:
            if "radius" in params:
                kwargs["radius"] = _real_field(obj, "radius")
        elif params:
            raise DomainError(f"domain spec: preset {name!r} takes no parameters, got {sorted(params)}")
        if trunc:
            kwargs["trunc"] = trunc
        return DomainSpec(PRESETS[name](**kwargs), preset=name, params=params)
    raise DomainError(f"domain spec: unknown kind {kind!r}")


def load_domain(source: str, trunc: int | None = None) -> DomainSpec:
    """Read a domain spec from a JSON file, or treat ``source`` as a preset name.

    Preset shorthand: ``example_2_6``, ``example_2_6:0.5`` (radius) or
    ``tangent_circles:0.25`` (circle radius r).
    """
    path = Path(source)
    if path.exists():
        try:
            obj = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise DomainError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return parse_domain(obj, trunc)
    name, _, arg = source.partition(":")
    if name in PRESETS:
        obj = {"kind": "preset", "name": name}
        if arg:
            try:
                obj["radius" if name == "example_2_6" else "r"] = float(arg)
            except ValueError:
                raise DomainError(f"preset parameter {arg!r} is not a number") from None
        return parse_domain(obj, trunc)
    raise DomainError(f"{source}: neither a readable file nor a known preset")
