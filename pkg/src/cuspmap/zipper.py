"""Geodesic zipper: a numerical conformal map of a sampled cusp domain onto H.

The boundary polygon is unzipped one vertex at a time with the slit maps
``f_a(z) = sqrt(h(z)**2 + c**2)``, ``h(z) = z/(1 - z Re(a)/|a|**2)``, each of
which sends ``H`` minus the circular arc from 0 to ``a`` (orthogonal to R)
onto ``H`` with ``a -> 0``; each step is followed by the dilation ``1/c`` so
the images stay of order one.

Near the cusp the map decays like ``exp(c_0/|z|**N)``, far below the spacing
of doubles around the other boundary images.  Every point is therefore
carried as its offset from the current image of the cusp, and each step is
written in a form that keeps that offset to full relative precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .cusp import NormalizedCusp


class ZipperError(RuntimeError):
    pass


@dataclass(frozen=True)
class SampledBoundary:
    """Boundary polygon of a cusp domain, excluding the tip itself.

    ``points`` run from the Gamma side (next to the tip) through the outer
    closure to the Gamma-tilde side, i.e. clockwise; ``marked`` is an interior
    point used for normalization.
    """

    points: np.ndarray
    tip: complex = 0j
    marked: complex = 0.5j
    clustering: float = 0.85
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if len(pts) < 64:
            raise ValueError("need at least 64 boundary points")

    def polygon(self) -> np.ndarray:
        """Closed vertex list starting at the tip."""
        return np.concatenate([[self.tip], self.points])


def _channel_floor(cusp: NormalizedCusp, R: float, depth: float) -> float:
    """Radius where ``pi * int_t^R d rho / (rho angle(rho))`` reaches ``depth``."""
    du = 1e-3
    u_hi = math.log(R)
    u = u_hi - np.arange(0, 200_000) * du
    vals = math.pi / cusp.angle_at(np.exp(u))
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * du)])
    idx = int(np.searchsorted(cum, depth))
    if idx >= len(cum):
        raise ZipperError("channel floor not reached; angle function too large near 0")
    frac = (depth - cum[idx - 1]) / (cum[idx] - cum[idx - 1])
    return math.exp(u[idx - 1] - frac * du)


def sample_boundary(cusp: NormalizedCusp, n: int = 4096, clustering: float = 0.85,
                    depth: float = 200.0, R: float | None = None) -> SampledBoundary:
    """Sample both arcs with ``n`` points each, plus the outer arc ``|z| = R``.

    Nodes are uniform in a cost variable ``C`` with
    ``d log t / dC = min(angle(t), -log(clustering))``: deep in the channel
    the step is a fixed fraction of the channel width, and no two consecutive
    radii differ by more than the factor ``clustering``.  The channel is cut
    where the modulus integral reaches ``depth``, since everything below
    maps within ``exp(-depth)`` of the tip image.
    """
    if n < 64:
        raise ValueError("n must be >= 64")
    if not 0 < clustering < 1:
        raise ValueError("clustering must lie in (0, 1)")
    R = cusp.radius if R is None else R
    t_min = _channel_floor(cusp, R, depth)
    cap = -math.log(clustering)
    u = np.linspace(math.log(t_min), math.log(R), 20_000)
    density = 1.0 / np.minimum(cusp.angle_at(np.exp(u)), cap)
    cost = np.concatenate([[0.0], np.cumsum(0.5 * (density[1:] + density[:-1]) * np.diff(u))])
    t = np.exp(np.interp(np.linspace(0, cost[-1], n), cost, u))
    t[0], t[-1] = t_min, R

    gamma = t * np.exp(1j * cusp.angle_at(t))
    theta_R = float(cusp.angle_at(R))
    step_R = math.log(t[-1] / t[-2])
    m = max(2, math.ceil(theta_R / step_R))
    arc = R * np.exp(1j * np.linspace(theta_R, 0, m + 1)[1:-1])
    pts = np.concatenate([gamma, arc, t[::-1].astype(complex)])

    gaps = np.abs(np.diff(np.concatenate([[0j], pts, [0j]])))
    if gaps.min() <= 1e-14:
        raise ZipperError(f"boundary spacing {gaps.min():.3g} below 1e-14")
    marked = (R / 2) * np.exp(0.5j * cusp.angle_at(R / 2))
    return SampledBoundary(pts, 0j, complex(marked), clustering,
                           {"n": n, "t_min": t_min, "R": R, "arc_points": m, "depth": depth})


def _segments_intersect(poly: np.ndarray) -> bool:
    """True if any two non-adjacent edges of the closed polygon cross."""
    a = poly
    b = np.roll(poly, -1)
    n = len(a)

    def cross(o, p, q):
        return (p.real - o.real) * (q.imag - o.imag) - (p.imag - o.imag) * (q.real - o.real)

    for i in range(n - 2):
        j = np.arange(i + 2, n if i > 0 else n - 1)
        if len(j) == 0:
            continue
        d1 = cross(a[i], b[i], a[j])
        d2 = cross(a[i], b[i], b[j])
        d3 = cross(a[j], b[j], a[i])
        d4 = cross(a[j], b[j], b[i])
        if np.any((d1 * d2 < 0) & (d3 * d4 < 0)):
            return True
    return False


def _upper_root(x):
    r = np.sqrt(x)
    return np.where(r.imag < 0, -r, r)


def _forward_step(delta, beta, q, c, h0, f0):
    # f(p + delta) - f(p), where p is the tracked tip image and h0 = h(p), f0 = f(p).
    dh = delta / (q * (q - beta * delta))
    dg = dh * (2 * h0 + dh)
    f1 = _upper_root(f0 * f0 + dg)
    real = f1.imag == 0
    if np.any(real):
        f1 = np.where(real, np.where((h0 + dh).real > 0, 1.0, -1.0) * np.abs(f1.real), f1)
    s, d = f1 + f0, f1 - f0
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(np.abs(s) >= np.abs(d), dg / s, d)


def _inverse_step(delta, beta, q, c, h0, f0):
    dg = delta * (2 * f0 + delta)
    h1 = _upper_root(h0 * h0 + dg)
    s, d = h1 + h0, h1 - h0
    with np.errstate(divide="ignore", invalid="ignore"):
        dh = np.where(np.abs(s) >= np.abs(d), dg / s, d)
        return dh * q * q / (1 + q * beta * dh)


@dataclass(frozen=True)
class ZipperMap:
    """The unzipping chain; evaluations are vectorized over query points.

    ``z0, z1`` are the two boundary vertices the chain starts from
    (``z1 -> 0``, ``z0 -> infinity``); ``p1`` is the first image of the tip.
    """

    tip: complex
    z0: complex
    z1: complex
    p1: complex
    beta: np.ndarray
    q: np.ndarray
    c: np.ndarray
    h0: np.ndarray
    f0: np.ndarray
    zeta: float
    p_final: float
    lam: float = 1.0
    kappa: float = 0.0

    def _first(self, z):
        z = np.asarray(z, dtype=complex)
        y = self.tip - self.z0
        dg = (z - self.tip) * (self.z1 - self.z0) / ((z - self.z0) * y)
        g_tip = (self.tip - self.z1) / y
        return 1j * dg / (np.sqrt(g_tip + dg) + np.sqrt(g_tip))

    def _first_inverse(self, d):
        dg = -d * (2 * self.p1 + d)
        y = self.tip - self.z0
        return self.tip + dg * y * y / (self.z1 - self.z0 - dg * y)

    def _to_final(self, z):
        """Offset of the unnormalized image of ``z`` from that of the tip."""
        with np.errstate(divide="ignore", invalid="ignore"):
            d = self._first(z)
            for k in range(len(self.beta)):
                d = _forward_step(d, self.beta[k], self.q[k], self.c[k], self.h0[k], self.f0[k]) / self.c[k]
            zeta, p = self.zeta, self.p_final
            dz = zeta - p
            u0 = zeta * p / dz
            du = zeta * zeta * d / (dz * (dz - d))
            return -du * (2 * u0 + du)

    def forward(self, z):
        """``Phi(z)``, with the tip sent to 0."""
        w = self._to_final(z)
        return self.lam * w / (1 - self.kappa * w)

    def inverse(self, w):
        w = np.asarray(w, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = w / (self.lam + self.kappa * w)
            zeta, p = self.zeta, self.p_final
            dz = zeta - p
            u0 = zeta * p / dz
            u1 = _upper_root(u0 * u0 - d)
            s, diff = u1 + u0, u1 - u0
            du = np.where(np.abs(s) >= np.abs(diff), -d / s, diff)
            zu = zeta * zeta / dz
            d = zeta * zeta * du / (zu * (zu + du))
            for k in reversed(range(len(self.beta))):
                d = _inverse_step(d * self.c[k], self.beta[k], self.q[k], self.c[k], self.h0[k], self.f0[k])
            return self._first_inverse(d)


def _unzip(ccw: np.ndarray) -> ZipperMap:
    # ccw[0] is the tip.  Start from the vertex farthest from it.
    tip = ccw[0]
    i0 = 1 + int(np.argmax(np.abs(ccw[1:-1] - tip)))
    z0, z1 = ccw[i0], ccw[i0 + 1]
    order = np.concatenate([ccw[i0 + 2:], ccw[:i0]])
    tip_step = len(ccw) - i0 - 2
    p1 = complex(1j * np.sqrt((tip - z1) / (tip - z0)))
    shell = ZipperMap(tip, z0, z1, p1, *(np.empty(0) for _ in range(5)), 0.0, 0.0)
    d = shell._first(order)
    d[tip_step] = 0
    n = len(order)
    beta, c = np.empty(n), np.empty(n)
    q, h0, f0 = (np.empty(n, dtype=complex) for _ in range(3))
    p = p1
    zeta = math.inf
    for k in range(n):
        da = complex(d[k])
        a = p + da
        if not a.imag > 0 and k != tip_step:
            raise ZipperError(f"boundary vertex {k} left the upper half-plane (Im = {a.imag:.3g}); refine the sampling")
        if k == tip_step and not a.imag > 0:
            raise ZipperError("normalization failed: tip image is not separated from the real axis")
        mod2 = a.real * a.real + a.imag * a.imag
        beta[k] = a.real / mod2
        c[k] = mod2 / a.imag
        if k > tip_step:
            p = p.real
            q[k] = (p * da.real + abs(da) ** 2) / mod2
            h0[k] = p / q[k].real
            f0[k] = math.copysign(math.hypot(h0[k].real, c[k]), h0[k].real if h0[k].real != 0 else -1.0)
        else:
            q[k] = (-1j * a * a.imag + a.real * da) / mod2
            if k == tip_step:
                h0[k], f0[k] = 1j * c[k], 0
            else:
                h0[k] = p / q[k]
                f0[k] = complex(_upper_root(np.complex128(h0[k] * h0[k] + c[k] * c[k])))
        if k + 1 < n:
            d[k + 1:] = _forward_step(d[k + 1:], beta[k], q[k], c[k], h0[k], f0[k]) / c[k]
        if math.isinf(zeta):
            hz = -1.0 / beta[k] if beta[k] != 0 else math.inf
        else:
            den = 1 - beta[k] * zeta
            hz = zeta / den if den != 0 else math.inf
        zeta = math.copysign(math.hypot(hz, c[k]), hz) / c[k] if not math.isinf(hz) else math.inf
        p = f0[k] / c[k]
    p = float(np.real(p))
    if math.isinf(zeta) or zeta == p:
        raise ZipperError("normalization failed: image of the closing vertex is degenerate")
    return ZipperMap(complex(tip), complex(z0), complex(z1), p1, beta, q, c, h0, f0, float(zeta), p)


def zipper_map(boundary: SampledBoundary, target: complex = 1j, check_simple: bool = True):
    """Build the numerical map of the sampled domain onto H.

    The result is post-composed with the automorphism of H that keeps the
    tip image at 0 and sends ``boundary.marked`` to ``target``.
    """
    from .oracles import ConformalOracle

    poly = boundary.polygon()
    if check_simple and _segments_intersect(poly):
        raise ZipperError("boundary polygon is self-intersecting")
    ccw = np.concatenate([[poly[0]], poly[1:][::-1]])
    zm = _unzip(ccw)
    w0 = complex(zm._to_final(boundary.marked))
    target = complex(target)
    if not (w0.imag > 0 and target.imag > 0):
        raise ZipperError(f"normalization failed: marked image {w0} or target {target} not in H")
    v, s = 1 / w0, 1 / target
    lam = v.imag / s.imag
    kappa = v.real - lam * s.real
    zm = replace(zm, lam=lam, kappa=kappa)
    meta = dict(boundary.meta)
    meta.update({"nodes": len(poly), "marked": boundary.marked, "target": target, "clustering": boundary.clustering})
    return ConformalOracle("numeric", zm.forward, zm.inverse, None, meta)
