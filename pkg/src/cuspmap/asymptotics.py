"""Evaluators for the asymptotic forms of the mapping function and its inverse.

With ``H(z) = sum_{j<N} c_j z**(j-N) + sigma*Log z`` the forward map behaves like
``F = exp(H)``; derivatives of ``F`` follow from Faa di Bruno's formula for
``exp(H)``.  The inverse map behaves like ``G = (-pi/(a N log z))**(1/N)``.
All logarithms and powers use the principal branch.
"""

from __future__ import annotations

import cmath
import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from . import series as S
from .cusp import AsymptoticTuple


class BranchCutError(ValueError):
    """Evaluation point is 0 or lies on the branch cut of the principal logarithm."""


def _check_slit(z: complex) -> complex:
    z = complex(z)
    if z == 0:
        raise BranchCutError("z = 0 is not in the domain")
    if z.imag == 0 and z.real < 0:
        raise BranchCutError(f"z = {z} lies on the negative real axis (branch cut of Log)")
    return z


@dataclass(frozen=True)
class HFunction:
    tuple: AsymptoticTuple

    def __post_init__(self):
        if self.tuple.c[0] == 0:
            raise ValueError("c_0 must be nonzero")

    def laurent_terms(self) -> dict:
        """``{power: coefficient}`` for the non-logarithmic part of H."""
        N = self.tuple.N
        return {j - N: c for j, c in enumerate(self.tuple.c)}

    def derivative_terms(self, l: int) -> dict:
        """``{power: coefficient}`` of the l-th derivative of H, l >= 1."""
        out = defaultdict(float)
        for m, c in self.laurent_terms().items():
            f = 1.0
            for i in range(l):
                f *= m - i
            out[m - l] += c * f
        if self.tuple.sigma:
            out[-l] += self.tuple.sigma * (-1) ** (l - 1) * math.factorial(l - 1)
        return dict(out)


def eval_H(h: HFunction, z: complex) -> complex:
    z = _check_slit(z)
    acc = sum(c * z**m for m, c in h.laurent_terms().items())
    return acc + h.tuple.sigma * cmath.log(z)


def eval_logF(t: AsymptoticTuple, z: complex) -> complex:
    """``log F(z)``; use this where ``F`` itself under- or overflows."""
    return eval_H(HFunction(t), z)


def eval_F(t: AsymptoticTuple, z: complex) -> complex:
    """``z**sigma * exp(c_0/z**N + ... + c_{N-1}/z)``."""
    return cmath.exp(eval_logF(t, z))


def partitions_T(k: int):
    """All ``(j_1, ..., j_k)`` of non-negative integers with ``sum l*j_l == k``."""

    def rec(l, remaining):
        if l > k:
            if remaining == 0:
                yield ()
            return
        for j in range(remaining // l + 1):
            for rest in rec(l + 1, remaining - l * j):
                yield (j,) + rest

    return list(rec(1, k))


@dataclass(frozen=True)
class FDerivativeExpansion:
    """``F^(k)/F`` as a sum of ``coefficient * z**power * (Log z)**log_power``."""

    k: int
    terms: tuple

    def __call__(self, z: complex) -> complex:
        z = _check_slit(z)
        logz = cmath.log(z)
        return sum(c * z**p * logz**q for c, p, q in self.terms)

    @property
    def leading(self) -> tuple:
        """The term with the most negative power of z."""
        return min(self.terms, key=lambda term: term[1])


def _poly_mul(p: dict, q: dict) -> dict:
    out = defaultdict(float)
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            out[m1 + m2] += c1 * c2
    return out


def faa_di_bruno(h: HFunction, k: int) -> FDerivativeExpansion:
    """Exact ``F^(k)/F`` for ``F = exp(H)``.

    ``sum over T_k of k!/(j_1!...j_k!) * prod_l (H^(l)/l!)**j_l``; since every
    derivative of ``H`` is a Laurent polynomial the log power is always 0.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    scaled = {l: {m: c / math.factorial(l) for m, c in h.derivative_terms(l).items()} for l in range(1, k + 1)}
    total = defaultdict(float)
    for js in partitions_T(k):
        weight = math.factorial(k)
        prod = {0: 1.0}
        for l, j in enumerate(js, start=1):
            weight //= math.factorial(j)
            for _ in range(j):
                prod = _poly_mul(prod, scaled[l])
        for m, c in prod.items():
            total[m] += weight * c
    terms = tuple(sorted(((c, m, 0) for m, c in total.items() if c != 0), key=lambda term: term[1]))
    return FDerivativeExpansion(k, terms)


def theorem_b_constant(t: AsymptoticTuple, k: int) -> float:
    """``(-N c_0)**k``, the coefficient of ``z**(-k(N+1))`` in ``F^(k)/F``."""
    return (-t.N * t.c[0]) ** k


def eval_F_derivative(t: AsymptoticTuple, k: int, z: complex) -> complex:
    if k == 0:
        return eval_F(t, z)
    return eval_F(t, z) * faa_di_bruno(HFunction(t), k)(z)


def eval_logF_derivative(t: AsymptoticTuple, k: int, z: complex) -> complex:
    """Logarithm of ``F^(k)(z)`` (branch: ``log F + Log(F^(k)/F)``)."""
    if k == 0:
        return eval_logF(t, z)
    return eval_logF(t, z) + cmath.log(faa_di_bruno(HFunction(t), k)(z))


def F_derivative_surrogate(t: AsymptoticTuple, k: int, z: complex) -> complex:
    """Leading-order form ``F(z) * (-N c_0)**k * z**(-k(N+1))``."""
    z = _check_slit(z)
    return eval_F(t, z) * theorem_b_constant(t, k) * z ** (-k * (t.N + 1))


def _check_disc(z: complex) -> complex:
    z = complex(z)
    if z == 0:
        raise BranchCutError("z = 0 is not in the domain")
    if abs(z) >= 1:
        raise ValueError(f"|z| = {abs(z)} >= 1: log|z| is not negative")
    if z.imag < 0:
        raise BranchCutError("z must lie in the closed upper half-plane")
    return z


def eval_G(N: int, a: float, z: complex, branch: str = "modulus") -> complex:
    """Leading behaviour of the inverse map, ``(-pi/(a N log|z|))**(1/N)``.

    ``branch="principal"`` replaces ``log|z|`` by ``Log z``, giving the
    holomorphic function whose derivatives :func:`eval_G_derivative` returns.
    """
    z = _check_disc(z)
    if branch == "modulus":
        return (-math.pi / (a * N * math.log(abs(z)))) ** (1.0 / N)
    if branch == "principal":
        return (-math.pi / (a * N * cmath.log(z))) ** (1.0 / N)
    raise ValueError(f"unknown branch {branch!r}")


@dataclass(frozen=True)
class GDerivativeCoeffs:
    """``G^(k)(z) = (sum_j d[j-1] * u**(1/N + j)) / z**k`` with ``u = -1/log z``."""

    N: int
    k: int
    d: tuple

    def __post_init__(self):
        if self.d[0] == 0:
            raise ValueError("d_{k,1} must be nonzero")


@lru_cache(maxsize=None)
def _d_table(N: int, k: int) -> tuple:
    # row[j] = d_{k,j}; start from G itself: d_{0,0} = 1.
    row = {0: 1.0}
    for kk in range(k):
        nxt = defaultdict(float)
        for j, d in row.items():
            nxt[j] += -kk * d
            nxt[j + 1] += (1.0 / N + j) * d
        row = {j: v for j, v in nxt.items() if j >= 1}
    return tuple(row.get(j, 0.0) for j in range(1, k + 1))


def g_derivative_coeffs(N: int, k: int) -> GDerivativeCoeffs:
    """``d_{1,1} = 1/N``, ``d_{k+1,j} = -k d_{k,j} + (1/N + j - 1) d_{k,j-1}``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return GDerivativeCoeffs(N, k, _d_table(N, k))


def _g_scale(N: int, a: float) -> float:
    return (math.pi / (a * N)) ** (1.0 / N)


def eval_G_derivative(N: int, a: float, k: int, z: complex) -> complex:
    """k-th derivative of ``(-pi/(a N Log z))**(1/N)`` on the upper half-plane."""
    z = _check_disc(z)
    if k == 0:
        return eval_G(N, a, z, branch="principal")
    u = -1.0 / cmath.log(z)
    coeffs = g_derivative_coeffs(N, k).d
    acc = sum(d * u ** (1.0 / N + j) for j, d in enumerate(coeffs, start=1))
    return _g_scale(N, a) * acc * z ** (-k)


def G_derivative_surrogate(N: int, a: float, k: int, z: complex) -> complex:
    """Leading-order form ``d_{k,1} * (-1/Log z)**(1/N + 1) / z**k`` (times the scale)."""
    z = _check_disc(z)
    u = -1.0 / cmath.log(z)
    return _g_scale(N, a) * g_derivative_coeffs(N, k).d[0] * u ** (1.0 / N + 1) * z ** (-k)


def modulus_asymptote(t: AsymptoticTuple, r: float) -> float:
    """``r**sigma * exp(sum c_j r**(j-N))``."""
    if not r > 0:
        raise ValueError("r must be positive")
    expo = sum(c * r ** (j - t.N) for j, c in enumerate(t.c))
    return math.exp(expo + t.sigma * math.log(r))


def log_modulus_asymptote(t: AsymptoticTuple, r: float) -> float:
    if not r > 0:
        raise ValueError("r must be positive")
    return sum(c * r ** (j - t.N) for j, c in enumerate(t.c)) + t.sigma * math.log(r)


def argument_asymptote(t: AsymptoticTuple, z: complex) -> float:
    """``pi * arg(z) * |z|**(-N) * (b_0 + b_1|z| + ... + b_N|z|**N)``."""
    z = complex(z)
    if z == 0:
        raise ValueError("z must be nonzero")
    r = abs(z)
    poly = sum(b * r**j for j, b in enumerate(t.b[: t.N + 1]))
    return math.pi * cmath.phase(z) * r ** (-t.N) * poly


def h_closed_form(t: AsymptoticTuple, r: float, delta: float, precision: int | None = None):
    """``-pi * integral_r^delta rho**(-N-1) * sum_j b_j rho**j d rho`` term by term.

    Every stored ``b_j`` is used.  With ``precision`` (decimal digits) the
    arithmetic runs in mpmath and an ``mpf`` is returned.
    """
    if not 0 < r < delta:
        raise ValueError("need 0 < r < delta")
    L = S.LaurentSeries(-t.N - 1, S.TruncatedSeries(np.asarray(t.b, dtype=float)))
    A, beta = S.antiderivative_with_log(L)
    if precision is None:
        prim = lambda x: S.eval_at(A, x) + beta * math.log(x)  # noqa: E731
        return -math.pi * (prim(delta) - prim(r))
    with mpmath.workdps(precision):
        # Divide in mpmath too: rounding b_j/(j-N) to a double already costs
        # ~1e-16 relative, i.e. ~1e-4 absolute once r**-N reaches 1e12.
        bs = [mpmath.mpf(float(b)) for b in t.b]
        N = t.N

        def prim(x):
            x = mpmath.mpf(x)
            acc = mpmath.mpf(0)
            for j, b in enumerate(bs):
                acc += b * mpmath.log(x) if j == N else b * x ** (j - N) / (j - N)
            return acc

        return -mpmath.pi * (prim(delta) - prim(r))
