"""Truncated power series and Laurent series.

A :class:`TruncatedSeries` stores the coefficients of ``t**0 .. t**(trunc-1)``;
everything from ``t**trunc`` on is unknown (not zero).  A :class:`LaurentSeries`
is such a series shifted by an integer base exponent.

Coefficients are double precision.  Complex coefficients are accepted so that
arcs can be complexified during domain normalization; all user-facing
quantities are real.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

INFINITE = math.inf

Number = Union[int, float, complex]


def _freeze(values, dtype=None) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    if arr.ndim != 1:
        raise ValueError("coefficients must form a one-dimensional sequence")
    if arr.dtype.kind not in "fc":
        arr = arr.astype(float)
    if arr.dtype.kind == "c" and np.all(arr.imag == 0):
        arr = arr.real.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Power series ``sum coeffs[j] t**j + O(t**trunc)`` with ``trunc = len(coeffs)``."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _freeze(self.coeffs))
        if len(self.coeffs) == 0:
            raise ValueError("a truncated series needs at least one known coefficient")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Number], trunc: int | None = None) -> "TruncatedSeries":
        """Pad (with exact zeros) or cut ``coeffs`` to ``trunc`` terms."""
        coeffs = list(coeffs)
        if trunc is None:
            trunc = len(coeffs)
        if trunc < 1:
            raise ValueError("trunc must be positive")
        if len(coeffs) < trunc:
            coeffs = coeffs + [0.0] * (trunc - len(coeffs))
        return cls(np.asarray(coeffs[:trunc]))

    @classmethod
    def monomial(cls, coeff: Number, power: int, trunc: int) -> "TruncatedSeries":
        c = np.zeros(trunc, dtype=complex if isinstance(coeff, complex) else float)
        if power < trunc:
            c[power] = coeff
        return cls(c)

    @property
    def trunc(self) -> int:
        return len(self.coeffs)

    @property
    def is_real(self) -> bool:
        return self.coeffs.dtype.kind == "f"

    def real(self) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs.real.copy())

    def imag(self) -> "TruncatedSeries":
        return TruncatedSeries(np.imag(self.coeffs).copy())

    def __getitem__(self, j: int):
        return self.coeffs[j]

    def __len__(self) -> int:
        return self.trunc

    def __repr__(self) -> str:
        terms = ", ".join(f"{c:.17g}" for c in self.coeffs)
        return f"TruncatedSeries([{terms}], trunc={self.trunc})"

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scalar_mul(other, -1.0))

    def __neg__(self):
        return scalar_mul(self, -1.0)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return scalar_mul(self, other)

    __rmul__ = __mul__

    def __call__(self, z):
        return eval_at(self, z)


@dataclass(frozen=True, eq=False)
class LaurentSeries:
    """``t**base * tail(t)``; the tail's leading coefficient is nonzero unless all vanish."""

    base: int
    tail: TruncatedSeries

    def __post_init__(self):
        base, coeffs = int(self.base), self.tail.coeffs
        nz = np.flatnonzero(coeffs)
        if len(nz) and nz[0] > 0:
            base += int(nz[0])
            coeffs = coeffs[nz[0]:]
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "tail", TruncatedSeries(coeffs))

    @property
    def coeffs(self) -> np.ndarray:
        return self.tail.coeffs

    @property
    def trunc(self) -> int:
        """Number of known terms."""
        return self.tail.trunc

    def coefficient(self, exponent: int):
        """Coefficient of ``t**exponent`` (zero below the base, error beyond truncation)."""
        j = exponent - self.base
        if j < 0:
            return 0.0
        if j >= self.trunc:
            raise IndexError(f"coefficient of t^{exponent} lies beyond the truncation")
        return self.tail.coeffs[j]

    def __repr__(self) -> str:
        terms = ", ".join(f"{c:.17g}" for c in self.coeffs)
        return f"LaurentSeries(base={self.base}, [{terms}])"

    def __call__(self, z):
        return eval_at(self, z)


SeriesLike = Union[TruncatedSeries, LaurentSeries]


def ord(s: SeriesLike):
    """Index of the first nonzero stored coefficient, ``INFINITE`` if there is none."""
    coeffs = s.coeffs
    nz = np.flatnonzero(coeffs)
    if len(nz) == 0:
        return INFINITE
    base = s.base if isinstance(s, LaurentSeries) else 0
    return base + int(nz[0])


def lc(s: TruncatedSeries):
    n = ord(s)
    if n == INFINITE:
        raise ValueError("the zero series has no leading coefficient")
    return s.coeffs[n]


def add(s1: TruncatedSeries, s2: TruncatedSeries) -> TruncatedSeries:
    m = min(s1.trunc, s2.trunc)
    return TruncatedSeries(s1.coeffs[:m] + s2.coeffs[:m])


def scalar_mul(s: TruncatedSeries, k: Number) -> TruncatedSeries:
    return TruncatedSeries(k * s.coeffs)


def _mul_arrays(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    return np.convolve(a[:m], b[:m])[:m]


def mul(s1: TruncatedSeries, s2: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product, truncated to ``min(trunc1, trunc2)``."""
    m = min(s1.trunc, s2.trunc)
    return TruncatedSeries(_mul_arrays(s1.coeffs, s2.coeffs, m))


def shift(s: TruncatedSeries, k: int) -> TruncatedSeries:
    """Divide by ``t**k``; the first ``k`` coefficients must vanish."""
    if k < 0:
        raise ValueError("shift amount must be non-negative")
    if k >= s.trunc:
        raise ValueError("shift would discard every known coefficient")
    if np.any(s.coeffs[:k] != 0):
        raise ValueError(f"series is not divisible by t^{k}")
    return TruncatedSeries(s.coeffs[k:])


def _power_series_inverse(a: np.ndarray) -> np.ndarray:
    """Reciprocal of a power series with ``a[0] != 0`` (same length)."""
    m = len(a)
    b = np.zeros(m, dtype=np.result_type(a, float))
    b[0] = 1.0 / a[0]
    for j in range(1, m):
        b[j] = -np.dot(b[:j], a[j:0:-1]) / a[0]
    return b


def mul_inverse(s: TruncatedSeries) -> LaurentSeries:
    """Multiplicative inverse ``t**(-N) * sum b_j t**j``.

    ``b_0 = 1/a_N`` and ``b_j = -(1/a_N) * sum_{k+l=j, k<j} b_k a_{N+l}``; the
    result carries ``trunc - N`` known terms.
    """
    n = ord(s)
    if n == INFINITE:
        raise ZeroDivisionError("cannot invert the identically zero series")
    b = _power_series_inverse(s.coeffs[n:])
    return LaurentSeries(-n, TruncatedSeries(b))


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """``f(g(t))`` for ``ord(g) >= 1``.

    Known to ``min(ord(g) * trunc(f), trunc(g))`` terms.
    """
    og = ord(g)
    if og == 0:
        raise ValueError("composition needs ord(g) >= 1")
    m = g.trunc if og == INFINITE else min(og * f.trunc, g.trunc)
    gc = g.coeffs[:m]
    dtype = np.result_type(f.coeffs, gc)
    out = np.zeros(m, dtype=dtype)
    # Horner in the series ring.
    for c in f.coeffs[::-1]:
        out = _mul_arrays(out, gc, m)
        out[0] += c
    return TruncatedSeries(out)


def revert(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse of a series of order one."""
    if ord(f) != 1:
        raise ValueError("series reversion needs ord(f) == 1")
    m = f.trunc
    f1 = f.coeffs[1]
    g = np.zeros(m, dtype=np.result_type(f.coeffs, float))
    g[1] = 1.0 / f1
    # g_n is fixed by the t^n coefficient of f(g(t)); each pass only needs the
    # first n+1 terms, so compose on a prefix.
    for n in range(2, m):
        fg = compose(TruncatedSeries(f.coeffs[: n + 1]), TruncatedSeries(g[: n + 1]))
        g[n] -= fg.coeffs[n] / f1
    return TruncatedSeries(g)


def derivative(s: SeriesLike) -> SeriesLike:
    """Term-wise derivative; one fewer known term."""
    if isinstance(s, LaurentSeries):
        exps = s.base + np.arange(s.trunc)
        return LaurentSeries(s.base - 1, TruncatedSeries(exps * s.coeffs))
    if s.trunc < 2:
        raise ValueError("derivative of a series known to one term carries no information")
    return TruncatedSeries(np.arange(1, s.trunc) * s.coeffs[1:])


def antiderivative_with_log(L: LaurentSeries) -> tuple[LaurentSeries, float]:
    """Term-wise antiderivative, with the ``t**-1`` coefficient split off.

    Returns ``(A, beta)`` such that ``A(t) + beta*log(t)`` is an antiderivative
    of ``L``; the integration constant is zero.
    """
    exps = L.base + np.arange(L.trunc)
    coeffs = np.array(L.coeffs, copy=True)
    log_coeff = 0.0
    hit = np.flatnonzero(exps == -1)
    if len(hit):
        log_coeff = coeffs[hit[0]]
        coeffs[hit[0]] = 0.0
    powers = exps + 1.0
    powers[powers == 0] = 1.0
    return LaurentSeries(L.base + 1, TruncatedSeries(coeffs / powers)), log_coeff


def eval_at(s: SeriesLike, z):
    """Horner evaluation of the stored truncation at ``z`` (scalar or array)."""
    base = s.base if isinstance(s, LaurentSeries) else 0
    z = np.asarray(z) if not np.isscalar(z) else z
    if base < 0 and np.any(z == 0):
        raise ZeroDivisionError("negative base exponent evaluated at z = 0")
    acc = 0
    for c in s.coeffs[::-1]:
        acc = acc * z + c
    if base:
        acc = acc * z**base
    return acc


# Elementary generators --------------------------------------------------------


def identity(trunc: int) -> TruncatedSeries:
    return TruncatedSeries.monomial(1.0, 1, trunc)


def arctan_series(trunc: int) -> TruncatedSeries:
    c = np.zeros(trunc)
    for j in range(1, trunc, 2):
        c[j] = (-1) ** ((j - 1) // 2) / j
    return TruncatedSeries(c)


def arcsin_series(trunc: int) -> TruncatedSeries:
    """``arcsin(t) = sum (2n)!/(4**n (n!)**2 (2n+1)) t**(2n+1)``."""
    c = np.zeros(trunc)
    coef = 1.0
    for n in range(0, (trunc + 1) // 2):
        j = 2 * n + 1
        if j < trunc:
            c[j] = coef / j
        coef *= (2 * n + 1) / (2 * n + 2)
    return TruncatedSeries(c)


def sqrt_series(s: TruncatedSeries) -> TruncatedSeries:
    """Square root of a series with positive constant term (positive branch)."""
    a = s.coeffs
    if a[0] == 0 or (np.isrealobj(a) and a[0] < 0):
        raise ValueError("square root needs a nonzero, positive constant term")
    m = len(a)
    r = np.zeros(m, dtype=a.dtype)
    r[0] = np.sqrt(a[0])
    for j in range(1, m):
        r[j] = (a[j] - np.dot(r[1:j], r[j - 1:0:-1])) / (2 * r[0])
    return TruncatedSeries(r)


def substitute_power(s: TruncatedSeries, k: int) -> TruncatedSeries:
    """``s(t**k)``; the inserted zeros are exact so the result knows ``k*trunc`` terms."""
    c = np.zeros(k * s.trunc, dtype=s.coeffs.dtype)
    c[::k] = s.coeffs
    return TruncatedSeries(c)


# Literal format ---------------------------------------------------------------


def to_literal(s: SeriesLike) -> dict:
    base = s.base if isinstance(s, LaurentSeries) else 0
    if np.iscomplexobj(s.coeffs):
        raise ValueError("series literals carry real coefficients only")
    return {"min_exponent": int(base), "coeffs": [float(c) for c in s.coeffs], "trunc": int(s.trunc)}


def from_literal(obj: dict) -> SeriesLike:
    """Parse ``{"min_exponent": e, "coeffs": [...], "trunc": M}``.

    ``trunc`` is the number of known terms starting at ``t**min_exponent``;
    the coefficient list is zero-padded up to it.  A literal with
    ``min_exponent == 0`` yields a :class:`TruncatedSeries`.
    """
    if not isinstance(obj, dict):
        raise ValueError("series literal must be an object")
    unknown = set(obj) - {"min_exponent", "coeffs", "trunc"}
    if unknown:
        raise ValueError(f"unknown series literal field(s): {sorted(unknown)}")
    if "coeffs" not in obj:
        raise ValueError("series literal is missing 'coeffs'")
    coeffs = obj["coeffs"]
    if not isinstance(coeffs, list) or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in coeffs):
        raise ValueError("'coeffs' must be a list of real numbers")
    base = obj.get("min_exponent", 0)
    if not isinstance(base, int) or isinstance(base, bool):
        raise ValueError("'min_exponent' must be an integer")
    trunc = obj.get("trunc", len(coeffs))
    if not isinstance(trunc, int) or isinstance(trunc, bool) or trunc < 1:
        raise ValueError("'trunc' must be a positive integer")
    if trunc < len(coeffs):
        raise ValueError("'trunc' is smaller than the number of listed coefficients")
    tail = TruncatedSeries.from_coeffs([float(c) for c in coeffs], trunc)
    if base == 0:
        return tail
    return LaurentSeries(base, tail)


_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?(?:/\d+)?)?\s*\*?\s*(t(?:\s*\^\s*(\d+))?)?\s*")


def parse_polynomial(text: str, trunc: int = 16) -> TruncatedSeries:
    """Parse a polynomial in ``t`` such as ``"t - t^2"`` or ``"1/2 t^3 + 2.5e-1*t^5"``."""
    pos, coeffs = 0, {}
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse polynomial {text!r} at column {pos + 1}")
        if pos > 0 and m.group(1) is None:
            raise ValueError(f"missing '+' or '-' before column {pos + 1} in {text!r}")
        sign = -1.0 if m.group(1) == "-" else 1.0
        coef = float(Fraction(m.group(2))) if m.group(2) else 1.0
        power = (int(m.group(4)) if m.group(4) else 1) if m.group(3) else 0
        coeffs[power] = coeffs.get(power, 0.0) + sign * coef
        pos = m.end()
    top = max(coeffs)
    if top >= trunc:
        raise ValueError(f"degree {top} does not fit in trunc {trunc}")
    return TruncatedSeries.from_coeffs([coeffs.get(j, 0.0) for j in range(top + 1)], trunc)
