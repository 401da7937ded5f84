"""Shared generators for randomized series and cusps."""

import numpy as np
from hypothesis import strategies as st

from cuspmap import series as S
from cuspmap.cusp import NormalizedCusp


def bounded_series_coeffs(rng, order, trunc):
    """Leading coefficient in +-[1, 10], the others bounded by |lc|/4.

    This keeps both the series and its multiplicative/compositional inverse
    with coefficients of order ten, the regime where absolute residuals are
    meaningful in doubles.
    """
    lc = rng.choice([-1.0, 1.0]) * rng.uniform(1.0, 10.0)
    c = rng.uniform(-1.0, 1.0, trunc) * abs(lc) / 4
    c[:order] = 0.0
    c[order] = lc
    return c


@st.composite
def bounded_series(draw, min_order=0, max_order=3, max_trunc=14):
    order = draw(st.integers(min_order, max_order))
    trunc = draw(st.integers(order + 2, max_trunc))
    seed = draw(st.integers(0, 2**32 - 1))
    return S.TruncatedSeries.from_coeffs(bounded_series_coeffs(np.random.default_rng(seed), order, trunc))


def random_cusp(rng, N=None, trunc=16, radius=0.2):
    """Angle function ``a t^N + ...`` with mild higher terms, positive on ]0, radius]."""
    N = int(rng.integers(1, 4)) if N is None else N
    c = np.zeros(trunc)
    c[N] = rng.uniform(0.5, 2.0)
    upper = min(trunc, N + 6)
    c[N + 1:upper] = rng.uniform(-1.0, 1.0, upper - N - 1)
    return NormalizedCusp(S.TruncatedSeries.from_coeffs(c), radius)


@st.composite
def cusps(draw, max_N=3):
    N = draw(st.integers(1, max_N))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_cusp(np.random.default_rng(seed), N)


# acceptance report --------------------------------------------------------------

ACCEPTANCE_LINES = {}


def report(n, passed, detail, elapsed, limit):
    """Record and print the verdict line of one acceptance criterion."""
    ok = passed and elapsed < limit
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}; runtime {elapsed:.2f} s (limit {limit:g} s)"
    ACCEPTANCE_LINES[n] = line
    print(line)
    return ok
