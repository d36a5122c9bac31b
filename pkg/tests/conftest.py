import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from symtoep.symbols import FourierSymbol, SPPoly

settings.register_profile(
    "symtoep", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("symtoep")


gaussian_ints = st.builds(complex, st.integers(-3, 3), st.integers(-3, 3))


@st.composite
def symbols(draw, max_beta=3, min_beta=0):
    """Symmetric symbol with Gaussian-integer coefficients."""
    beta = draw(st.integers(min_beta, max_beta))
    pairs = [(m, n) for m in range(-beta, beta + 1) for n in range(-beta, m + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=6, unique=True)) if pairs else []
    coeffs = {}
    for m, n in chosen:
        c = draw(gaussian_ints)
        coeffs[(m, n)] = c
        coeffs[(n, m)] = c
    return FourierSymbol(coeffs)


@st.composite
def analytic_symbols(draw, max_beta=2):
    f = draw(symbols(max_beta=max_beta))
    return FourierSymbol({k: v for k, v in f.coeffs.items() if min(k) >= 0})


@st.composite
def analytic_sp_polys(draw, max_degree=6):
    """Analytic polynomial in ``(s, p)`` with weighted degree ``i + 2j <= max_degree``."""
    keys = [(i, j, 0, 0) for j in range(max_degree // 2 + 1)
            for i in range(max_degree - 2 * j + 1)]
    chosen = draw(st.lists(st.sampled_from(keys), min_size=1, max_size=5, unique=True))
    return SPPoly({k: draw(gaussian_ints) for k in chosen})


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
