import json

import numpy as np
import pytest
import sympy
from hypothesis import given

from symtoep.symbols import (COBURN_SYMBOL, P_SYMBOL, S_SYMBOL, FourierSymbol,
                             SPPoly, conjugate, is_analytic, product,
                             random_symbol, sp_to_fourier, sup_norm_estimate,
                             symbol_from_json, symbol_to_json)

from conftest import symbols
from oracles import multiply, sup_s_symbol


def test_sp_to_fourier_examples():
    assert sp_to_fourier(SPPoly.s()) == FourierSymbol({(1, 0): 1, (0, 1): 1})
    assert sp_to_fourier(SPPoly.p() * SPPoly.pbar()) == FourierSymbol({(0, 0): 1})
    assert sp_to_fourier(SPPoly.s() * SPPoly.sbar()) == FourierSymbol(
        {(0, 0): 2, (1, -1): 1, (-1, 1): 1})


def test_sp_to_fourier_against_sympy():
    z1, z2 = sympy.symbols("z1 z2")
    s, p = z1 + z2, z1 * z2
    sb, pb = 1 / z1 + 1 / z2, 1 / (z1 * z2)
    expr = sympy.expand(3 * s ** 2 * pb - 2j * p * sb + s * sb ** 2 + 5)
    expected = {}
    for term in sympy.Add.make_args(expr):
        coeff, rest = term.as_coeff_Mul()
        powers = rest.as_powers_dict()
        key = (int(powers.get(z1, 0)), int(powers.get(z2, 0)))
        expected[key] = expected.get(key, 0) + complex(coeff * (rest / (z1 ** key[0] * z2 ** key[1])))
    poly = (3 * SPPoly.s() ** 2 * SPPoly.pbar() - 2j * SPPoly.p() * SPPoly.sbar()
            + SPPoly.s() * SPPoly.sbar() ** 2 + 5)
    assert sp_to_fourier(poly).allclose(FourierSymbol(expected), atol=1e-12)


def test_product_examples():
    assert product(S_SYMBOL, FourierSymbol()) == FourierSymbol()
    assert product(P_SYMBOL, conjugate(P_SYMBOL)) == FourierSymbol({(0, 0): 1})
    assert product(S_SYMBOL, S_SYMBOL) == FourierSymbol({(2, 0): 1, (0, 2): 1, (1, 1): 2})


@given(symbols(), symbols())
def test_product_matches_convolution_oracle(f, g):
    expected = {k: v for k, v in multiply(f.coeffs, g.coeffs).items() if v != 0}
    fg = product(f, g)
    assert fg == FourierSymbol(expected)
    assert fg.bandwidth <= f.bandwidth + g.bandwidth


@given(symbols(max_beta=2), symbols(max_beta=2), symbols(max_beta=2))
def test_product_commutative_associative(f, g, h):
    # Gaussian-integer inputs keep every coefficient exact
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)


def test_conjugate_examples():
    assert conjugate(S_SYMBOL) == FourierSymbol({(-1, 0): 1, (0, -1): 1})
    assert conjugate(COBURN_SYMBOL) == COBURN_SYMBOL


@given(symbols())
def test_conjugate_involution(f):
    assert conjugate(conjugate(f)) == f


@given(symbols())
def test_conjugate_matches_pointwise(f):
    t = np.linspace(0, 2 * np.pi, 7)
    z1, z2 = np.exp(1j * t), np.exp(2j * t + 0.3j)
    assert np.allclose(conjugate(f)(z1, z2), np.conj(f(z1, z2)))


def test_is_analytic():
    assert is_analytic(S_SYMBOL)
    assert not is_analytic(conjugate(S_SYMBOL))
    assert not is_analytic(COBURN_SYMBOL)


def test_asymmetric_input_fails_loudly():
    with pytest.raises(ValueError, match="asymmetric"):
        FourierSymbol({(1, 0): 1})
    assert FourierSymbol({(1, 0): 2}, symmetrize=True) == FourierSymbol({(1, 0): 1, (0, 1): 1})


def test_zero_coefficients_not_stored():
    f = FourierSymbol({(0, 0): 0, (1, 1): 1})
    assert f.coeffs == {(1, 1): 1}
    assert (S_SYMBOL - S_SYMBOL).coeffs == {}


def test_sup_norm_examples():
    assert abs(sup_norm_estimate(S_SYMBOL, 512) - sup_s_symbol()) < 1e-4
    assert sup_norm_estimate(FourierSymbol.constant(3 - 4j), 16) == pytest.approx(5.0, abs=0)
    assert sup_norm_estimate(P_SYMBOL, 7) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError, match="aliasing risk"):
        sup_norm_estimate(COBURN_SYMBOL, 4)


@given(symbols(max_beta=2))
def test_sup_norm_monotone_under_dyadic_refinement(f):
    values = [sup_norm_estimate(f, g) for g in (8, 16, 32, 64)]
    assert all(a <= b + 1e-9 for a, b in zip(values, values[1:]))


def test_sup_norm_matches_direct_grid():
    f = FourierSymbol({(2, -1): 1 + 1j, (-1, 2): 1 + 1j, (0, 0): 0.5})
    t = 2 * np.pi * np.arange(24) / 24
    direct = np.abs(f(np.exp(1j * t)[:, None], np.exp(1j * t)[None, :])).max()
    assert sup_norm_estimate(f, 24) == pytest.approx(direct, rel=1e-12)


def test_json_round_trip(rng):
    f = random_symbol(rng, 3)
    text = json.dumps(symbol_to_json(f))
    assert symbol_from_json(text) == f


def test_json_symmetrize_mirrors_and_averages():
    once = {"format": "fourier", "symmetrize": True,
            "coefficients": [{"m": 2, "n": -2, "re": 1.0, "im": 0.0}]}
    assert symbol_from_json(once) == COBURN_SYMBOL
    both = {"format": "fourier", "symmetrize": True,
            "coefficients": [{"m": 1, "n": 0, "re": 1.0}, {"m": 0, "n": 1, "re": 3.0}]}
    assert symbol_from_json(both) == FourierSymbol({(1, 0): 2, (0, 1): 2})


def test_json_errors():
    with pytest.raises(ValueError, match="asymmetric"):
        symbol_from_json({"format": "fourier", "coefficients": [{"m": 1, "n": 0, "re": 1}]})
    with pytest.raises(ValueError, match="duplicate"):
        symbol_from_json({"format": "fourier", "coefficients": [{"m": 0, "n": 0, "re": 1}] * 2})
    with pytest.raises(ValueError, match="unknown symbol format"):
        symbol_from_json({"format": "spline"})


def test_json_sp_poly():
    data = {"format": "sp-poly", "terms": [{"s": 1, "re": 1.0}, {"sbar": 1, "re": 1.0}]}
    assert symbol_from_json(data) == S_SYMBOL + conjugate(S_SYMBOL)


def test_sp_poly_evaluation_consistent_with_fourier(rng):
    poly = SPPoly({(1, 0, 0, 1): 2, (0, 1, 1, 0): -1j, (2, 0, 0, 0): 1})
    z = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(2, 5)))
    s, p = z[0] + z[1], z[0] * z[1]
    assert np.allclose(poly(s, p), sp_to_fourier(poly)(z[0], z[1]))


def test_sp_poly_degree():
    assert (SPPoly.s() ** 2 * SPPoly.p()).degree == 4
    assert not SPPoly.sbar().is_analytic()
    with pytest.raises(ValueError):
        SPPoly({(-1, 0, 0, 0): 1})


def test_random_symbol_bandwidth(rng):
    for beta in range(4):
        f = random_symbol(rng, beta)
        assert f.bandwidth == beta
        assert all(f[(n, m)] == c for (m, n), c in f)
