import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from symtoep.lattice import AntiIndex, hardy_window
from symtoep.operators import T_p, T_s
from symtoep.spaces import (JACOBIAN_NORM_SQ, GammaPoint, HardyElement,
                            PointClass, VectorHardyElement, classify_point,
                            from_vector_model, hardy_norm_quadrature,
                            hardy_to_sp_poly, joint_eigen_residual,
                            sp_poly_to_hardy, symmetric_quotient,
                            szego_eval, szego_partial_sum, to_vector_model)
from symtoep.symbols import SPPoly

from conftest import analytic_sp_polys
from oracles import (kernel_closed_form, pullback_coefficients, quotient_poly,
                     torus_integral_jacobian, z1, z2)

s_sym, p_sym = sympy.symbols("s p")


def to_sympy(poly):
    return sum(c * s_sym ** i * p_sym ** j for (i, j, _, _), c in poly.terms.items())


def test_jacobian_constants():
    J = sympy.Matrix([z1 + z2, z1 * z2]).jacobian([z1, z2]).det()
    assert sympy.expand(J - (z1 - z2)) == 0
    assert torus_integral_jacobian() == pytest.approx(JACOBIAN_NORM_SQ, abs=1e-12)


def test_sp_poly_to_hardy_examples():
    assert sp_poly_to_hardy(SPPoly.constant(1)) == HardyElement({(1, 0): 1})
    assert sp_poly_to_hardy(SPPoly.s()) == HardyElement({(2, 0): 1})
    assert sp_poly_to_hardy(SPPoly.p()) == HardyElement({(2, 1): 1})
    with pytest.raises(ValueError, match="not analytic"):
        sp_poly_to_hardy(SPPoly.sbar())


@given(analytic_sp_polys())
def test_sp_poly_to_hardy_against_sympy(f):
    expected = HardyElement(pullback_coefficients(to_sympy(f)))
    assert sp_poly_to_hardy(f).allclose(expected, atol=1e-9)


def test_hardy_to_sp_poly_examples():
    assert hardy_to_sp_poly(HardyElement({(1, 0): 1})) == SPPoly.constant(1)
    assert hardy_to_sp_poly(HardyElement({(3, 0): 1})) == SPPoly.s() ** 2 - SPPoly.p()


@given(analytic_sp_polys(max_degree=5))
def test_round_trip(f):
    assert hardy_to_sp_poly(sp_poly_to_hardy(f)).allclose(f, atol=1e-12)


@pytest.mark.parametrize("m", range(13))
def test_quotient_recurrence(m):
    via_recurrence = sympy.expand(to_sympy(symmetric_quotient(m)).subs(
        {s_sym: z1 + z2, p_sym: z1 * z2}, simultaneous=True))
    assert sympy.expand(via_recurrence - quotient_poly(m)) == 0


def test_vector_model_examples():
    assert to_vector_model(HardyElement({(2, 1): 1})) == VectorHardyElement({(1, 1): 1})
    with pytest.raises(ValueError):
        VectorHardyElement({(0, 0): 1})


@given(analytic_sp_polys(), analytic_sp_polys())
def test_vector_model_unitary(f, g):
    hf, hg = sp_poly_to_hardy(f), sp_poly_to_hardy(g)
    vf, vg = to_vector_model(hf), to_vector_model(hg)
    assert from_vector_model(vf) == hf
    assert vf.norm() == pytest.approx(hf.norm(), rel=1e-12)
    inner_v = sum(c * np.conj(vg.coeffs.get(k, 0)) for k, c in vf.coeffs.items())
    assert inner_v == pytest.approx(hf.inner(hg), rel=1e-12, abs=1e-12)


@given(analytic_sp_polys())
def test_tp_intertwines_shift(f):
    D = 12
    w = hardy_window(D)
    h = sp_poly_to_hardy(f)
    image = HardyElement.from_array(w, T_p(D).entries @ h.to_array(w))
    assert to_vector_model(image) == to_vector_model(h).shift()


@given(analytic_sp_polys())
def test_multiplication_intertwining(f):
    D = 12
    w = hardy_window(D)
    x = sp_poly_to_hardy(f).to_array(w)
    for gen, op in ((SPPoly.p(), T_p(D)), (SPPoly.s(), T_s(D))):
        expected = sp_poly_to_hardy(gen * f).to_array(w)
        assert np.allclose(op.entries @ x, expected, atol=1e-12)


def test_quadrature_examples():
    assert hardy_norm_quadrature(SPPoly.constant(1), 0.99, 16) == pytest.approx(1, abs=2e-2)
    # closed form 2 r^2 / 2 for f = 1
    assert hardy_norm_quadrature(SPPoly.constant(1), 0.7, 16) == pytest.approx(0.49, rel=1e-12)
    assert hardy_norm_quadrature(SPPoly.s(), 0.999, 64) == pytest.approx(1, abs=1e-2)
    assert hardy_norm_quadrature(SPPoly(), 0.5, 8) == 0.0
    for r in (0.0, 1.0, 1.5):
        with pytest.raises(ValueError):
            hardy_norm_quadrature(SPPoly.s(), r, 64)
    with pytest.raises(ValueError):
        hardy_norm_quadrature(SPPoly.s() ** 4, 0.5, 8)


@given(analytic_sp_polys(max_degree=4))
def test_quadrature_monotone_and_exact(f):
    h = sp_poly_to_hardy(f)
    radii = (0.3, 0.6, 0.9)
    values = [hardy_norm_quadrature(f, r, 32) for r in radii]
    assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))
    # the uniform grid integrates trigonometric polynomials of this degree exactly
    for r, v in zip(radii, values):
        exact = sum(abs(c) ** 2 * r ** (2 * (k.a + k.b)) for k, c in h.coeffs.items())
        assert v == pytest.approx(exact, rel=1e-10, abs=1e-14)


def test_classify_point():
    assert classify_point(GammaPoint(2, 1)) is PointClass.IN_B_GAMMA
    assert classify_point(GammaPoint(0, 0)) is PointClass.IN_G
    assert classify_point(GammaPoint(3, 1)) is PointClass.OUTSIDE
    # z1 = 1, z2 = 0.5
    assert classify_point(GammaPoint(1.5, 0.5)) is PointClass.IN_GAMMA_BOUNDARYISH
    with pytest.raises(ValueError):
        classify_point(GammaPoint(0, 0), tol=0)


@given(st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi))
def test_torus_points_in_b_gamma(t1, t2):
    a, b = np.exp(1j * t1), np.exp(1j * t2)
    assert classify_point(GammaPoint(a + b, a * b)) is PointClass.IN_B_GAMMA


def test_szego_examples():
    zero = GammaPoint(0, 0)
    assert szego_eval(zero, zero) == 1
    assert szego_eval(GammaPoint(0.5, 0), GammaPoint(0.5, 0)) == pytest.approx(4 / 3, rel=1e-14)
    w1, w2 = GammaPoint(0.5 + 0.1j, 0.2), GammaPoint(0.3, 0.1 - 0.05j)
    assert szego_eval(w1, w2) == pytest.approx(np.conj(szego_eval(w2, w1)), abs=1e-12)
    assert szego_eval(w1, w2) == pytest.approx(kernel_closed_form(w1.s, w1.p, w2.s, w2.p),
                                               abs=1e-14)
    with pytest.raises(ValueError):
        szego_eval(GammaPoint(2, 1), zero)


def test_szego_partial_sums():
    zero = GammaPoint(0, 0)
    for D in (1, 5, 12):
        assert szego_partial_sum(zero, zero, D) == 1
    w1, w2 = GammaPoint(0.5, 0.2), GammaPoint(0.3, 0.1)
    assert abs(szego_partial_sum(w1, w2, 40) - szego_eval(w1, w2)) < 1e-8
    sums = [szego_partial_sum(w1, w1, D).real for D in (2, 4, 8, 16)]
    assert all(a <= b for a, b in zip(sums, sums[1:]))


def test_basis_values_are_polynomial_evaluations():
    w = GammaPoint(0.3 - 0.2j, 0.1j)
    from symtoep.spaces import basis_values
    window = hardy_window(6)
    vals = basis_values(w, window)
    for i, idx in enumerate(window):
        poly = hardy_to_sp_poly(HardyElement({idx: 1}))
        assert vals[i] == pytest.approx(poly(w.s, w.p), abs=1e-14)


def test_joint_eigen_residuals():
    assert joint_eigen_residual(GammaPoint(0, 0), 6) == (0.0, 0.0)
    w = GammaPoint(0.4, 0.1)
    res40 = joint_eigen_residual(w, 40)
    assert max(res40) < 1e-6
    res20 = joint_eigen_residual(w, 20)
    assert res40[0] < res20[0] and res40[1] <= res20[1]
