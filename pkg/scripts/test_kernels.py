"""
Tests for the kernels k+ and k-, their Mellin transforms and norms
"""

import math

import mpmath
import numpy as np
import pytest

from laguerre.errors import ParameterDomainError
from laguerre.services import kernels
from laguerre.services.specfun import gamma_ratio_sq
from laguerre.services.volterra import legendre_kernel


def mp_k_plus(alpha: float, v: float) -> float:
    a = mpmath.mpf(alpha)
    return float((v - 1) ** (2 * a - 1) * mpmath.hyp2f1(a, a, 2 * a, 1 - mpmath.mpf(v)) / mpmath.gamma(2 * a))


def mp_k_minus(alpha: float, v: float) -> float:
    a = mpmath.mpf(alpha)
    v = mpmath.mpf(v)
    return float(v ** (-a) * (1 - v) ** (2 * a - 1) * mpmath.hyp2f1(a, a, 2 * a, 1 - 1 / v) / mpmath.gamma(2 * a))


def mp_k_minus_mp(alpha: float, v):
    a = mpmath.mpf(alpha)
    return (1 - v) ** (2 * a - 1) * mpmath.hyp2f1(a, a, 2 * a, 1 - v) / mpmath.gamma(2 * a)


@pytest.mark.parametrize("alpha", [0.55, 0.75, 1.3, 2.5])
@pytest.mark.parametrize("v", [1.0001, 1.3, 2.0, 7.5, 1e3])
def test_k_plus_against_mpmath(alpha, v):
    ke = kernels.kernel_eval(alpha)
    assert float(kernels.k_plus(ke, v)) == pytest.approx(mp_k_plus(alpha, v), rel=1e-10)


@pytest.mark.parametrize("alpha", [0.55, 0.75, 1.3, 2.5])
@pytest.mark.parametrize("v", [1e-6, 0.01, 0.3, 0.9, 0.9999])
def test_k_minus_against_mpmath(alpha, v):
    ke = kernels.kernel_eval(alpha)
    assert float(kernels.k_minus(ke, v)) == pytest.approx(mp_k_minus(alpha, v), rel=1e-10)


def test_kernels_vanish_outside_support():
    ke = kernels.kernel_eval(0.8)
    assert float(kernels.k_plus(ke, 0.5)) == 0.0
    assert float(kernels.k_plus(ke, 1.0)) == 0.0
    assert float(kernels.k_minus(ke, 2.0)) == 0.0


def test_kernels_reject_non_positive_argument():
    ke = kernels.kernel_eval(0.8)
    with pytest.raises(ParameterDomainError):
        kernels.k_plus(ke, 0.0)
    with pytest.raises(ParameterDomainError):
        kernels.k_minus(ke, -1.0)


def test_alpha_one_reduces_to_logarithm():
    ke = kernels.kernel_eval(1.0)
    v = np.geomspace(1.001, 1e4, 30)
    np.testing.assert_allclose(kernels.k_plus(ke, v), np.log(v), rtol=1e-12)
    np.testing.assert_allclose(kernels.k_minus(ke, 1.0 / v), np.log(v), rtol=1e-12)


def test_alpha_one_weight_path_matches_logarithm():
    """The generic weight evaluation agrees with the special-cased logarithm"""
    ke = kernels.kernel_eval(1.0)
    t = np.array([1e-6, 0.2, 0.5, 0.9])
    np.testing.assert_allclose(ke.weight(t), -np.log(t), rtol=1e-12)


@pytest.mark.parametrize("alpha", [0.55, 0.75, 1.3, 2.5])
def test_positivity_over_eight_decades(alpha):
    ke = kernels.kernel_eval(alpha)
    assert np.all(np.asarray(kernels.k_plus(ke, 1.0 + np.geomspace(1e-4, 1e4, 100))) > 0)
    assert np.all(np.asarray(kernels.k_minus(ke, np.geomspace(1e-8, 1.0 - 1e-9, 100))) > 0)


class TestKernelMellin:
    @pytest.mark.parametrize("alpha", [0.6, 1.25])
    @pytest.mark.parametrize("tau", [0.0, 1.0, 5.0])
    def test_plus_transform_is_gamma_ratio(self, alpha, tau):
        s = complex(1.0 - alpha - 0.2, tau)
        value = kernels.kernel_mellin(kernels.kernel_eval(alpha), s, "plus")
        expected = complex(gamma_ratio_sq(1.0 - alpha - s, 1.0 - s))
        assert abs(value - expected) <= 1e-6 * abs(expected)

    @pytest.mark.parametrize("alpha", [0.6, 1.25])
    @pytest.mark.parametrize("tau", [0.0, 1.0, 5.0])
    def test_minus_transform_is_gamma_ratio(self, alpha, tau):
        s = complex(0.3, tau)
        value = kernels.kernel_mellin(kernels.kernel_eval(alpha), s, "minus")
        expected = complex(gamma_ratio_sq(s, s + alpha))
        assert abs(value - expected) <= 1e-6 * abs(expected)

    def test_outside_strip(self):
        ke = kernels.kernel_eval(0.6)
        with pytest.raises(ParameterDomainError):
            kernels.kernel_mellin(ke, 0.5, "plus")
        with pytest.raises(ParameterDomainError):
            kernels.kernel_mellin(ke, -0.1, "minus")


class TestConstants:
    def test_c_plus_closed_form(self):
        assert kernels.c_plus(1.0, -0.5) == pytest.approx(4.0, rel=1e-8)

    def test_c_minus_closed_form(self):
        """C-(1, 2) = (Gamma(2)/Gamma(3))^2 = 1/4"""
        assert kernels.c_minus(1.0, 2.0) == pytest.approx(0.25, rel=1e-8)
        assert kernels.c_minus(1.0, 1.0) == pytest.approx(1.0, rel=1e-8)

    def test_c_minus_against_mpmath(self):
        alpha, nu = 0.6, 0.5
        expected = mpmath.quad(lambda v: mp_k_minus_mp(alpha, v) * v ** (nu - 1), [0, 0.5, 1])
        assert kernels.c_minus(alpha, nu) == pytest.approx(float(expected), rel=1e-8)

    @pytest.mark.parametrize("alpha,nu", [(0.6, -1.5), (0.75, 0.1), (1.3, -0.8)])
    def test_c_plus_general(self, alpha, nu):
        expected = math.exp(2.0 * (math.lgamma(1.0 - alpha - nu) - math.lgamma(1.0 - nu)))
        assert kernels.c_plus(alpha, nu) == pytest.approx(expected, rel=1e-8)

    def test_c_plus_requires_strip(self):
        with pytest.raises(ParameterDomainError):
            kernels.c_plus(0.6, 0.5)
        with pytest.raises(ParameterDomainError):
            kernels.c_minus(0.6, 0.0)

    def test_norm_at_r_one_is_constant(self):
        assert kernels.kernel_norm(0.75, -0.5, 1.0) == pytest.approx(kernels.c_plus(0.75, -0.5), rel=1e-12)

    def test_norm_r_two_against_quadrature(self):
        alpha, nu, r = 1.0, -0.5, 2.0
        # k+ = ln v at alpha = 1; integral of ln(v)^2 v^(-2) over (1, inf) is 2
        assert kernels.kernel_norm(alpha, nu, r) == pytest.approx(math.sqrt(2.0), rel=1e-6)

    def test_norm_minus_side(self):
        alpha, nu, r = 1.0, 1.0, 2.0
        # integral of ln(v)^2 v over (0, 1) is 1/4
        assert kernels.kernel_norm(alpha, nu, r, "minus") == pytest.approx(0.5, rel=1e-6)


@pytest.mark.parametrize("alpha", [0.75, 1.3])
@pytest.mark.parametrize("x", [1.5, 4.0, 50.0])
def test_legendre_integral_identity(alpha, x):
    ke = kernels.kernel_eval(alpha)
    assert legendre_kernel(x, 1.0, alpha) == pytest.approx(float(kernels.k_plus(ke, x)), rel=1e-7)


@pytest.mark.parametrize("alpha,v", [(0.75, 2.0), (30.0, 1e17), (150.0, 1e12)])
def test_log_k_plus_beyond_float_range(alpha, v):
    """(v - 1)^(2 alpha - 1) alone overflows for the large orders"""
    a = mpmath.mpf(alpha)
    vv = mpmath.mpf(v)
    k_plus = (vv - 1) ** (2 * a - 1) * mpmath.hyp2f1(a, a, 2 * a, 1 - vv) / mpmath.gamma(2 * a)
    expected = mpmath.log(k_plus)
    got = float(kernels.log_k_plus(kernels.kernel_eval(alpha), v)[0])
    assert got == pytest.approx(float(expected), rel=1e-9)


def test_log_k_plus_at_alpha_one():
    v = np.array([1.5, math.e, 1e20])
    np.testing.assert_allclose(kernels.log_k_plus(kernels.kernel_eval(1.0), v), np.log(np.log(v)), rtol=1e-14)


def test_log_k_plus_support():
    with pytest.raises(ParameterDomainError):
        kernels.log_k_plus(kernels.kernel_eval(0.8), 1.0)
