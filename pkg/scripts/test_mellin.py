"""
Tests for Mellin transforms, multipliers and contour inversion
"""

import logging
import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import special

from laguerre.errors import ParameterDomainError, StripError
from laguerre.models.catalog import ExpDecay, GridFunction, SmoothBump
from laguerre.models.schemas import MellinContour, MultiplierDescriptor, MultiplierKind
from laguerre.services import kernels, mellin, operators


def descriptor(kind: MultiplierKind, alpha: float) -> MultiplierDescriptor:
    return MultiplierDescriptor(kind=kind, alpha=alpha)


class TestForward:
    def test_closed_form_matches_quadrature(self, exp_decay):
        s = complex(1.5, 2.0)
        closed = mellin.mellin_forward(exp_decay, s, method="closed")
        numeric = mellin.mellin_forward(exp_decay, s, method="quadrature")
        assert abs(closed - complex(special.gamma(s))) <= 1e-12 * abs(closed)
        assert abs(numeric - closed) <= 1e-8 * abs(closed)

    @pytest.mark.parametrize("s", [0.5, complex(2.0, -3.0), complex(-1.5, 1.0)])
    def test_bump_closed_form(self, s):
        bump = SmoothBump(a=1.0, b=2.0)
        closed = mellin.mellin_forward(bump, s, method="closed")
        numeric = mellin.mellin_forward(bump, s, method="quadrature")
        assert abs(numeric - closed) <= 1e-10 * abs(closed)

    def test_outside_fundamental_strip(self, exp_decay):
        with pytest.raises(StripError):
            mellin.mellin_forward(exp_decay, -0.5)

    def test_sampled_transform(self, exp_decay):
        grid = GridFunction.sample(exp_decay, 1.0, 64, 1.0)
        value = mellin.sampled_transform(grid, 1.0)
        assert value.real == pytest.approx(1.0 - math.exp(-1.0), rel=1e-8)


class TestMultipliers:
    def test_strips_and_shifts(self):
        assert descriptor(MultiplierKind.LAG_INT_LEFT, 0.6).strip == (-math.inf, pytest.approx(0.4))
        assert descriptor(MultiplierKind.LAG_DER_LEFT, 0.6).strip == (-math.inf, pytest.approx(1.6))
        assert descriptor(MultiplierKind.LAG_INT_RIGHT, 0.6).strip == (0.0, math.inf)
        assert descriptor(MultiplierKind.LAG_INT_LEFT, 0.6).shift == 0.6
        assert descriptor(MultiplierKind.LAG_DER_RIGHT, 0.6).shift == -0.6

    def test_rejects_non_positive_order(self):
        with pytest.raises(ValidationError):
            MultiplierDescriptor(kind=MultiplierKind.LAG_INT_LEFT, alpha=0.0)

    def test_value_on_real_axis_is_c_plus(self):
        md = descriptor(MultiplierKind.LAG_INT_LEFT, 0.6)
        assert complex(mellin.multiplier_value(md, -1.5)).real == pytest.approx(kernels.c_plus(0.6, -1.5), rel=1e-8)

    @pytest.mark.parametrize("alpha,beta", [(0.6, 0.9), (1.3, 0.4)])
    def test_semigroup(self, alpha, beta):
        s = -1.0 + 1j * np.linspace(-30.0, 30.0, 61)
        product, shift = mellin.compose_multipliers(
            descriptor(MultiplierKind.LAG_INT_LEFT, alpha), descriptor(MultiplierKind.LAG_INT_LEFT, beta)
        )
        combined = descriptor(MultiplierKind.LAG_INT_LEFT, alpha + beta)
        np.testing.assert_allclose(product(s), mellin.multiplier_value(combined, s), rtol=1e-12)
        assert shift == pytest.approx(combined.shift)

    @pytest.mark.parametrize("alpha,beta", [(0.6, 0.9), (1.2, 0.5)])
    def test_right_semigroup(self, alpha, beta):
        """Gamma(s)^2/Gamma(s+a)^2 times Gamma(s+a)^2/Gamma(s+a+b)^2"""
        s = 0.5 + 1j * np.linspace(-30.0, 30.0, 61)
        product, shift = mellin.compose_multipliers(
            descriptor(MultiplierKind.LAG_INT_RIGHT, alpha), descriptor(MultiplierKind.LAG_INT_RIGHT, beta)
        )
        combined = descriptor(MultiplierKind.LAG_INT_RIGHT, alpha + beta)
        np.testing.assert_allclose(product(s), mellin.multiplier_value(combined, s), rtol=1e-12)
        assert shift == pytest.approx(combined.shift)

    @pytest.mark.parametrize("alpha", [0.6, 1.3])
    def test_derivative_cancels_integral(self, alpha):
        tau = np.linspace(-30.0, 30.0, 61)
        left, shift = mellin.compose_multipliers(
            descriptor(MultiplierKind.LAG_DER_LEFT, alpha), descriptor(MultiplierKind.LAG_INT_LEFT, alpha)
        )
        np.testing.assert_allclose(left(0.5 * (1.0 - alpha) + 1j * tau), 1.0, rtol=1e-12)
        assert shift == 0.0
        right, _ = mellin.compose_multipliers(
            descriptor(MultiplierKind.LAG_DER_RIGHT, alpha), descriptor(MultiplierKind.LAG_INT_RIGHT, alpha)
        )
        np.testing.assert_allclose(right(alpha + 0.5 + 1j * tau), 1.0, rtol=1e-12)

    def test_algebraic_decay(self):
        """|M(nu + i tau)| ~ |tau|^(-2 alpha) for large |tau|"""
        md = descriptor(MultiplierKind.LAG_INT_LEFT, 0.6)
        tau = np.geomspace(1e2, 1e3, 20)
        scaled = np.abs(np.asarray(mellin.multiplier_value(md, 0.2 + 1j * tau))) * tau**1.2
        assert scaled.max() / scaled.min() < 1.05

    def test_table(self):
        md = descriptor(MultiplierKind.LAG_INT_LEFT, 0.6)
        tau, values = mellin.multiplier_table(md, -1.5, 10.0, 41)
        assert tau.shape == values.shape == (41,)
        assert tau[0] == -10.0 and tau[-1] == 10.0
        np.testing.assert_allclose(values[::-1], np.conj(values), rtol=1e-12)

    def test_table_outside_strip(self):
        with pytest.raises(StripError):
            mellin.multiplier_table(descriptor(MultiplierKind.LAG_INT_LEFT, 0.6), 0.5, 10.0)


class TestInversion:
    def test_gamma_inverts_to_exp(self):
        x = np.array([0.5, 1.0, 3.0])
        got = mellin.mellin_inverse(lambda s: special.gamma(s), MellinContour(nu=1.0), x)
        np.testing.assert_allclose(got, np.exp(-x), rtol=1e-8)

    def test_round_trip_of_exp(self, exp_decay):
        x = np.array([0.5, 1.0, 2.0])
        values, errors = mellin.mellin_inverse_with_error(
            mellin.forward_transform(exp_decay), MellinContour(nu=1.0), x
        )
        np.testing.assert_allclose(values, np.exp(-x), rtol=1e-6)
        assert errors.shape == x.shape
        assert errors.max() < mellin.INVERSION_WARN

    def test_forward_transform_is_vectorized(self, exp_decay):
        s = np.array([[1.5 + 2.0j, 0.5], [2.0, 1.0 - 1.0j]])
        got = mellin.forward_transform(exp_decay)(s)
        assert got.shape == s.shape
        np.testing.assert_allclose(got, special.gamma(s), rtol=1e-12)
        numeric = mellin.forward_transform(exp_decay, method="quadrature")(s)
        np.testing.assert_allclose(numeric, got, rtol=1e-8)

    def test_forward_transform_outside_strip(self, exp_decay):
        with pytest.raises(StripError):
            mellin.forward_transform(exp_decay)(np.array([0.5, -0.5 + 1.0j]))

    def test_inversion_error_is_logged(self, exp_decay, monkeypatch, caplog):
        monkeypatch.setattr(mellin, "INVERSION_WARN", -1.0)
        md = descriptor(MultiplierKind.LAG_INT_LEFT, 0.6)
        with caplog.at_level(logging.WARNING, logger="laguerre.services.mellin"):
            values, errors = mellin.apply_multiplier_with_error(exp_decay, md, None, np.array([1.0]))
        assert values.shape == errors.shape == (1,)
        assert "Mellin inversion error estimate" in caplog.text

    @pytest.mark.parametrize("alpha", [0.6, 1.0])
    def test_route_agreement_left(self, exp_decay, alpha):
        x = np.array([0.5, 1.0])
        md = descriptor(MultiplierKind.LAG_INT_LEFT, alpha)
        spectral = np.asarray(mellin.apply_multiplier(exp_decay, md, None, x))
        direct = np.asarray(operators.laguerre_L_left(exp_decay, alpha, x))
        np.testing.assert_allclose(spectral, direct, rtol=1e-6)

    def test_right_integral_of_exp(self, exp_decay):
        md = descriptor(MultiplierKind.LAG_INT_RIGHT, 1.0)
        assert mellin.apply_multiplier(exp_decay, md, None, 1.0) == pytest.approx(special.exp1(1.0), rel=1e-7)

    def test_derivative_route(self, exp_decay):
        x = np.array([0.5, 1.0])
        spectral = np.asarray(mellin.apply_derivative_multiplier(exp_decay, 0.6, "left", x))
        direct = operators.laguerre_D_left(exp_decay, 0.6, x).values
        np.testing.assert_allclose(spectral, direct, rtol=1e-4)

    def test_default_contour_is_inside_strip(self, exp_decay):
        md = descriptor(MultiplierKind.LAG_INT_LEFT, 0.6)
        contour = mellin.default_contour(md, exp_decay)
        assert -0.6 < contour.nu < 0.4

    def test_contour_outside_strip(self, exp_decay):
        md = descriptor(MultiplierKind.LAG_INT_LEFT, 0.6)
        with pytest.raises(StripError):
            mellin.apply_multiplier(exp_decay, md, MellinContour(nu=0.5), 1.0)

    def test_contour_on_pole(self, exp_decay):
        md = descriptor(MultiplierKind.LAG_INT_LEFT, 0.6)
        with pytest.raises(StripError):
            mellin.check_contour(md, exp_decay, MellinContour(nu=0.4 - 1e-4))

    def test_needs_closed_form(self, exp_decay):
        md = descriptor(MultiplierKind.LAG_INT_LEFT, 0.6)
        lifted = GridFunction.sample(exp_decay, 1.0, 32, 1.0)
        with pytest.raises(ParameterDomainError):
            mellin.apply_multiplier(lifted, md, None, 0.5)

    def test_contour_validation(self):
        with pytest.raises(ValidationError):
            MellinContour(nu=0.5, T=1.0, h=0.5)


def test_parseval(exp_decay):
    """Integral of e^-2u over (0, inf) is 1/2"""
    direct, spectral = mellin.parseval_pair(exp_decay, exp_decay, MellinContour(nu=0.5))
    assert direct == pytest.approx(0.5, rel=1e-10)
    assert spectral == pytest.approx(0.5, rel=1e-8)


def test_parseval_strip_check(exp_decay):
    with pytest.raises(StripError):
        mellin.parseval_pair(exp_decay, exp_decay, MellinContour(nu=1.5))


def test_exp_rate_scaling():
    f = ExpDecay(rate=2.0)
    assert complex(f.mellin(1.0)).real == pytest.approx(0.5, rel=1e-14)
