"""
Tests for the Volterra solver: Neumann series, resolvent kernel and product integration
"""

import math

import mpmath
import numpy as np
import pytest
from pydantic import ValidationError
from scipy import special

from laguerre.errors import (
    ConvergenceDiskError,
    NonConvergenceError,
    ParameterDomainError,
    TruncationBudgetError,
)
from laguerre.models.catalog import GridFunction, Monomial, Polynomial, SmoothBump
from laguerre.models.schemas import NeumannSolveConfig, ResolventForm
from laguerre.services import volterra

BESSEL_GRID = GridFunction.graded_nodes(1.0, 64, 2.0)


def monomial_solution(x, alpha, lam, terms=200):
    """f = sum lambda^n (Gamma(2)/Gamma(2 + alpha n))^2 x^(1 + alpha n) for g = x"""
    n = np.arange(terms)[:, None]
    coef = np.exp(-2.0 * special.gammaln(2.0 + alpha * n))
    return np.sum(lam**n * coef * x[None, :] ** (1.0 + alpha * n), axis=0)


class TestConfig:
    def test_disk_radius(self):
        cfg = NeumannSolveConfig(alpha=1.0, lam=0.5)
        # C+(1, -1.5) = (Gamma(1.5)/Gamma(2.5))^2 = 4/9
        assert cfg.disk_radius == pytest.approx(2.25, rel=1e-8)

    def test_outside_disk_is_rejected(self):
        with pytest.raises(ValidationError, match="required"):
            NeumannSolveConfig(alpha=1.0, lam=3.0)

    def test_alias(self):
        cfg = NeumannSolveConfig.model_validate({"alpha": 0.75, "lambda": complex(0.1, 0.1)})
        assert cfg.lam == complex(0.1, 0.1)

    def test_order_above_half(self):
        with pytest.raises(ValidationError):
            NeumannSolveConfig(alpha=0.5, lam=0.1)

    def test_weight_constraints(self):
        with pytest.raises(ValidationError):
            NeumannSolveConfig(alpha=0.75, lam=0.1, nu=0.5)

    def test_solvers_recheck_disk(self, unit_constant):
        cfg = NeumannSolveConfig.model_construct(
            alpha=1.0, lam=3.0, nu=-1.5, length=1.0, tol=1e-10, max_terms=400
        )
        with pytest.raises(ConvergenceDiskError):
            volterra.neumann_solve(unit_constant, cfg, BESSEL_GRID)


class TestZeroCoupling:
    def test_neumann(self, linear):
        cfg = NeumannSolveConfig(alpha=0.75, lam=0.0)
        f = volterra.neumann_solve(linear, cfg, BESSEL_GRID)
        np.testing.assert_array_equal(f.values, BESSEL_GRID)

    def test_direct(self, linear):
        cfg = NeumannSolveConfig(alpha=0.75, lam=0.0)
        f = volterra.direct_solve(linear, cfg, n=32)
        np.testing.assert_allclose(f.values, f.nodes, rtol=1e-14)


class TestBessel:
    """alpha = 1, g = 1 has the solution I0(2 sqrt(lambda x))"""

    @pytest.mark.parametrize("lam", [0.5, 1.0])
    def test_neumann(self, unit_constant, lam):
        f = volterra.neumann_solve(unit_constant, NeumannSolveConfig(alpha=1.0, lam=lam), BESSEL_GRID)
        expected = special.iv(0, 2.0 * np.sqrt(lam * BESSEL_GRID))
        np.testing.assert_allclose(f.values, expected, rtol=1e-6)

    @pytest.mark.parametrize("lam", [0.5, 1.0])
    def test_resolvent(self, unit_constant, lam):
        f = volterra.resolvent_solve(unit_constant, NeumannSolveConfig(alpha=1.0, lam=lam), BESSEL_GRID)
        expected = special.iv(0, 2.0 * np.sqrt(lam * BESSEL_GRID))
        np.testing.assert_allclose(f.values, expected, rtol=1e-6)

    def test_direct(self, unit_constant):
        f = volterra.direct_solve(unit_constant, NeumannSolveConfig(alpha=1.0, lam=1.0), n=1024)
        expected = special.iv(0, 2.0 * np.sqrt(f.nodes))
        np.testing.assert_allclose(f.values, expected, rtol=1e-4)


class TestMonomialSource:
    def test_neumann_matches_closed_series(self, linear):
        cfg = NeumannSolveConfig(alpha=0.75, lam=0.2)
        f = volterra.neumann_solve(linear, cfg, BESSEL_GRID)
        np.testing.assert_allclose(f.values, monomial_solution(BESSEL_GRID, 0.75, 0.2), rtol=1e-8)

    def test_complex_coupling(self, linear):
        lam = complex(0.1, 0.15)
        cfg = NeumannSolveConfig(alpha=0.75, lam=lam)
        f = volterra.neumann_solve(linear, cfg, BESSEL_GRID)
        assert np.iscomplexobj(f.values)
        np.testing.assert_allclose(f.values, monomial_solution(BESSEL_GRID, 0.75, lam), rtol=1e-8)

    def test_residual_is_small(self, linear):
        cfg = NeumannSolveConfig(alpha=0.75, lam=0.2)
        f = volterra.neumann_solve(linear, cfg, BESSEL_GRID)
        assert volterra.residual(f, linear, cfg).norm(0.0, math.inf) < 10.0 * cfg.tol


ROUTE_SOURCES = [Polynomial(coefficients=(1.0,)), Monomial(mu=1.0), SmoothBump(a=0.2, b=0.8)]


@pytest.mark.parametrize("alpha,lam,length", [(1.0, 0.5, 1.0), (0.75, 0.2, 1.0), (0.6, 0.1, 0.5)])
@pytest.mark.parametrize("g", ROUTE_SOURCES, ids=lambda g: g.descriptor)
def test_three_routes_agree(alpha, lam, length, g):
    cfg = NeumannSolveConfig(alpha=alpha, lam=lam, length=length, tol=1e-9)
    direct = volterra.direct_solve(g, cfg, n=128)
    neumann = volterra.neumann_solve(g, cfg, direct.nodes)
    resolvent = volterra.resolvent_solve(g, cfg, direct.nodes)
    assert neumann.sup_distance(resolvent) < 1e-4
    assert neumann.sup_distance(direct) < 1e-4
    assert resolvent.sup_distance(direct) < 1e-4
    for f in (direct, neumann, resolvent):
        assert volterra.residual(f, g, cfg).norm(0.0, math.inf) < 10.0 * cfg.tol


def test_direct_solve_stops_on_correction_budget(linear, monkeypatch):
    monkeypatch.setattr(volterra, "MAX_CORRECTIONS", 0)
    cfg = NeumannSolveConfig(alpha=0.75, lam=0.2, tol=1e-14)
    with pytest.raises(TruncationBudgetError):
        volterra.direct_solve(linear, cfg, n=32)


class TestResolventKernel:
    def test_single_and_double_series_agree(self):
        cfg = NeumannSolveConfig(alpha=0.75, lam=0.2)
        single = volterra.resolvent_kernel(1.0, 0.4, cfg, ResolventForm.SINGLE_SERIES)
        double = volterra.resolvent_kernel(1.0, 0.4, cfg, ResolventForm.DOUBLE_SERIES)
        assert double == pytest.approx(single, rel=1e-8)

    def test_array_input(self):
        cfg = NeumannSolveConfig(alpha=1.1, lam=0.2)
        u = np.array([0.1, 0.5, 0.9])
        single = np.asarray(volterra.resolvent_kernel(1.0, u, cfg))
        double = np.asarray(volterra.resolvent_kernel(1.0, u, cfg, ResolventForm.DOUBLE_SERIES))
        np.testing.assert_allclose(double, single, rtol=1e-8)

    def test_first_term_at_alpha_one(self):
        """K_1(e, 1) = ln e = 1"""
        cfg = NeumannSolveConfig(alpha=1.0, lam=0.5)
        assert volterra.resolvent_terms(math.e, 1.0, cfg, 1)[0] == pytest.approx(0.5, rel=1e-12)

    def test_outside_triangle(self):
        cfg = NeumannSolveConfig(alpha=0.75, lam=0.2)
        with pytest.raises(ParameterDomainError):
            volterra.resolvent_kernel(0.5, 0.5, cfg)
        with pytest.raises(ParameterDomainError):
            volterra.resolvent_kernel(0.5, np.array([0.1, 0.7]), cfg)

    @pytest.mark.parametrize("x,u", [(1.0, 0.4), (0.5, 0.1), (0.9, 0.8)])
    def test_remainder_majorant(self, x, u):
        cfg = NeumannSolveConfig(alpha=0.75, lam=0.2)
        terms = volterra.resolvent_terms(x, u, cfg, 40)
        for n in (1, 2, 4):
            assert abs(complex(np.sum(terms[n:]))) <= volterra.resolvent_remainder_bound(x, u, cfg, n)

    def test_iterated_kernel_of_high_order(self):
        """u^(beta-1) underflows and k+(x/u) overflows on their own here"""
        x, u, beta = 100.0, 1e-17, 40.0
        b = mpmath.mpf(beta)
        v = mpmath.mpf(x) / mpmath.mpf(u)
        k_plus = (v - 1) ** (2 * b - 1) * mpmath.hyp2f1(b, b, 2 * b, 1 - v) / mpmath.gamma(2 * b)
        expected = mpmath.mpf(u) ** (b - 1) * k_plus
        got = float(volterra.iterated_kernel(x, u, beta)[0])
        assert math.isfinite(got)
        assert got == pytest.approx(float(expected), rel=1e-8)

    def test_iterated_kernel_vanishes_above_diagonal(self):
        np.testing.assert_array_equal(volterra.iterated_kernel(0.5, np.array([0.5, 0.7]), 1.5), [0.0, 0.0])


class TestLegendreRoute:
    def test_unit_order(self):
        assert volterra.legendre_kernel(math.e, 1.0, 1.0) == pytest.approx(1.0, rel=1e-10)

    @pytest.mark.parametrize("beta", [0.6, 1.5, 2.75])
    def test_matches_iterated_kernel(self, beta):
        x, u = 0.8, 0.3
        expected = float(volterra.iterated_kernel(x, u, beta)[0])
        assert volterra.legendre_kernel(x, u, beta) == pytest.approx(expected, rel=1e-7)

    def test_non_positive_order(self):
        with pytest.raises(NonConvergenceError):
            volterra.legendre_kernel(1.0, 0.5, 0.0)

    def test_ordering(self):
        with pytest.raises(ValidationError):
            volterra.legendre_kernel(0.5, 1.0, 1.0)
