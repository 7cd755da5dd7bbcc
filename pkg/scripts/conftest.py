"""
Shared fixtures for the test scripts
"""

import logging

import mpmath
import pytest

from laguerre.models.catalog import ExpDecay, Monomial, Polynomial, SmoothBump

logging.basicConfig(level=logging.INFO, format='[%(levelname)s] %(name)s: %(message)s')

mpmath.mp.dps = 30


@pytest.fixture
def exp_decay() -> ExpDecay:
    return ExpDecay(rate=1.0)


@pytest.fixture
def unit_constant() -> Polynomial:
    return Polynomial(coefficients=(1.0,))


@pytest.fixture
def linear() -> Monomial:
    return Monomial(mu=1.0)


@pytest.fixture
def bump_pair() -> tuple[SmoothBump, SmoothBump]:
    """Disjoint bumps with the first to the right of the second"""
    return SmoothBump(a=3.0, b=4.0), SmoothBump(a=1.0, b=2.0)
