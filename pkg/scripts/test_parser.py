"""
Tests for the function descriptor parser and the catalog metadata
"""

import math

import pytest

from laguerre.errors import ParameterDomainError
from laguerre.models.catalog import ExpDecay, Monomial, Polynomial, SmoothBump
from laguerre.parser import DescriptorParser, parse_descriptor


@pytest.mark.parametrize(
    "descriptor,expected",
    [
        ("monomial:1.5", Monomial(mu=1.5)),
        ("exp:2", ExpDecay(rate=2.0)),
        ("EXP : 0.5", ExpDecay(rate=0.5)),
        ("bump:1,2", SmoothBump(a=1.0, b=2.0, order=3)),
        ("bump:0,1,5", SmoothBump(a=0.0, b=1.0, order=5)),
        ("poly:0,1,-2e-1", Polynomial(coefficients=(0.0, 1.0, -0.2))),
        ("const:3", Polynomial(coefficients=(3.0,))),
    ],
)
def test_valid_descriptors(descriptor, expected):
    assert parse_descriptor(descriptor) == expected


@pytest.mark.parametrize(
    "descriptor",
    [
        "monomial",
        "gauss:1",
        "exp:",
        "exp:abc",
        "exp:-1",
        "monomial:1,2",
        "bump:2,1",
        "bump:1,2,2.5",
        "poly:0,0",
    ],
)
def test_invalid_descriptors(descriptor):
    with pytest.raises(ParameterDomainError):
        parse_descriptor(descriptor)


def test_unknown_kind_lists_known_kinds():
    with pytest.raises(ParameterDomainError, match="bump, const, exp, monomial, poly"):
        DescriptorParser().parse("gauss:1")


def test_descriptor_round_trip():
    for text in ("monomial:1.5", "exp:2", "bump:1,2,3", "poly:0,1,2"):
        assert parse_descriptor(text).descriptor == text


class TestCatalogMetadata:
    def test_monomial_strip_is_empty(self):
        f = Monomial(mu=1.0)
        assert f.strip == (-1.0, -1.0)

    def test_polynomial_exponents(self):
        f = Polynomial(coefficients=(0.0, 0.0, 1.0, 3.0))
        assert f.growth == 2.0
        assert f.decay == -3.0

    def test_bump_metadata(self):
        f = SmoothBump(a=1.0, b=2.0)
        assert f.support == (1.0, 2.0)
        assert f.breakpoints == (1.0, 2.0)
        assert f.growth == math.inf
        assert float(f(1.5)) == pytest.approx(1.0)
        assert float(f(2.5)) == 0.0

    def test_bump_at_origin_grows_like_its_order(self):
        assert SmoothBump(a=0.0, b=1.0, order=4).growth == 4.0

    def test_exp_is_smooth_everywhere(self):
        f = ExpDecay(rate=1.0)
        assert f.strip == (0.0, math.inf)
        assert f.breakpoints == ()
