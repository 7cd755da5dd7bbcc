"""
Parser for catalog function descriptors.

Descriptors are the compact strings the CLI and config files use to name a
test function:

  monomial:<mu>            u^mu
  exp:<rate>               exp(-rate u)
  bump:<a>,<b>[,<order>]   polynomial bump on (a, b)
  poly:<c0>,<c1>,...       c0 + c1 u + ...
  const:<c>                constant c
"""

import logging
import re
from typing import Callable

from pydantic import ValidationError

from laguerre.errors import ParameterDomainError
from laguerre.models.catalog import (
    CatalogFunction,
    ExpDecay,
    Monomial,
    Polynomial,
    SmoothBump,
)

logger = logging.getLogger(__name__)


class DescriptorParser:
    """Turns descriptor strings into catalog functions"""

    # Patterns
    DESCRIPTOR = re.compile(r"^\s*([a-z]+)\s*:\s*(.*?)\s*$", re.IGNORECASE)
    NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")

    def __init__(self) -> None:
        self._builders: dict[str, Callable[[list[float]], CatalogFunction]] = {
            "monomial": self._monomial,
            "exp": self._exp,
            "bump": self._bump,
            "poly": self._poly,
            "const": self._const,
        }

    def parse(self, descriptor: str) -> CatalogFunction:
        match = self.DESCRIPTOR.match(descriptor)
        if not match:
            raise ParameterDomainError(f"malformed function descriptor '{descriptor}'")
        name = match.group(1).lower()
        builder = self._builders.get(name)
        if builder is None:
            known = ", ".join(sorted(self._builders))
            raise ParameterDomainError(f"unknown function kind '{name}' (expected one of {known})")
        args = self._numbers(match.group(2), descriptor)
        try:
            return builder(args)
        except ValidationError as exc:
            first = exc.errors()[0]["msg"]
            raise ParameterDomainError(f"invalid descriptor '{descriptor}': {first}") from exc

    def _numbers(self, text: str, descriptor: str) -> list[float]:
        parts = [p.strip() for p in text.split(",")] if text else []
        if not parts or any(not self.NUMBER.match(p) for p in parts):
            raise ParameterDomainError(f"descriptor '{descriptor}' needs numeric arguments")
        return [float(p) for p in parts]

    @staticmethod
    def _arity(args: list[float], low: int, high: int, name: str) -> None:
        if not low <= len(args) <= high:
            raise ParameterDomainError(f"'{name}' takes {low}..{high} arguments, got {len(args)}")

    def _monomial(self, args: list[float]) -> CatalogFunction:
        self._arity(args, 1, 1, "monomial")
        return Monomial(mu=args[0])

    def _exp(self, args: list[float]) -> CatalogFunction:
        self._arity(args, 1, 1, "exp")
        return ExpDecay(rate=args[0])

    def _bump(self, args: list[float]) -> CatalogFunction:
        self._arity(args, 2, 3, "bump")
        order = int(args[2]) if len(args) == 3 else 3
        if len(args) == 3 and not float(args[2]).is_integer():
            raise ParameterDomainError("bump order must be an integer")
        return SmoothBump(a=args[0], b=args[1], order=order)

    def _poly(self, args: list[float]) -> CatalogFunction:
        return Polynomial(coefficients=tuple(args))

    def _const(self, args: list[float]) -> CatalogFunction:
        self._arity(args, 1, 1, "const")
        return Polynomial(coefficients=(args[0],))


_parser = DescriptorParser()


def parse_descriptor(descriptor: str) -> CatalogFunction:
    """Convenience function to parse one descriptor"""
    return _parser.parse(descriptor)
