"""
Test-function catalog and sampled functions on graded grids.

Catalog functions carry the metadata the quadrature and Mellin layers need:
growth exponent at 0 (f ~ u^g), decay exponent at infinity (f = O(u^-d)),
support, breakpoints where f is not smooth, and the Mellin transform when it
has a closed form.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Literal, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import special
from scipy.interpolate import CubicSpline

from laguerre.errors import ParameterDomainError, ResolutionError


class FunctionKind(str, Enum):
    MONOMIAL = "monomial"
    EXP_DECAY = "exp"
    SMOOTH_BUMP = "bump"
    POLYNOMIAL = "poly"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class GridFunction:
    """Samples of f on the graded grid x_i = l (i / N)^grading, i = 1..N"""

    nodes: NDArray[np.float64]
    values: NDArray[Any]
    length: float = 1.0
    grading: float = 2.0

    def __post_init__(self) -> None:
        if self.nodes.ndim != 1 or self.nodes.shape != self.values.shape:
            raise ParameterDomainError("grid nodes and values must be 1-D arrays of equal length")
        if len(self.nodes) < 1:
            raise ParameterDomainError("grid needs at least one node")
        if np.any(np.diff(self.nodes) <= 0):
            raise ParameterDomainError("grid nodes must be strictly increasing")
        if self.nodes[0] <= 0 or self.nodes[-1] > self.length * (1 + 1e-12):
            raise ParameterDomainError("grid nodes must lie in (0, l]")
        if not np.all(np.isfinite(self.values)):
            raise ParameterDomainError("grid values must be finite")

    @staticmethod
    def graded_nodes(length: float = 1.0, n: int = 1024, grading: float = 2.0) -> NDArray[np.float64]:
        if n < 2 or length <= 0 or grading < 1:
            raise ParameterDomainError("graded grid needs n >= 2, l > 0, grading >= 1")
        return length * (np.arange(1, n + 1) / n) ** grading

    @classmethod
    def sample(
        cls, f: "CatalogFunction", length: float = 1.0, n: int = 1024, grading: float = 2.0
    ) -> "GridFunction":
        nodes = cls.graded_nodes(length, n, grading)
        return cls(nodes, np.asarray(f(nodes)), length, grading)

    def with_values(self, values: NDArray[Any]) -> "GridFunction":
        return GridFunction(self.nodes, np.asarray(values), self.length, self.grading)

    @property
    def size(self) -> int:
        return len(self.nodes)

    @cached_property
    def trapezoid_weights(self) -> NDArray[np.float64]:
        """Trapezoid weights on the nodes, the first cell absorbing (0, x_1]"""
        if self.size < 2:
            raise ResolutionError("trapezoid weights need at least two nodes")
        x = self.nodes
        w = np.empty_like(x)
        w[1:-1] = 0.5 * (x[2:] - x[:-2])
        w[0] = x[0] + 0.5 * (x[1] - x[0])
        w[-1] = 0.5 * (x[-1] - x[-2])
        return w

    def norm(self, nu: float, p: float = 1.0) -> float:
        """Discrete ||f||_{nu,p} on (0, l]; p = inf gives sup x^nu |f|"""
        magnitude = np.abs(self.values)
        if math.isinf(p):
            return float(np.max(self.nodes**nu * magnitude))
        if p < 1:
            raise ParameterDomainError("norm exponent p >= 1 required")
        integrand = magnitude**p * self.nodes ** (nu * p - 1.0)
        return float(np.dot(self.trapezoid_weights, integrand) ** (1.0 / p))

    def sup_distance(self, other: "GridFunction") -> float:
        return float(np.max(np.abs(self.values - other.values)))

    @cached_property
    def spline(self) -> CubicSpline:
        if self.size < 2:
            raise ResolutionError("tabulated evaluation needs at least two nodes")
        if np.iscomplexobj(self.values):
            raise ResolutionError("tabulated evaluation supports real samples only")
        return CubicSpline(self.nodes, self.values, extrapolate=True)


class CatalogFunction(BaseModel):
    """Base of the analytic test functions"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: FunctionKind

    def __call__(self, u: ArrayLike) -> Any:
        raise NotImplementedError

    @property
    def growth(self) -> float:
        return 0.0

    @property
    def decay(self) -> float:
        return math.inf

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, math.inf)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    @property
    def strip(self) -> tuple[float, float]:
        """Fundamental strip of the Mellin transform (open interval of Re s)"""
        return (-self.growth, self.decay)

    def mellin(self, s: complex) -> Optional[complex]:
        """Closed-form Mellin transform, None when only quadrature is available"""
        return None

    @property
    def descriptor(self) -> str:
        raise NotImplementedError


class Monomial(CatalogFunction):
    kind: Literal[FunctionKind.MONOMIAL] = FunctionKind.MONOMIAL
    mu: float

    def __call__(self, u: ArrayLike) -> Any:
        return np.asarray(u, dtype=float) ** self.mu

    @property
    def growth(self) -> float:
        return self.mu

    @property
    def decay(self) -> float:
        return -self.mu

    @property
    def descriptor(self) -> str:
        return f"monomial:{self.mu:g}"


class ExpDecay(CatalogFunction):
    kind: Literal[FunctionKind.EXP_DECAY] = FunctionKind.EXP_DECAY
    rate: float = Field(1.0, gt=0)

    def __call__(self, u: ArrayLike) -> Any:
        return np.exp(-self.rate * np.asarray(u, dtype=float))

    def mellin(self, s: complex) -> Optional[complex]:
        return complex(np.exp(special.loggamma(complex(s)) - complex(s) * math.log(self.rate)))

    @property
    def descriptor(self) -> str:
        return f"exp:{self.rate:g}"


class SmoothBump(CatalogFunction):
    """((u - a)(b - u) / ((b - a)/2)^2)^order on (a, b), zero elsewhere"""

    kind: Literal[FunctionKind.SMOOTH_BUMP] = FunctionKind.SMOOTH_BUMP
    a: float = Field(..., ge=0)
    b: float
    order: int = Field(3, ge=1)

    @model_validator(mode="after")
    def _ordered(self) -> "SmoothBump":
        if not self.b > self.a:
            raise ValueError("bump needs 0 <= a < b")
        return self

    def __call__(self, u: ArrayLike) -> Any:
        u_arr = np.asarray(u, dtype=float)
        half = 0.5 * (self.b - self.a)
        core = (u_arr - self.a) * (self.b - u_arr) / (half * half)
        return np.where(core > 0, np.maximum(core, 0.0) ** self.order, 0.0)

    @property
    def growth(self) -> float:
        return math.inf if self.a > 0 else float(self.order)

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.b)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (self.a, self.b)

    @property
    def strip(self) -> tuple[float, float]:
        if self.a == 0:
            return (-float(self.order), math.inf)
        return (-math.inf, math.inf)

    @cached_property
    def power_coefficients(self) -> NDArray[np.float64]:
        """Coefficients p_j of the bump as sum p_j u^j on its support"""
        half = 0.5 * (self.b - self.a)
        quad = np.polynomial.Polynomial([-self.a * self.b, self.a + self.b, -1.0]) / (half * half)
        return np.asarray((quad**self.order).coef, dtype=float)

    def mellin(self, s: complex) -> Optional[complex]:
        s = complex(s)
        total = 0j
        for j, p in enumerate(self.power_coefficients):
            exponent = s + j
            if abs(exponent) < 1e-300:
                raise ParameterDomainError("bump Mellin transform has a pole at s = -j")
            lower = 0j if self.a == 0 else self.a**exponent
            total += p * (self.b**exponent - lower) / exponent
        return total

    @property
    def descriptor(self) -> str:
        return f"bump:{self.a:g},{self.b:g},{self.order}"


class Polynomial(CatalogFunction):
    kind: Literal[FunctionKind.POLYNOMIAL] = FunctionKind.POLYNOMIAL
    coefficients: tuple[float, ...] = Field(..., min_length=1)

    @field_validator("coefficients")
    @classmethod
    def _not_all_zero(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if not any(c != 0 for c in v):
            raise ValueError("polynomial needs a non-zero coefficient")
        return v

    def __call__(self, u: ArrayLike) -> Any:
        return np.polynomial.polynomial.polyval(np.asarray(u, dtype=float), self.coefficients)

    @property
    def growth(self) -> float:
        return float(next(k for k, c in enumerate(self.coefficients) if c != 0))

    @property
    def decay(self) -> float:
        degree = max(k for k, c in enumerate(self.coefficients) if c != 0)
        return -float(degree)

    @property
    def descriptor(self) -> str:
        return "poly:" + ",".join(f"{c:g}" for c in self.coefficients)


class Tabulated(CatalogFunction):
    """u^power times the cubic-spline interpolant of sampled data on (0, l], zero beyond l"""

    kind: Literal[FunctionKind.TABULATED] = FunctionKind.TABULATED
    grid: GridFunction
    power: float = Field(0.0, ge=0)

    def __call__(self, u: ArrayLike) -> Any:
        u_arr = np.asarray(u, dtype=float)
        inside = u_arr <= self.grid.nodes[-1]
        clipped = np.minimum(u_arr, self.grid.nodes[-1])
        return np.where(inside, clipped**self.power * self.grid.spline(clipped), 0.0)

    @property
    def growth(self) -> float:
        return self.power

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, float(self.grid.nodes[-1]))

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(self.grid.nodes.tolist())

    @property
    def strip(self) -> tuple[float, float]:
        return (-self.power, math.inf)

    @property
    def descriptor(self) -> str:
        return f"tabulated:{self.grid.size}"


Catalog = Union[Monomial, ExpDecay, SmoothBump, Polynomial, Tabulated]
