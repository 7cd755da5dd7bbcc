"""
Parameter and configuration models.

Every numerical service validates its scalar parameters through these models,
and the CLI validates a whole run through RunConfig before any computation
starts.
"""

import math
from enum import Enum
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from laguerre.config import DEFAULT_GRADING, DEFAULT_GRID_N, DEFAULT_LENGTH, DEFAULT_NU, DEFAULT_TOL
from laguerre.errors import LaguerreError, ParameterDomainError


def _is_nonpositive_integer(value: float) -> bool:
    return value <= 0 and float(value).is_integer()


class FractionalOrder(BaseModel):
    """Order alpha of an integral or derivative"""

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., description="Order alpha, strictly positive")

    @field_validator("value")
    @classmethod
    def _positive(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 0:
            raise ValueError("alpha > 0 required")
        return v

    @classmethod
    def of(cls, alpha: float) -> "FractionalOrder":
        """Validate alpha, raising the domain error services report"""
        try:
            return cls(value=alpha)
        except ValidationError as exc:
            raise ParameterDomainError(f"alpha > 0 required, got {alpha}") from exc

    @property
    def is_integer(self) -> bool:
        return float(self.value).is_integer()

    @property
    def ceiling_order(self) -> int:
        """m = floor(alpha) + 1, the number of theta applications in a derivative"""
        return math.floor(self.value) + 1


class Hyp2F1Params(BaseModel):
    """Arguments of the Gauss hypergeometric function on the real line"""

    model_config = ConfigDict(frozen=True)

    a: float
    b: float
    c: float
    z: float = Field(..., description="Argument, z < 1")

    @field_validator("c")
    @classmethod
    def _c_not_pole(cls, v: float) -> float:
        if _is_nonpositive_integer(v):
            raise ValueError("c must not be a non-positive integer")
        return v

    @field_validator("z")
    @classmethod
    def _z_below_one(cls, v: float) -> float:
        if not v < 1.0:
            raise ValueError("z < 1 required")
        return v


class StirlingOrder(BaseModel):
    """Index pair (alpha, k) of a fractional Stirling function"""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., gt=0)
    k: int = Field(..., ge=0)


class MellinContour(BaseModel):
    """Vertical contour Re s = nu truncated to |Im s| <= T with trapezoid step h"""

    model_config = ConfigDict(frozen=True)

    nu: float = Field(..., description="Abscissa of the contour")
    T: float = Field(40.0, gt=0, description="Initial truncation height")
    h: float = Field(0.05, gt=0, description="Trapezoid step in tau")

    @model_validator(mode="after")
    def _step_resolves_truncation(self) -> "MellinContour":
        if self.h > self.T / 50:
            raise ValueError("h <= T/50 required")
        return self


class MultiplierKind(str, Enum):
    """Mellin multipliers of the four Laguerre operators"""

    LAG_INT_LEFT = "LagIntLeft"
    LAG_INT_RIGHT = "LagIntRight"
    LAG_DER_LEFT = "LagDerLeft"
    LAG_DER_RIGHT = "LagDerRight"


class MultiplierDescriptor(BaseModel):
    """A multiplier M with (Op f)*(s) = M(s) f*(s + shift)"""

    model_config = ConfigDict(frozen=True)

    kind: MultiplierKind
    alpha: float = Field(..., gt=0)

    @property
    def shift(self) -> float:
        if self.kind in (MultiplierKind.LAG_INT_LEFT, MultiplierKind.LAG_INT_RIGHT):
            return self.alpha
        return -self.alpha

    @property
    def strip(self) -> tuple[float, float]:
        """Open interval of Re s free of multiplier poles"""
        if self.kind == MultiplierKind.LAG_INT_LEFT:
            return (-math.inf, 1.0 - self.alpha)
        if self.kind == MultiplierKind.LAG_DER_LEFT:
            return (-math.inf, 1.0 + self.alpha)
        return (0.0, math.inf)

    def poles(self, count: int = 8) -> list[float]:
        """First `count` real poles, nearest to the strip first"""
        if self.kind == MultiplierKind.LAG_INT_LEFT:
            return [1.0 - self.alpha + k for k in range(count)]
        if self.kind == MultiplierKind.LAG_DER_LEFT:
            return [1.0 + self.alpha + k for k in range(count)]
        return [-float(k) for k in range(count)]


class NeumannSolveConfig(BaseModel):
    """Parameters of f = g + lambda L^alpha f on (0, l]"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    alpha: float = Field(..., gt=0.5, description="Order, alpha > 1/2")
    lam: Union[float, complex] = Field(..., alias="lambda", description="Coupling lambda")
    nu: float = Field(DEFAULT_NU, description="Weight exponent of the solution space")
    length: float = Field(DEFAULT_LENGTH, gt=0, description="Interval length l")
    tol: float = Field(DEFAULT_TOL, gt=0)
    max_terms: int = Field(400, ge=1)

    @model_validator(mode="after")
    def _inside_convergence_disk(self) -> "NeumannSolveConfig":
        if not self.nu < 1.0 - self.alpha / 2.0:
            raise ValueError("nu < 1 - alpha/2 required")
        if not self.alpha + self.nu < 1.0:
            raise ValueError("alpha + nu < 1 required")
        from laguerre.services.kernels import c_plus

        radius = 1.0 / (c_plus(self.alpha, self.nu) * self.length**self.alpha)
        if not abs(self.lam) < radius:
            raise ValueError(
                f"|lambda| < (C+ l^alpha)^-1 = {radius:.6g} required, got |lambda| = {abs(self.lam):.6g}"
            )
        return self

    @property
    def disk_radius(self) -> float:
        from laguerre.services.kernels import c_plus

        return 1.0 / (c_plus(self.alpha, self.nu) * self.length**self.alpha)


class ResolventForm(str, Enum):
    SINGLE_SERIES = "single"
    DOUBLE_SERIES = "double"


class ResolventTermParams(BaseModel):
    """Arguments of one iterated kernel K_{alpha n}(x, u)"""

    model_config = ConfigDict(frozen=True)

    x: float = Field(..., gt=0)
    u: float = Field(..., gt=0)
    alpha_n: float = Field(..., gt=0)

    @model_validator(mode="after")
    def _ordered(self) -> "ResolventTermParams":
        if not self.u < self.x:
            raise ValueError("0 < u < x required")
        return self


class Command(str, Enum):
    APPLY = "apply"
    KERNEL = "kernel"
    MELLIN = "mellin"
    SOLVE = "solve"
    VERIFY = "verify"


class Method(str, Enum):
    QUADRATURE = "quadrature"
    MELLIN = "mellin"
    BOTH = "both"


class OperatorKind(str, Enum):
    L_LEFT = "L-left"
    L_RIGHT = "L-right"
    D_LEFT = "D-left"
    D_RIGHT = "D-right"
    I_LEFT = "I-left"
    I_RIGHT = "I-right"

    @property
    def multiplier_kind(self) -> Optional[MultiplierKind]:
        return {
            OperatorKind.L_LEFT: MultiplierKind.LAG_INT_LEFT,
            OperatorKind.L_RIGHT: MultiplierKind.LAG_INT_RIGHT,
            OperatorKind.D_LEFT: MultiplierKind.LAG_DER_LEFT,
            OperatorKind.D_RIGHT: MultiplierKind.LAG_DER_RIGHT,
        }.get(self)


class SolverKind(str, Enum):
    NEUMANN = "neumann"
    RESOLVENT = "resolvent"
    DIRECT = "direct"


class RunConfig(BaseModel):
    """Fully resolved settings of one CLI run"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    command: Command = Field(..., description="Command to run")
    alpha: float = Field(0.5, description="Order alpha")
    func: str = Field("exp:1", description="Catalog function descriptor")
    nu: float = Field(DEFAULT_NU, description="Weight exponent / contour abscissa")
    lam: Union[float, complex] = Field(0.5, alias="lambda", description="Volterra coupling")
    length: float = Field(DEFAULT_LENGTH, gt=0, description="Interval length l")
    tol: float = Field(DEFAULT_TOL, gt=0, description="Series and solver tolerance")
    grid_n: int = Field(DEFAULT_GRID_N, ge=8, description="Number of graded grid nodes")
    grading: float = Field(DEFAULT_GRADING, ge=1.0, description="Grid grading exponent")
    method: Method = Field(Method.QUADRATURE, description="Evaluation route for apply")
    operator: OperatorKind = Field(OperatorKind.L_LEFT, description="Operator for apply/mellin")
    solver: SolverKind = Field(SolverKind.NEUMANN, description="Volterra route for solve")
    tau_max: float = Field(20.0, gt=0, description="Largest |tau| tabulated by mellin")
    output: Optional[str] = Field(None, description="CSV path, '-' for stdout")
    verbose: bool = False

    @field_validator("alpha")
    @classmethod
    def _alpha_positive(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 0:
            raise ValueError("alpha > 0 required")
        return v

    @field_validator("func")
    @classmethod
    def _func_parses(cls, v: str) -> str:
        from laguerre.parser import parse_descriptor

        try:
            parse_descriptor(v)
        except LaguerreError as exc:
            raise ValueError(str(exc)) from exc
        return v

    @model_validator(mode="after")
    def _method_supported(self) -> "RunConfig":
        if self.command == Command.APPLY and self.method != Method.QUADRATURE:
            if self.operator.multiplier_kind is None:
                raise ValueError(f"method {self.method.value} needs an operator with a Mellin multiplier")
        if self.command == Command.MELLIN and self.operator.multiplier_kind is None:
            raise ValueError("mellin command needs an operator with a Mellin multiplier")
        return self
