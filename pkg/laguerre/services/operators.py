"""
Laguerre and Riemann-Liouville fractional integrals and the Laguerre derivatives.

After scaling u = x t (left operators) or u = x / t (right operators) every
integral becomes
    x^kappa * integral over (0, 1) of (1 - t)^p R(t) phi(t) dt
with phi(t) = f(x t) or t^(-kappa - 1) f(x / t). For the Laguerre integrals
p = 2 alpha - 1 and R is the regular part of the kernel weight H; for the
Riemann-Liouville integrals p = alpha - 1 and R = 1 / Gamma(alpha).

theta = D x D is applied to functions in r = ln x as
    theta^n g = x^-n sum_k c_k(n) d^k/dr^k g
with c_k(n) the Cauchy self-products of the Stirling numbers of the first
kind; the r-derivatives are Richardson-extrapolated central differences.
Sampled data go through theta^n = D^n x^n D^n instead, differentiated in x.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Literal, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate, special
from scipy.interpolate import KroghInterpolator, make_interp_spline

from laguerre.errors import DivergenceError, ParameterDomainError, QuadratureError, ResolutionError
from laguerre.models.catalog import CatalogFunction, GridFunction, Tabulated
from laguerre.models.schemas import FractionalOrder, OperatorKind
from laguerre.services import quadrature
from laguerre.services.kernels import kernel_eval
from laguerre.services.specfun import cauchy_coefficients

logger = logging.getLogger(__name__)

THETA_STEP = 0.06
# Difference step of theta_apply as a fraction of the sampled span
THETA_X_STEP = 0.025
MIN_THETA_SAMPLES = 512
# Upper bound on x-by-node matrix entries evaluated at once
CHUNK_BUDGET = 2_000_000
# More breakpoints than this switch middle panels to low-order rules
DENSE_BREAKPOINTS = 8
DENSE_PANEL_POINTS = 6

Side = Literal["left", "right"]
Family = Literal["laguerre", "rl"]


@dataclass(frozen=True)
class OperatorImage:
    """
    Lazy u^power * (Op^alpha source)(u), usable as input to any operator.

    Carries the growth/decay/support metadata the quadrature layer needs, so
    images can be nested to any depth.
    """

    source: Any
    operator: OperatorKind
    alpha: float
    power: float = 0.0

    def __call__(self, u: ArrayLike) -> NDArray[np.float64]:
        u_arr = np.asarray(u, dtype=float)
        flat = u_arr.ravel()
        values = np.asarray(apply_operator(self.operator, self.source, self.alpha, flat))
        if self.power:
            values = values * flat**self.power
        return values.reshape(u_arr.shape)

    @property
    def _is_left(self) -> bool:
        return self.operator in (OperatorKind.L_LEFT, OperatorKind.I_LEFT, OperatorKind.D_LEFT)

    @property
    def _is_derivative(self) -> bool:
        return self.operator in (OperatorKind.D_LEFT, OperatorKind.D_RIGHT)

    @property
    def growth(self) -> float:
        src = self.source.growth
        if self._is_left:
            base = src - self.alpha if self._is_derivative else src + self.alpha
        else:
            base = min(0.0, src)
        return base + self.power

    @property
    def decay(self) -> float:
        src = self.source.decay
        if self._is_left:
            capped = min(src, 1.0)
            base = capped + self.alpha if self._is_derivative else capped - self.alpha
        else:
            base = src + self.alpha if self._is_derivative else src - self.alpha
        return base - self.power

    @property
    def support(self) -> tuple[float, float]:
        lo, hi = self.source.support
        return (lo, math.inf) if self._is_left else (0.0, hi)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(self.source.breakpoints)

    @property
    def strip(self) -> tuple[float, float]:
        return (-self.growth, self.decay)

    def mellin(self, s: complex) -> None:
        return None


Integrand = Union[CatalogFunction, OperatorImage]
FunctionLike = Union[CatalogFunction, GridFunction, OperatorImage]


def as_integrand(f: FunctionLike) -> Integrand:
    if isinstance(f, GridFunction):
        return Tabulated(grid=f)
    return f


def _kernel_regular(family: Family, alpha: float) -> Callable[[NDArray[np.float64]], NDArray[np.float64]]:
    if family == "laguerre":
        ke = kernel_eval(alpha)
        return ke.regular_weight
    inv_gamma = math.exp(-special.gammaln(alpha))
    return lambda t: np.full_like(t, inv_gamma)


def _edge_exponent(family: Family, alpha: float) -> float:
    return 2.0 * alpha - 1.0 if family == "laguerre" else alpha - 1.0


def _combined_rule(
    family: Family, alpha: float, growth: float, cuts: Sequence[float] = (),
    skip: Sequence[tuple[float, float]] = (), panel_points: int = quadrature.LEGENDRE_POINTS,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Nodes and weights with (1 - t)^p R(t) folded into the weights"""
    edge = _edge_exponent(family, alpha)
    grading = max(2.0, 1.0 / alpha)
    jacobi, plain = quadrature.unit_interval_rule(edge, growth, cuts, grading, skip, panel_points)
    regular = _kernel_regular(family, alpha)
    nodes = np.concatenate([jacobi.nodes, plain.nodes])
    weights = np.concatenate(
        [
            jacobi.weights * regular(jacobi.nodes) if len(jacobi) else jacobi.weights,
            plain.weights * (1.0 - plain.nodes) ** edge * regular(plain.nodes) if len(plain) else plain.weights,
        ]
    )
    return nodes, weights


@lru_cache(maxsize=256)
def _shared_rule(family: Family, alpha: float, growth: float) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    return _combined_rule(family, alpha, growth)


def _effective_growth(f: Integrand, alpha: float, side: Side) -> float:
    if side == "left":
        growth = f.growth
        if growth <= -1.0:
            raise DivergenceError(
                f"integral diverges at u = 0: input grows like u^{growth:g}, need exponent > -1"
            )
        return growth
    growth = f.decay - alpha - 1.0
    if growth <= -1.0:
        raise DivergenceError(
            f"integral diverges at infinity: input decays like u^-{f.decay:g}, need decay > alpha = {alpha:g}"
        )
    return growth


def _point_layout(
    f: Integrand, x: float, side: Side
) -> tuple[list[float], list[tuple[float, float]], bool]:
    """Cuts and zero intervals in t for one x; the flag reports an identically zero integral"""
    lo, hi = f.support
    if side == "left":
        if lo >= x:
            return [], [], True
        cuts = [b / x for b in f.breakpoints]
        skip = []
        if lo > 0:
            skip.append((0.0, lo / x))
        if hi < math.inf:
            skip.append((hi / x, math.inf))
        return cuts, skip, False
    if hi <= x:
        return [], [], True
    cuts = [x / b for b in f.breakpoints if b > 0]
    skip = []
    if hi < math.inf:
        skip.append((0.0, x / hi))
    if lo > 0:
        skip.append((x / lo, math.inf))
    return cuts, skip, False


def _sample(f: Integrand, x: NDArray[np.float64], t: NDArray[np.float64], side: Side, alpha: float) -> NDArray[np.float64]:
    if side == "left":
        return np.asarray(f(x[:, None] * t[None, :]))
    return np.asarray(f(x[:, None] / t[None, :])) * t[None, :] ** (-alpha - 1.0)


def _transform(
    f: FunctionLike, alpha: float, x: ArrayLike, family: Family, side: Side
) -> Union[float, NDArray[np.float64]]:
    order = FractionalOrder.of(alpha)
    integrand = as_integrand(f)
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)
    if np.any(x_arr <= 0):
        raise ParameterDomainError("operators are evaluated at x > 0")
    growth = _effective_growth(integrand, order.value, side)
    values = np.empty(len(x_arr))

    smooth = not integrand.breakpoints and tuple(integrand.support) == (0.0, math.inf)
    if smooth:
        nodes, weights = _shared_rule(family, order.value, growth)
        chunk = max(1, CHUNK_BUDGET // len(nodes))
        for start in range(0, len(x_arr), chunk):
            xs = x_arr[start : start + chunk]
            values[start : start + chunk] = xs**order.value * (
                _sample(integrand, xs, nodes, side, order.value) @ weights
            )
    else:
        dense = len(integrand.breakpoints) > DENSE_BREAKPOINTS
        points = DENSE_PANEL_POINTS if dense else quadrature.LEGENDRE_POINTS
        for i, xi in enumerate(x_arr):
            cuts, skip, vanishes = _point_layout(integrand, float(xi), side)
            if vanishes:
                values[i] = 0.0
                continue
            nodes, weights = _combined_rule(family, order.value, growth, cuts, skip, points)
            if len(nodes) == 0:
                values[i] = 0.0
                continue
            row = _sample(integrand, np.array([xi]), nodes, side, order.value)[0]
            values[i] = xi**order.value * float(row @ weights)

    if not np.all(np.isfinite(values)):
        raise QuadratureError(f"{family} {side} integral of order {alpha} is not finite")
    return float(values[0]) if scalar else values


def laguerre_L_left(f: FunctionLike, alpha: float, x: ArrayLike) -> Union[float, NDArray[np.float64]]:
    """Left Laguerre integral L0+^alpha f(x) = integral over (0, x) of k+(x/u) u^(alpha-1) f(u) du"""
    return _transform(f, alpha, x, "laguerre", "left")


def laguerre_L_right(f: FunctionLike, alpha: float, x: ArrayLike) -> Union[float, NDArray[np.float64]]:
    """Right Laguerre integral L-^alpha f(x) = integral over (x, inf) of k-(x/u) u^(alpha-1) f(u) du"""
    return _transform(f, alpha, x, "laguerre", "right")


def rl_integral_left(f: FunctionLike, alpha: float, x: ArrayLike) -> Union[float, NDArray[np.float64]]:
    return _transform(f, alpha, x, "rl", "left")


def rl_integral_right(f: FunctionLike, alpha: float, x: ArrayLike) -> Union[float, NDArray[np.float64]]:
    return _transform(f, alpha, x, "rl", "right")


@lru_cache(maxsize=16)
def _difference_weights(order: int, half_width: int) -> NDArray[np.float64]:
    """Central-difference weights on offsets -P..P for the order-th derivative"""
    offsets = np.arange(-half_width, half_width + 1, dtype=float)
    vander = np.vander(offsets, increasing=True).T
    rhs = np.zeros(len(offsets))
    rhs[order] = math.factorial(order)
    return np.linalg.solve(vander, rhs)


def _half_width(order: int) -> int:
    return max(1, (order + 1) // 2)


def _r_derivatives(
    evaluate: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    r: NDArray[np.float64],
    max_order: int,
    step: NDArray[np.float64],
) -> NDArray[np.float64]:
    """
    d^k/dr^k of G at r for k = 0..max_order, shape (max_order + 1, len(r)).

    Central differences at steps H, H/2, H/4, combined by two Richardson passes.
    """
    reach = _half_width(max_order)
    quarter = np.arange(-4 * reach, 4 * reach + 1)
    points = r[:, None] + quarter[None, :] * (step[:, None] / 4.0)
    samples = np.asarray(evaluate(points.ravel())).reshape(points.shape)
    centre = 4 * reach

    out = np.empty((max_order + 1, len(r)))
    out[0] = samples[:, centre]
    for k in range(1, max_order + 1):
        width = _half_width(k)
        weights = _difference_weights(k, width)
        levels = []
        for q in (4, 2, 1):
            cols = centre + q * np.arange(-width, width + 1)
            h = step * q / 4.0
            levels.append(samples[:, cols] @ weights / h**k)
        first = (4.0 * levels[1] - levels[0]) / 3.0
        second = (4.0 * levels[2] - levels[1]) / 3.0
        out[k] = (16.0 * second - first) / 15.0
    return out


def _theta_from_derivatives(derivs: NDArray[np.float64], x: NDArray[np.float64], times: int) -> NDArray[np.float64]:
    coeffs = cauchy_coefficients(float(times), 2 * times)
    total = np.zeros(derivs.shape[1])
    for k in range(2 * times + 1):
        if coeffs[k] != 0:
            total += coeffs[k] * derivs[k]
    return x ** (-times) * total


def _x_derivatives(
    spline: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    x: NDArray[np.float64],
    bounds: tuple[float, float],
    max_order: int,
    step: float,
) -> NDArray[np.float64]:
    """
    d^k/dx^k of the spline at x for k = 0..max_order, shape (max_order + 1, len(x)).

    Each node gets max_order + 5 equally spaced points, centred on the node
    where they fit inside bounds and slid inwards where they do not; the
    derivatives are those of the polynomial through the points.
    """
    points = max_order + 5
    local = np.arange(points) - 0.5 * (points - 1)
    lo, hi = bounds
    centre = np.clip(x, lo - local[0] * step, hi - local[-1] * step)
    samples = np.asarray(spline(centre[:, None] + local[None, :] * step))
    shift = (x - centre) / step
    out = np.empty((max_order + 1, len(x)))
    central = shift == 0.0
    if np.any(central):
        out[:, central] = KroghInterpolator(local, samples[central].T).derivatives(0.0, der=max_order + 1)
    for i in np.flatnonzero(~central):
        out[:, i] = KroghInterpolator(local, samples[i]).derivatives(shift[i], der=max_order + 1)
    return out / step ** np.arange(max_order + 1, dtype=float)[:, None]


def theta_apply(g: GridFunction, times: int) -> GridFunction:
    """
    theta^times applied to sampled data.

    The samples are interpolated by a quintic spline in x and the spline is
    differenced at a step of THETA_X_STEP times the sampled span; the
    derivatives enter theta^n g = sum_j C(n, j) n!/(n-j)! x^(n-j) g^(2n-j).
    """
    if times < 1:
        raise ParameterDomainError("theta power must be a positive integer")
    if g.size < MIN_THETA_SAMPLES:
        raise ResolutionError(f"theta_apply needs at least {MIN_THETA_SAMPLES} samples, got {g.size}")
    if (2 * times + 4) * THETA_X_STEP > 1.0:
        raise ResolutionError(f"theta^{times} stencil is wider than the sampled interval")
    x = g.nodes
    bounds = (float(x[0]), float(x[-1]))
    spline = make_interp_spline(x, np.asarray(g.values, dtype=float), k=5)
    derivs = _x_derivatives(spline, x, bounds, 2 * times, THETA_X_STEP * (bounds[1] - bounds[0]))
    total = np.zeros(len(x))
    for j in range(times + 1):
        total += math.comb(times, j) * math.perm(times, j) * x ** (times - j) * derivs[2 * times - j]
    return g.with_values(total)


def theta_of(f: FunctionLike, times: int, x: ArrayLike) -> NDArray[np.float64]:
    """theta^times f at x, differencing f itself in r = ln x"""
    if times < 1:
        raise ParameterDomainError("theta power must be a positive integer")
    integrand = as_integrand(f)
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x_arr <= 0):
        raise ParameterDomainError("theta is evaluated at x > 0")

    def evaluate(r_points: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.asarray(integrand(np.exp(r_points)), dtype=float)

    step = np.full(len(x_arr), THETA_STEP)
    derivs = _r_derivatives(evaluate, np.log(x_arr), 2 * times, step)
    return _theta_from_derivatives(derivs, x_arr, times)


def _derivative_values(f: FunctionLike, alpha: float, x: NDArray[np.float64], side: Side) -> NDArray[np.float64]:
    order = FractionalOrder.of(alpha)
    times = order.ceiling_order
    kind = OperatorKind.L_LEFT if side == "left" else OperatorKind.L_RIGHT
    return theta_of(image(f, kind, times - order.value), times, x)


def _grid_of(x_grid: Union[GridFunction, ArrayLike]) -> tuple[NDArray[np.float64], float, float]:
    if isinstance(x_grid, GridFunction):
        return x_grid.nodes, x_grid.length, x_grid.grading
    nodes = np.atleast_1d(np.asarray(x_grid, dtype=float))
    return nodes, float(nodes.max()), 1.0


def laguerre_D_left(f: FunctionLike, alpha: float, x_grid: Union[GridFunction, ArrayLike]) -> GridFunction:
    """D0+^alpha f = theta^m L0+^(m - alpha) f with m = floor(alpha) + 1, on the grid nodes"""
    nodes, length, grading = _grid_of(x_grid)
    values = _derivative_values(f, alpha, nodes, "left")
    return GridFunction(nodes, values, length, grading)


def laguerre_D_right(f: FunctionLike, alpha: float, x_grid: Union[GridFunction, ArrayLike]) -> GridFunction:
    """D-^alpha f = theta^m L-^(m - alpha) f with m = floor(alpha) + 1, on the grid nodes"""
    nodes, length, grading = _grid_of(x_grid)
    values = _derivative_values(f, alpha, nodes, "right")
    return GridFunction(nodes, values, length, grading)


def apply_operator(
    operator: OperatorKind, f: FunctionLike, alpha: float, x: ArrayLike
) -> NDArray[np.float64]:
    """Dispatch used by the CLI and by lazily evaluated images"""
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if operator == OperatorKind.L_LEFT:
        return np.asarray(laguerre_L_left(f, alpha, x_arr))
    if operator == OperatorKind.L_RIGHT:
        return np.asarray(laguerre_L_right(f, alpha, x_arr))
    if operator == OperatorKind.I_LEFT:
        return np.asarray(rl_integral_left(f, alpha, x_arr))
    if operator == OperatorKind.I_RIGHT:
        return np.asarray(rl_integral_right(f, alpha, x_arr))
    side: Side = "left" if operator == OperatorKind.D_LEFT else "right"
    return _derivative_values(f, alpha, x_arr, side)


def image(f: FunctionLike, operator: OperatorKind, alpha: float, power: float = 0.0) -> OperatorImage:
    FractionalOrder.of(alpha)
    return OperatorImage(as_integrand(f), operator, alpha, power)


def rl_composition_check(
    f: FunctionLike, n: int, x: float, side: Side = "left"
) -> tuple[float, float]:
    """
    (I^n x^-n I^n f (x), L^n f (x)) for integer n >= 1.

    The two agree for admissible f; the inner x^-n I^n f is evaluated lazily.
    """
    if n < 1:
        raise ParameterDomainError("integer reduction needs n >= 1")
    rl_kind = OperatorKind.I_LEFT if side == "left" else OperatorKind.I_RIGHT
    inner = image(f, rl_kind, float(n), power=-float(n))
    if side == "left":
        return float(rl_integral_left(inner, float(n), x)), float(laguerre_L_left(f, float(n), x))
    return float(rl_integral_right(inner, float(n), x)), float(laguerre_L_right(f, float(n), x))


def _pairing(weight: Integrand, other: Callable[[float], float]) -> float:
    lo, hi = weight.support
    if math.isinf(lo) or lo < 0:
        raise ParameterDomainError("pairing needs a support inside (0, inf)")
    points = [b for b in weight.breakpoints if lo < b < hi] or None
    if math.isinf(hi):
        points = None
    value, error = integrate.quad(
        lambda u: float(weight(np.array(u))) * other(u), lo, hi, points=points,
        epsabs=1e-13, epsrel=1e-10, limit=200,
    )
    logger.debug(f"pairing integral {value:.12g} (estimated error {error:.2e})")
    return float(value)


def integration_by_parts_check(f: FunctionLike, g: FunctionLike, alpha: float) -> tuple[float, float]:
    """(integral of f L0+^alpha g, integral of g L-^alpha f)"""
    f_int, g_int = as_integrand(f), as_integrand(g)
    left = _pairing(f_int, lambda u: float(laguerre_L_left(g_int, alpha, u)))
    right = _pairing(g_int, lambda u: float(laguerre_L_right(f_int, alpha, u)))
    return left, right


def derivative_integration_by_parts_check(
    f: FunctionLike, g: FunctionLike, alpha: float
) -> tuple[float, float]:
    """(integral of f D0+^alpha g, integral of g D-^alpha f)"""
    f_int, g_int = as_integrand(f), as_integrand(g)
    left = _pairing(f_int, lambda u: float(_derivative_values(g_int, alpha, np.array([u]), "left")[0]))
    right = _pairing(g_int, lambda u: float(_derivative_values(f_int, alpha, np.array([u]), "right")[0]))
    return left, right
