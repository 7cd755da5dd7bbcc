"""
Mellin transforms, multipliers and contour inversion.

Each Laguerre operator acts in Mellin space as (Op f)*(s) = M(s) f*(s + shift).
Inversion runs a trapezoid rule along Re s = nu, doubling the truncation
height until the last octave no longer contributes.
"""

import logging
import math
from typing import Callable, Literal, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate

from laguerre.errors import (
    InsufficientDecayError,
    ParameterDomainError,
    StripError,
    TruncationBudgetError,
)
from laguerre.models.catalog import CatalogFunction, GridFunction
from laguerre.models.schemas import MellinContour, MultiplierDescriptor, MultiplierKind
from laguerre.services import quadrature
from laguerre.services.operators import FunctionLike, as_integrand
from laguerre.services.specfun import gamma_ratio_sq

logger = logging.getLogger(__name__)

OCTAVE_TOL = 1e-10
# Inversions whose truncation estimate exceeds this are logged as warnings
INVERSION_WARN = 1e-8
MAX_DOUBLINGS = 8
DECAY_BOUND = 1.1
# Minimum distance of the contour from a multiplier pole
POLE_CLEARANCE = 1e-3

ContourFunction = Callable[[NDArray[np.complex128]], NDArray[np.complex128]]


def multiplier_value(md: MultiplierDescriptor, s: ArrayLike) -> Union[complex, NDArray[np.complex128]]:
    """M(s) for the four multiplier kinds, all through squared Gamma ratios"""
    s_arr = np.asarray(s, dtype=complex)
    a = md.alpha
    if md.kind == MultiplierKind.LAG_INT_LEFT:
        return gamma_ratio_sq(1.0 - a - s_arr, 1.0 - s_arr)
    if md.kind == MultiplierKind.LAG_INT_RIGHT:
        return gamma_ratio_sq(s_arr, s_arr + a)
    if md.kind == MultiplierKind.LAG_DER_LEFT:
        return gamma_ratio_sq(1.0 + a - s_arr, 1.0 - s_arr)
    return gamma_ratio_sq(s_arr, s_arr - a)


def compose_multipliers(
    outer: MultiplierDescriptor, inner: MultiplierDescriptor
) -> tuple[Callable[[ArrayLike], NDArray[np.complex128]], float]:
    """
    Multiplier and shift of outer∘inner: M(s) = M_outer(s) M_inner(s + shift_outer).
    """

    def product(s: ArrayLike) -> NDArray[np.complex128]:
        s_arr = np.asarray(s, dtype=complex)
        return np.asarray(multiplier_value(outer, s_arr)) * np.asarray(
            multiplier_value(inner, s_arr + outer.shift)
        )

    return product, outer.shift + inner.shift


def _function_strip(f: FunctionLike) -> tuple[float, float]:
    return as_integrand(f).strip


def admissible_strip(md: MultiplierDescriptor, f: FunctionLike) -> tuple[float, float]:
    """Re s range where both M(s) and f*(s + shift) are analytic"""
    m_lo, m_hi = md.strip
    f_lo, f_hi = _function_strip(f)
    lo = max(m_lo, f_lo - md.shift)
    hi = min(m_hi, f_hi - md.shift)
    if not lo < hi:
        raise StripError(f"{md.kind.value}({md.alpha:g}) and the input have no common strip")
    return lo, hi


def default_contour(
    md: MultiplierDescriptor, f: FunctionLike, T: float = 40.0, h: float = 0.05
) -> MellinContour:
    """Contour centred in the admissible strip, half a unit inside a half-infinite one"""
    lo, hi = admissible_strip(md, f)
    if math.isinf(lo) and math.isinf(hi):
        nu = 0.5
    elif math.isinf(hi):
        nu = lo + 0.5
    elif math.isinf(lo):
        nu = hi - 0.5
    else:
        nu = 0.5 * (lo + hi)
    return MellinContour(nu=nu, T=T, h=h)


def check_contour(md: MultiplierDescriptor, f: FunctionLike, contour: MellinContour) -> None:
    lo, hi = admissible_strip(md, f)
    if not lo < contour.nu < hi:
        raise StripError(
            f"contour abscissa nu = {contour.nu:g} outside the admissible strip ({lo:g}, {hi:g})"
        )
    nearest = min(abs(contour.nu - p) for p in md.poles())
    if nearest < POLE_CLEARANCE:
        raise StripError(f"contour abscissa nu = {contour.nu:g} sits on a multiplier pole")


def _half_line_rule(f: CatalogFunction) -> quadrature.QuadratureRule:
    """Rule for integrals over the support of f, graded toward 0 and mapped at infinity"""
    lo, hi = f.support
    cuts = sorted(b for b in f.breakpoints if lo < b < hi)
    rule = quadrature.QuadratureRule.empty()
    finite_hi = hi if math.isfinite(hi) else max([1.0, lo * 2.0] + cuts)
    points = [lo] + cuts + [finite_hi]
    dense = len(cuts) > 8
    for a, b in zip(points[:-1], points[1:]):
        if a == 0.0:
            rule = rule + quadrature.geometric_rule(
                b, quadrature.geometric_panel_count(0.0, b), singular=()
            )
        else:
            n = quadrature.LEGENDRE_POINTS if not dense else 6
            rule = rule + quadrature.composite_rule(quadrature.admissible_panels(a, b, (0.0,)), n)
    if math.isinf(hi):
        # u = finite_hi / t on (0, 1]
        tail = quadrature.geometric_rule(
            1.0, quadrature.geometric_panel_count(1.0, 1.0), singular=()
        )
        rule = rule + quadrature.QuadratureRule(
            finite_hi / tail.nodes, tail.weights * finite_hi / tail.nodes**2
        )
    return rule


def mellin_forward(
    f: FunctionLike, s: complex, method: Literal["auto", "closed", "quadrature"] = "auto"
) -> complex:
    """f*(s) = integral over (0, inf) of f(u) u^(s-1) du"""
    integrand = as_integrand(f)
    s = complex(s)
    lo, hi = integrand.strip
    if not lo < s.real < hi:
        raise StripError(f"Re s = {s.real:g} outside the fundamental strip ({lo:g}, {hi:g})")
    if method in ("auto", "closed"):
        closed = integrand.mellin(s)
        if closed is not None:
            return complex(closed)
        if method == "closed":
            raise ParameterDomainError("no closed-form Mellin transform for this function")
    if not isinstance(integrand, CatalogFunction):
        raise ParameterDomainError("quadrature Mellin transform needs a catalog function")
    rule = _half_line_rule(integrand)
    values = np.asarray(integrand(rule.nodes)) * rule.nodes ** (s - 1.0)
    return complex(np.dot(rule.weights, values))


def _contour_sum(F: ContourFunction, nu: float, T: float, h: float) -> tuple[complex, float]:
    """(1/2 pi) times the trapezoid sum of F(nu + i tau) over |tau| <= T, and |F| at the ends"""
    count = int(round(T / h))
    tau = h * np.arange(-count, count + 1)
    values = np.asarray(F(nu + 1j * tau))
    weights = np.full(len(tau), h)
    weights[0] = weights[-1] = 0.5 * h
    edge = float(max(abs(values[0]), abs(values[-1])))
    return complex(np.dot(weights, values)) / (2.0 * math.pi), edge


def contour_integral(F: ContourFunction, contour: MellinContour) -> tuple[complex, float]:
    """
    (1 / 2 pi) integral of F(nu + i tau) d tau with adaptive truncation.

    Returns the value and an error estimate from the last octave.
    """
    T = contour.T
    value, edge = _contour_sum(F, contour.nu, T, contour.h)
    for _ in range(MAX_DOUBLINGS):
        wider, wider_edge = _contour_sum(F, contour.nu, 2.0 * T, contour.h)
        octave = abs(wider - value)
        scale = max(1.0, abs(wider))
        if octave < OCTAVE_TOL * scale:
            logger.debug(f"contour truncated at T = {2 * T:g}, last octave {octave:.2e}")
            return wider, octave
        if edge > 0 and wider_edge > 0:
            exponent = -math.log2(wider_edge / edge)
            if exponent < DECAY_BOUND and wider_edge * 2 * T > OCTAVE_TOL:
                raise InsufficientDecayError(
                    f"contour integrand decays like |tau|^-{exponent:.2f}, need more than {DECAY_BOUND}"
                )
        value, edge, T = wider, wider_edge, 2.0 * T
    raise TruncationBudgetError(f"contour truncation did not settle by T = {T:g}")


def mellin_inverse_with_error(
    F: ContourFunction, contour: MellinContour, x: ArrayLike
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    f(x) = (1 / 2 pi i) integral over Re s = nu of F(s) x^(-s) ds, with the
    truncation estimate (last octave of the contour) at each x.
    """
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    values = np.empty(x_arr.size)
    errors = np.empty(x_arr.size)
    for i, xi in enumerate(x_arr):
        if xi <= 0:
            raise ParameterDomainError("Mellin inversion is evaluated at x > 0")
        log_x = math.log(xi)
        value, errors[i] = contour_integral(lambda s: np.asarray(F(s)) * np.exp(-s * log_x), contour)
        values[i] = value.real
    worst = float(np.max(errors)) if errors.size else 0.0
    if worst > INVERSION_WARN:
        logger.warning(f"Mellin inversion error estimate {worst:.2e} on Re s = {contour.nu:g}")
    return values, errors


def mellin_inverse(
    F: ContourFunction, contour: MellinContour, x: Union[float, ArrayLike]
) -> Union[float, NDArray[np.float64]]:
    values, _ = mellin_inverse_with_error(F, contour, x)
    return float(values[0]) if np.ndim(x) == 0 else values


def forward_transform(
    f: FunctionLike, method: Literal["auto", "closed", "quadrature"] = "auto"
) -> ContourFunction:
    """f* as a function of an array of s, the closed form where f has one"""
    integrand = as_integrand(f)
    lo, hi = integrand.strip
    rules: list[quadrature.QuadratureRule] = []

    def transform(s: NDArray[np.complex128]) -> NDArray[np.complex128]:
        s_arr = np.asarray(s, dtype=complex)
        if np.any(~((lo < s_arr.real) & (s_arr.real < hi))):
            raise StripError(f"Re s outside the fundamental strip ({lo:g}, {hi:g})")
        flat = s_arr.ravel()
        if method != "quadrature":
            closed = [integrand.mellin(complex(z)) for z in flat]
            if all(c is not None for c in closed):
                return np.asarray(closed, dtype=complex).reshape(s_arr.shape)
            if method == "closed":
                raise ParameterDomainError("no closed-form Mellin transform for this function")
        if not isinstance(integrand, CatalogFunction):
            raise ParameterDomainError("quadrature Mellin transform needs a catalog function")
        if not rules:
            rules.append(_half_line_rule(integrand))
        rule = rules[0]
        weighted = rule.weights * np.asarray(integrand(rule.nodes))
        return (weighted @ rule.nodes[:, None] ** (flat[None, :] - 1.0)).reshape(s_arr.shape)

    return transform


def apply_multiplier_with_error(
    f: FunctionLike, md: MultiplierDescriptor, contour: Optional[MellinContour], x: ArrayLike
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Operator values at x through the Mellin multiplier, with the inversion error estimates"""
    integrand = as_integrand(f)
    if contour is None:
        contour = default_contour(md, integrand)
    check_contour(md, integrand, contour)
    if integrand.mellin(complex(contour.nu + md.shift)) is None:
        raise ParameterDomainError("the Mellin route needs a closed-form transform of the input")
    transform = forward_transform(integrand, "closed")

    def F(s: NDArray[np.complex128]) -> NDArray[np.complex128]:
        return np.asarray(multiplier_value(md, s)) * transform(s + md.shift)

    return mellin_inverse_with_error(F, contour, x)


def apply_multiplier(
    f: FunctionLike, md: MultiplierDescriptor, contour: Optional[MellinContour], x: ArrayLike
) -> Union[float, NDArray[np.float64]]:
    """Operator value at x through its Mellin multiplier"""
    values, _ = apply_multiplier_with_error(f, md, contour, x)
    return float(values[0]) if np.ndim(x) == 0 else values


def apply_derivative_multiplier(
    f: FunctionLike, alpha: float, side: Literal["left", "right"], x: ArrayLike
) -> Union[float, NDArray[np.float64]]:
    kind = MultiplierKind.LAG_DER_LEFT if side == "left" else MultiplierKind.LAG_DER_RIGHT
    return apply_multiplier(f, MultiplierDescriptor(kind=kind, alpha=alpha), None, x)


def parseval_pair(f: FunctionLike, g: FunctionLike, contour: MellinContour) -> tuple[float, float]:
    """
    (integral of f g over (0, inf), (1/2 pi) integral of f*(nu + i tau) g*(1 - nu - i tau) d tau)
    """
    f_int, g_int = as_integrand(f), as_integrand(g)
    for func, point in ((f_int, contour.nu), (g_int, 1.0 - contour.nu)):
        lo, hi = func.strip
        if not lo < point < hi:
            raise StripError(f"Parseval abscissa {point:g} outside the strip ({lo:g}, {hi:g})")

    lo = max(f_int.support[0], g_int.support[0])
    hi = min(f_int.support[1], g_int.support[1])
    if lo >= hi:
        direct = 0.0
    else:
        direct, _ = integrate.quad(
            lambda u: float(f_int(np.array(u)) * g_int(np.array(u))), lo, hi,
            epsabs=1e-14, epsrel=1e-11, limit=400,
        )

    f_star, g_star = forward_transform(f_int), forward_transform(g_int)

    def F(s: NDArray[np.complex128]) -> NDArray[np.complex128]:
        return f_star(s) * g_star(1.0 - s)

    spectral, _ = contour_integral(F, contour)
    return float(direct), float(spectral.real)


def multiplier_table(
    md: MultiplierDescriptor, nu: float, tau_max: float, count: int = 201
) -> tuple[NDArray[np.float64], NDArray[np.complex128]]:
    """Multiplier values along Re s = nu for tau in [-tau_max, tau_max]"""
    if not md.strip[0] < nu < md.strip[1]:
        raise StripError(f"nu = {nu:g} outside the multiplier strip {md.strip}")
    tau = np.linspace(-tau_max, tau_max, count)
    return tau, np.asarray(multiplier_value(md, nu + 1j * tau))


def sampled_transform(g: GridFunction, s: complex) -> complex:
    """Mellin transform of tabulated samples, zero beyond the last node"""
    return mellin_forward(g, s, method="quadrature")
