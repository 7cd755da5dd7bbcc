"""
Laguerre kernels k+ and k- and their Mellin constants.

Both kernels come from one weight
    H(t) = (1 - t)^(2 alpha - 1) F(alpha, alpha; 2 alpha; 1 - t) / Gamma(2 alpha),  0 < t < 1,
through k-(v) = H(v) for v < 1 and k+(v) = v^(alpha - 1) k-(1/v) for v > 1.
Near t = 0, H(t) ~ (ln(1/t) + 2 psi(1) - 2 psi(alpha)) / Gamma(alpha)^2.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Literal, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from laguerre.errors import ParameterDomainError, QuadratureError
from laguerre.models.schemas import FractionalOrder
from laguerre.services import quadrature
from laguerre.services.specfun import EULER_PSI_1, kernel_hyp2f1

logger = logging.getLogger(__name__)

# Geometric panels for the kernel transforms reach t = 0.5 * 4^-KERNEL_PANELS
KERNEL_PANELS = 26

Side = Literal["plus", "minus"]


@dataclass(frozen=True)
class KernelEval:
    """Per-order cache of the constants every kernel evaluation needs"""

    order: FractionalOrder
    inv_gamma_2a: float
    log_gamma_2a: float
    psi_alpha: float
    inv_gamma_a_sq: float

    @property
    def alpha(self) -> float:
        return self.order.value

    @property
    def log_constant(self) -> float:
        """2 psi(1) - 2 psi(alpha), the constant of the logarithmic end behaviour"""
        return 2.0 * EULER_PSI_1 - 2.0 * self.psi_alpha

    def weight(self, t: ArrayLike) -> NDArray[np.float64]:
        """H(t) on 0 < t < 1"""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        return (1.0 - t_arr) ** (2.0 * self.alpha - 1.0) * self.regular_weight(t_arr)

    def regular_weight(self, t: ArrayLike) -> NDArray[np.float64]:
        """H(t) / (1 - t)^(2 alpha - 1), smooth up to t = 1"""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        return kernel_hyp2f1(self.alpha, 1.0 - t_arr, t_arr, self.psi_alpha) * self.inv_gamma_2a


@lru_cache(maxsize=512)
def kernel_eval(alpha: float) -> KernelEval:
    order = FractionalOrder.of(alpha)
    return KernelEval(
        order=order,
        inv_gamma_2a=math.exp(-special.gammaln(2.0 * alpha)),
        log_gamma_2a=float(special.gammaln(2.0 * alpha)),
        psi_alpha=float(special.digamma(alpha)),
        inv_gamma_a_sq=math.exp(-2.0 * special.gammaln(alpha)),
    )


def _as_output(values: NDArray[np.float64], scalar: bool) -> Union[float, NDArray[np.float64]]:
    return float(values[0]) if scalar else values


def k_minus(ke: KernelEval, v: ArrayLike) -> Union[float, NDArray[np.float64]]:
    """
    k-(v) = v^-alpha (1 - v)^(2 alpha - 1) F(alpha, alpha; 2 alpha; 1 - 1/v) / Gamma(2 alpha)
    for 0 < v < 1, zero for v >= 1; evaluated in the Pfaff-transformed form H(v).
    """
    v_arr = np.asarray(v, dtype=float)
    scalar = v_arr.ndim == 0
    v_arr = np.atleast_1d(v_arr)
    if np.any(v_arr <= 0):
        raise ParameterDomainError("k- is defined for v > 0")
    out = np.zeros_like(v_arr)
    inside = v_arr < 1.0
    if np.any(inside):
        if ke.alpha == 1.0:
            out[inside] = -np.log(v_arr[inside])
        else:
            out[inside] = ke.weight(v_arr[inside])
    return _as_output(out, scalar)


def k_plus(ke: KernelEval, v: ArrayLike) -> Union[float, NDArray[np.float64]]:
    """
    k+(v) = (v - 1)^(2 alpha - 1) F(alpha, alpha; 2 alpha; 1 - v) / Gamma(2 alpha)
    for v > 1, zero for v <= 1.
    """
    v_arr = np.asarray(v, dtype=float)
    scalar = v_arr.ndim == 0
    v_arr = np.atleast_1d(v_arr)
    if np.any(v_arr <= 0):
        raise ParameterDomainError("k+ is defined for v > 0")
    out = np.zeros_like(v_arr)
    outside = v_arr > 1.0
    if np.any(outside):
        out[outside] = np.exp(log_k_plus(ke, v_arr[outside]))
    return _as_output(out, scalar)


def log_k_plus(ke: KernelEval, v: ArrayLike) -> NDArray[np.float64]:
    """ln k+(v) for v > 1; stays finite where k+ itself over- or underflows"""
    vv = np.atleast_1d(np.asarray(v, dtype=float))
    if np.any(vv <= 1.0):
        raise ParameterDomainError("ln k+ is defined for v > 1")
    if ke.alpha == 1.0:
        return np.log(np.log(vv))
    # Pfaff: F(a, a; 2a; 1 - v) = v^-a F(a, a; 2a; 1 - 1/v)
    hyp = kernel_hyp2f1(ke.alpha, (vv - 1.0) / vv, 1.0 / vv, ke.psi_alpha)
    return (
        (2.0 * ke.alpha - 1.0) * np.log(vv - 1.0) - ke.alpha * np.log(vv) + np.log(hyp) - ke.log_gamma_2a
    )


def _log_tail(ke: KernelEval, sigma: complex, eps: float) -> complex:
    # integral over (0, eps) of t^(sigma-1) (ln(1/t) + c) / Gamma(alpha)^2
    log_eps = math.log(eps)
    lead = eps**sigma
    return complex(lead * ((-log_eps + ke.log_constant) / sigma + 1.0 / sigma**2) * ke.inv_gamma_a_sq)


def _unit_transform(
    ke: KernelEval,
    integrand: Callable[[NDArray[np.float64]], NDArray[np.complex128]],
    sigma: complex,
) -> complex:
    """
    Integral over (0, 1) of an integrand carrying (1 - t)^(2 alpha - 1) at t = 1
    and t^(sigma - 1)(ln(1/t) + c) / Gamma(alpha)^2 at t = 0.
    """
    if sigma.real <= 0:
        raise ParameterDomainError("kernel Mellin integral diverges at the logarithmic end")
    edge = 2.0 * ke.alpha - 1.0
    jacobi = quadrature.jacobi_rule(0.5, 1.0, upper_exponent=edge)
    total = complex(np.dot(jacobi.weights, integrand(jacobi.nodes) / (1.0 - jacobi.nodes) ** edge))
    plain = quadrature.QuadratureRule.empty()
    for j in range(KERNEL_PANELS):
        hi = 0.5 * quadrature.GEOMETRIC_RATIO ** (-j)
        plain = plain + quadrature.legendre_rule(hi / quadrature.GEOMETRIC_RATIO, hi)
    total += complex(np.dot(plain.weights, integrand(plain.nodes)))
    eps = 0.5 * quadrature.GEOMETRIC_RATIO ** (-KERNEL_PANELS)
    total += _log_tail(ke, sigma, eps)
    if not np.isfinite(total):
        raise QuadratureError(f"kernel Mellin integral not finite at sigma = {sigma}")
    return total


def kernel_mellin(ke: KernelEval, s: complex, side: Side = "plus") -> complex:
    """
    Mellin transform of k+ (Re s < 1 - alpha) or k- (Re s > 0) by quadrature.

    The k+ integral over (1, inf) is taken in t = 1/v, where it becomes an
    integral over (0, 1) of k+(1/t) t^(-s-1).
    """
    s = complex(s)
    if side == "plus":
        if not ke.alpha + s.real < 1.0:
            raise ParameterDomainError("k+ Mellin transform needs alpha + Re s < 1")

        def plus_integrand(t: NDArray[np.float64]) -> NDArray[np.complex128]:
            return np.asarray(k_plus(ke, 1.0 / t)) * t ** (-s - 1.0)

        return _unit_transform(ke, plus_integrand, 1.0 - ke.alpha - s)

    if not s.real > 0:
        raise ParameterDomainError("k- Mellin transform needs Re s > 0")

    def minus_integrand(t: NDArray[np.float64]) -> NDArray[np.complex128]:
        return np.asarray(k_minus(ke, t)) * t ** (s - 1.0)

    return _unit_transform(ke, minus_integrand, s)


def c_plus(alpha: float, nu: float) -> float:
    """C+(alpha, nu) = integral over (1, inf) of k+(v) v^(nu - 1) dv, needs alpha + nu < 1"""
    ke = kernel_eval(alpha)
    if not alpha + nu < 1.0:
        raise ParameterDomainError(f"C+ needs alpha + nu < 1, got alpha={alpha}, nu={nu}")
    value = kernel_mellin(ke, nu, "plus").real
    logger.debug(f"C+({alpha}, {nu}) = {value:.15g}")
    return value


def c_minus(alpha: float, nu: float) -> float:
    """C-(alpha, nu) = integral over (0, 1) of k-(v) v^(nu - 1) dv, needs nu > 0"""
    ke = kernel_eval(alpha)
    if not nu > 0:
        raise ParameterDomainError(f"C- needs nu > 0, got nu={nu}")
    value = kernel_mellin(ke, nu, "minus").real
    logger.debug(f"C-({alpha}, {nu}) = {value:.15g}")
    return value


def kernel_norm(alpha: float, nu: float, r: float, side: Side = "plus") -> float:
    """
    ||k+-||_{nu,r} = (integral of |k(v)|^r v^(nu r - 1) dv)^(1/r).

    Equal to C+-(alpha, nu) at r = 1; kernels are non-negative.
    """
    if r < 1:
        raise ParameterDomainError("kernel norm exponent r >= 1 required")
    if r == 1.0:
        return c_plus(alpha, nu) if side == "plus" else c_minus(alpha, nu)
    ke = kernel_eval(alpha)
    if (2.0 * alpha - 1.0) * r <= -1.0:
        raise ParameterDomainError("kernel norm diverges at v = 1 for this r")
    # |k|^r near the log end behaves like t^(rho - 1) |ln t|^r, handled by the panels
    if side == "plus":
        rho = r * (1.0 - alpha - nu)
        if rho <= 0:
            raise ParameterDomainError("k+ norm needs alpha + nu < 1")

        def plus_integrand(t: NDArray[np.float64]) -> NDArray[np.float64]:
            return np.abs(np.asarray(k_plus(ke, 1.0 / t))) ** r * t ** (-nu * r - 1.0)

        integrand = plus_integrand
    else:
        rho = r * nu
        if rho <= 0:
            raise ParameterDomainError("k- norm needs nu > 0")

        def minus_integrand(t: NDArray[np.float64]) -> NDArray[np.float64]:
            return np.abs(np.asarray(k_minus(ke, t))) ** r * t ** (nu * r - 1.0)

        integrand = minus_integrand

    edge = (2.0 * alpha - 1.0) * r
    jacobi = quadrature.jacobi_rule(0.5, 1.0, upper_exponent=edge)
    total = float(np.dot(jacobi.weights, integrand(jacobi.nodes) / (1.0 - jacobi.nodes) ** edge))
    panels = quadrature.geometric_panel_count(rho - 1.0, 0.5)
    plain = quadrature.geometric_rule(0.5, panels)
    total += float(np.dot(plain.weights, integrand(plain.nodes)))
    return total ** (1.0 / r)
